"""Sequential merging of screened candidates.

Each candidate is tested by comparing the mean of the segment on its left with
the mean of the segment on its right (segments delimited by the neighbouring
candidates).  A candidate whose two-sample statistic stays inside the normal
acceptance region is dropped, the two segments merge, and the preceding
change-point is re-estimated over the enlarged window.

All indices are 1-based; a change-point names the first index of the segment
to its right, and the sentinels ``1`` and ``n + 1`` bound the sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._validation import InvalidInputError, as_series, check_probability
from .screening import Candidate
from .stats import normal_quantile


@dataclass(frozen=True)
class MergeConfig:
    alpha_merge: float = 0.01
    k_prime: int = 20

    def __post_init__(self):
        check_probability(self.alpha_merge, "alpha_merge")
        if int(self.k_prime) != self.k_prime or self.k_prime < 2:
            raise InvalidInputError(f"k_prime must be an integer >= 2, got {self.k_prime!r}")

    @property
    def critical_value(self) -> float:
        return normal_quantile(1.0 - self.alpha_merge / 2.0)


class _Prefix:
    """Prefix sums over a centered copy of the series, 1-based half-open ranges."""

    def __init__(self, x: np.ndarray):
        self.n = x.size
        self.csum = np.concatenate(([0.0], np.cumsum(x - x[0])))

    def mean(self, start: int, stop: int) -> float:
        # mean of x_start .. x_{stop-1}; offset cancels in differences
        return (self.csum[stop - 1] - self.csum[start - 1]) / (stop - start)

    def two_sample(self, a: int, cp: int, b: int, s: float) -> float:
        n_left = cp - a
        n_right = b - cp
        if n_left < 1 or n_right < 1:
            raise InvalidInputError(
                f"both segments must be nonempty, got [{a}, {cp}) and [{cp}, {b})"
            )
        diff = self.mean(a, cp) - self.mean(cp, b)
        return diff / (s * math.sqrt(1.0 / n_left + 1.0 / n_right))

    def best_split(self, a: int, b: int, margin: int) -> tuple[int, float]:
        """Maximizer of the weighted mean difference over ``[a+margin, b-margin]``."""
        lo, hi = a + margin, b - margin
        if lo > hi:
            raise InvalidInputError(
                f"no admissible split in [{a}, {b}) with minimum segment length {margin}"
            )
        j = np.arange(lo, hi + 1)
        total = self.csum[b - 1] - self.csum[a - 1]
        left = self.csum[j - 1] - self.csum[a - 1]
        n_left = j - a
        n_right = b - j
        diff = left / n_left - (total - left) / n_right
        objective = np.abs(diff) / np.sqrt(1.0 / n_left + 1.0 / n_right)
        best = int(np.argmax(objective))
        return int(j[best]), float(objective[best])


def merge_test(series, left_start: int, cp: int, right_end_exclusive: int, s: float) -> float:
    """Two-sample statistic for a mean difference across ``cp``.

    ``T = (mean(x[left_start:cp-1]) - mean(x[cp:right_end_exclusive-1]))
    / (s * sqrt(1/L_left + 1/L_right))`` with the actual segment lengths.
    """
    x = as_series(series)
    if not (1 <= left_start and right_end_exclusive <= x.size + 1):
        raise InvalidInputError(
            f"segment bounds [{left_start}, {right_end_exclusive}) fall outside [1, {x.size + 1})"
        )
    if not s > 0:
        raise InvalidInputError(f"noise scale s must be positive, got {s!r}")
    return _Prefix(x).two_sample(left_start, cp, right_end_exclusive, s)


def reposition(series, left_anchor: int, right_anchor_exclusive: int, k_prime: int) -> int:
    """Single change-point likelihood-ratio estimate inside ``[a, b)``.

    Returns the ``j`` in ``[a + k_prime, b - k_prime]`` maximizing
    ``|mean(x[a:j-1]) - mean(x[j:b-1])| / sqrt(1/(j-a) + 1/(b-j))``;
    the smallest such ``j`` on ties.
    """
    x = as_series(series)
    if not (1 <= left_anchor < right_anchor_exclusive <= x.size + 1):
        raise InvalidInputError(
            f"window [{left_anchor}, {right_anchor_exclusive}) is not inside [1, {x.size + 1})"
        )
    return _Prefix(x).best_split(left_anchor, right_anchor_exclusive, int(k_prime))[0]


def _as_points(candidates: Iterable) -> list[int]:
    return [c.index if isinstance(c, Candidate) else int(c) for c in candidates]


def merge(series, candidates: Sequence, config: MergeConfig, s: float) -> list[int]:
    """Walk the candidates left to right, dropping those that fail the merge test.

    Parameters
    ----------
    series : array_like
    candidates : sequence of Candidate or int
        Sorted 1-based positions, at least ``config.k_prime`` apart from each
        other and from the sentinels ``1`` and ``n + 1``.
    config : MergeConfig
    s : float
        Global noise scale (see :func:`samecp.stats.diff_variance`).

    Returns
    -------
    list of int
        Surviving (possibly repositioned) change-points.
    """
    x = as_series(series)
    if not s > 0:
        raise InvalidInputError(f"noise scale s must be positive, got {s!r}")
    n = x.size
    points = _as_points(candidates)
    k_prime = int(config.k_prime)
    bounds = [1, *points, n + 1]
    gaps = np.diff(bounds)
    if np.any(gaps < k_prime):
        raise InvalidInputError(
            f"candidates must be increasing and at least k_prime={k_prime} apart "
            "from each other and from the sequence ends"
        )

    prefix = _Prefix(x)
    crit = config.critical_value
    i = 0
    while i < len(points):
        left = points[i - 1] if i > 0 else 1
        right = points[i + 1] if i + 1 < len(points) else n + 1
        t = prefix.two_sample(left, points[i], right, s)
        if abs(t) > crit:
            i += 1
            continue
        del points[i]
        if i > 0:
            a = points[i - 2] if i >= 2 else 1
            b = points[i] if i < len(points) else n + 1
            points[i - 1] = prefix.best_split(a, b, k_prime)[0]
    return points
