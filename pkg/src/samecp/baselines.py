"""Comparison segmenters: recursive binary segmentation and PELT.

Both work on the same 1-based change-point convention as the rest of the
package and normalize by the difference-based noise estimate, so their
decisions are invariant to shifting or positively rescaling the series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numba import njit

from ._validation import InvalidInputError, as_series, check_probability
from .merging import _Prefix
from .stats import diff_variance, normal_quantile


def _check_length(n: int, min_seg: int) -> int:
    if int(min_seg) != min_seg or min_seg < 1:
        raise InvalidInputError(f"min_seg must be a positive integer, got {min_seg!r}")
    min_seg = int(min_seg)
    if n < 2 * min_seg:
        raise InvalidInputError(
            f"series of length {n} is too short for min_seg={min_seg} (needs {2 * min_seg})"
        )
    return min_seg


def binary_segmentation(
    series, alpha: float = 0.01, min_seg: int = 20, *, bonferroni: bool = False
) -> list[int]:
    """Recursive binary segmentation with a two-sample z criterion.

    Each interval ``[a, b)`` is split at the position maximizing the
    standardized mean difference (the same objective as
    :func:`samecp.merging.reposition`) if that maximum exceeds the normal
    critical value; both halves are then processed in turn.

    Parameters
    ----------
    series : array_like
    alpha : float
        Two-sided level of each split test.
    min_seg : int
        Minimum segment length, also enforced against the sequence ends.
    bonferroni : bool
        Divide ``alpha`` by the number of admissible split positions in the
        interval being tested.  Off by default; it suppresses false splits
        but also most short interior segments, which a single split cannot
        isolate well in the first place.

    Returns
    -------
    list of int
        Sorted 1-based change-points.
    """
    x = as_series(series)
    alpha = check_probability(alpha, "alpha")
    min_seg = _check_length(x.size, min_seg)
    s = diff_variance(x).s
    if s == 0.0:
        return []
    prefix = _Prefix(x)
    found: list[int] = []
    stack = [(1, x.size + 1)]
    while stack:
        a, b = stack.pop()
        if b - a < 2 * min_seg:
            continue
        j, stat = prefix.best_split(a, b, min_seg)
        n_splits = b - a - 2 * min_seg + 1
        level = alpha / n_splits if bonferroni else alpha
        if stat / s > normal_quantile(1.0 - level / 2.0):
            found.append(j)
            stack.append((j, b))
            stack.append((a, j))
    return sorted(found)


@dataclass(frozen=True)
class PenaltySpec:
    """Per-change-point penalty for :func:`pelt`.

    ``bic`` uses ``2 log n``, ``aic`` uses ``2``; ``manual`` takes ``value``.
    """

    kind: Literal["bic", "aic", "manual"] = "bic"
    value: float = 0.0
    min_seg: int = 20

    def __post_init__(self):
        if self.kind not in ("bic", "aic", "manual"):
            raise InvalidInputError(f"unknown penalty kind {self.kind!r}")
        if self.kind == "manual" and not (self.value >= 0 and math.isfinite(self.value)):
            raise InvalidInputError(f"manual penalty must be finite and >= 0, got {self.value!r}")
        if int(self.min_seg) != self.min_seg or self.min_seg < 1:
            raise InvalidInputError(f"min_seg must be a positive integer, got {self.min_seg!r}")

    def beta(self, n: int) -> float:
        if self.kind == "bic":
            return 2.0 * math.log(n)
        if self.kind == "aic":
            return 2.0
        return float(self.value)


def _prefix_moments(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xc = x - x.mean()
    return (
        np.concatenate(([0.0], np.cumsum(xc))),
        np.concatenate(([0.0], np.cumsum(xc * xc))),
    )


@njit(cache=True)
def _segment_cost(s1, s2, scale, tau, t):
    # residual sum of squares of the 0-based half-open block [tau, t)
    total = s1[t] - s1[tau]
    rss = (s2[t] - s2[tau]) - total * total / (t - tau)
    return max(rss, 0.0) / scale


@njit(cache=True)
def _pelt_core(s1, s2, scale, beta, m, prune):
    n = s1.size - 1
    best = np.full(n + 1, np.inf)
    best[0] = -beta
    last = np.zeros(n + 1, dtype=np.int64)
    active = np.empty(n + 1, dtype=np.int64)
    active[0] = 0
    count = 1
    # value of F(tau) + cost(tau, t) + beta from the previous step, and the
    # step at which a dominated tau may leave the active set
    prev_value = np.full(n + 1, -np.inf)
    drop_at = np.full(n + 1, n + 1, dtype=np.int64)
    for t in range(m, n + 1):
        fresh = t - m
        if fresh >= m:
            active[count] = fresh
            count += 1
        fmin = np.inf
        arg = 0
        kept = 0
        have_prev = t > m
        limit = best[t - 1] + beta + 1e-9 * (abs(best[t - 1]) + 1.0) if have_prev else np.inf
        for q in range(count):
            tau = active[q]
            if prune:
                if have_prev and prev_value[tau] > limit and drop_at[tau] > t - 1 + m:
                    drop_at[tau] = t - 1 + m
                if drop_at[tau] <= t:
                    continue
            v = best[tau] + _segment_cost(s1, s2, scale, tau, t) + beta
            prev_value[tau] = v
            # strict < keeps the smallest tau on ties; active stays sorted
            if v < fmin:
                fmin = v
                arg = tau
            active[kept] = tau
            kept += 1
        count = kept
        best[t] = fmin
        last[t] = arg
    return last


def pelt(series, penalty: PenaltySpec | None = None, *, prune: bool = True) -> list[int]:
    """Exact penalized optimal partitioning of a Gaussian mean-change model.

    Minimizes ``sum(cost(segment)) + beta * n_changes`` over all partitions
    whose segments are at least ``penalty.min_seg`` long, where the cost of a
    segment is its residual sum of squares divided by the difference-based
    variance estimate.

    With ``prune=True`` a split point ``tau`` is discarded once some later
    point ``t`` satisfies ``F(tau) + cost(tau, t) > F(t)``.  The test is applied
    ``min_seg`` steps late: ``t`` only dominates ``tau`` for segment ends
    ``T >= t + min_seg``, where a split at ``t`` is admissible.  Pruning never
    changes the result.
    """
    penalty = penalty or PenaltySpec()
    x = as_series(series)
    n = x.size
    m = _check_length(n, penalty.min_seg)
    s2 = diff_variance(x).s2
    if s2 == 0.0:
        return []
    first, second = _prefix_moments(x)
    last = _pelt_core(first, second, s2, penalty.beta(n), m, bool(prune))

    cps = []
    t = n
    while last[t] > 0:
        t = int(last[t])
        cps.append(t + 1)
    return sorted(cps)
