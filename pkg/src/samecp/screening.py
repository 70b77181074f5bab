"""Local scan statistic and candidate screening.

For bandwidth ``k`` the diagnostic at position ``i`` (1-based, ``k+1 <= i <= n-k+1``)
compares the ``k`` observations just left of ``i`` with the ``k`` starting at ``i``::

    M_i = sqrt(k / 2) * |mean(x[i-k:i-1]) - mean(x[i:i+k-1])| / s

Under a constant mean with Gaussian noise each ``M_i`` is folded standard normal,
so one threshold serves every bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._validation import InvalidInputError, as_series, check_probability
from .stats import folded_quantile


@dataclass(frozen=True)
class Candidate:
    """A screened change-point candidate.

    ``index`` is 1-based and names the first observation of the right segment.
    """

    index: int
    score: float
    bandwidth: int


def _check_bandwidth(n: int, k: int) -> int:
    if int(k) != k or k < 1:
        raise InvalidInputError(f"bandwidth must be a positive integer, got {k!r}")
    k = int(k)
    if 2 * k > n:
        raise InvalidInputError(
            f"bandwidth k={k} needs at least 2k={2 * k} observations, series has n={n}"
        )
    return k


def local_stats(series, k: int, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Standardized local mean differences for every admissible position.

    Parameters
    ----------
    series : array_like
        Observations, length ``n >= 2k``.
    k : int
        Bandwidth (half-window length).
    s : float
        Noise scale, strictly positive.

    Returns
    -------
    indices : ndarray of int
        1-based positions ``k+1 .. n-k+1``.
    scores : ndarray of float
        ``M_i^k`` at those positions.
    """
    x = as_series(series)
    k = _check_bandwidth(x.size, k)
    if not s > 0:
        raise InvalidInputError(f"noise scale s must be positive, got {s!r}")
    # Centering keeps prefix sums small; integer-valued data stays exact.
    csum = np.concatenate(([0.0], np.cumsum(x - x[0])))
    n = x.size
    # 0-based split p = i-1 runs over k..n-k; left block x[p-k:p], right x[p:p+k]
    p = np.arange(k, n - k + 1)
    left = csum[p] - csum[p - k]
    right = csum[p + k] - csum[p]
    scores = np.abs(right - left) / k * (math.sqrt(k / 2.0) / s)
    return p + 1, scores


def window_max(a: np.ndarray, width: int) -> np.ndarray:
    """``out[j] = max(a[j:j+width])`` with positions past the end ignored.

    Block-decomposed running maxima (van Herk / Gil-Werman): two cumulative
    passes, so the cost is linear in ``len(a)`` whatever the width.
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    if width < 1:
        raise InvalidInputError("width must be positive")
    if n == 0:
        return a.copy()
    nblocks = -(-n // width) + 1
    padded = np.full(nblocks * width, -np.inf)
    padded[:n] = a
    blocks = padded.reshape(nblocks, width)
    prefix = np.maximum.accumulate(blocks, axis=1).ravel()
    suffix = np.maximum.accumulate(blocks[:, ::-1], axis=1)[:, ::-1].ravel()
    j = np.arange(n)
    return np.maximum(suffix[j], prefix[j + width - 1])


def select_local_maxima(scores: np.ndarray, k: int, delta: float) -> np.ndarray:
    """Positions (0-based into ``scores``) that are thresholded vicinity maxima.

    Position ``p`` qualifies when ``scores[p] > delta``, it is strictly larger
    than every score in ``[p-k, p-1]`` and at least as large as every score in
    ``[p, p+k-1]``.  Equal scores therefore resolve to the smallest index.
    """
    m = scores.size
    padded = np.concatenate((np.full(k, -np.inf), scores, np.full(k, -np.inf)))
    wmax = window_max(padded, k)
    p = np.arange(m)
    left_max = wmax[p]
    right_max = wmax[p + k]
    keep = (scores > delta) & (scores > left_max) & (scores >= right_max)
    return np.flatnonzero(keep)


def screen(series, k: int, delta: float, s: float) -> list[Candidate]:
    """Candidates whose diagnostic exceeds ``delta`` and dominates its vicinity.

    The vicinity of ``i`` is ``[i-k, i+k-1]`` clipped to the admissible range
    ``[k+1, n-k+1]``.
    """
    if not delta >= 0:
        raise InvalidInputError(f"threshold delta must be nonnegative, got {delta!r}")
    indices, scores = local_stats(series, k, s)
    k = int(k)
    hits = select_local_maxima(scores, k, float(delta))
    return [Candidate(int(indices[h]), float(scores[h]), k) for h in hits]


def enforce_spacing(candidates: Sequence[Candidate], k_min: int) -> list[Candidate]:
    """Thin a candidate list so consecutive indices are at least ``k_min`` apart.

    Candidates are sorted, then grouped into maximal runs whose consecutive
    gaps are below ``k_min``; each run is replaced by its highest-scoring
    member (ties go to the smaller index, then the smaller bandwidth).
    """
    if k_min < 1:
        raise InvalidInputError(f"k_min must be positive, got {k_min!r}")
    ordered = sorted(candidates, key=lambda c: (c.index, c.bandwidth))
    kept: list[Candidate] = []
    run: list[Candidate] = []
    for cand in ordered:
        if run and cand.index - run[-1].index >= k_min:
            kept.append(_run_winner(run))
            run = []
        run.append(cand)
    if run:
        kept.append(_run_winner(run))
    return kept


def _run_winner(run: list[Candidate]) -> Candidate:
    return min(run, key=lambda c: (-c.score, c.index, c.bandwidth))


def multi_screen(
    series, bandwidths: Sequence[int], alpha: float, k_min: int, s: float
) -> list[Candidate]:
    """Screen at every bandwidth with the shared threshold ``folded_quantile(alpha)``.

    The per-bandwidth candidate sets are pooled and thinned with
    :func:`enforce_spacing`, so the result does not depend on bandwidth order.
    """
    bandwidths = list(bandwidths)
    if not bandwidths:
        raise InvalidInputError("at least one bandwidth is required")
    alpha = check_probability(alpha, "alpha")
    delta = folded_quantile(alpha)
    x = as_series(series)
    pooled: list[Candidate] = []
    for k in bandwidths:
        pooled.extend(screen(x, k, delta, s))
    return enforce_spacing(pooled, k_min)
