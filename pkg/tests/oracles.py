"""Slow, direct reference implementations used to check the fast paths.

Nothing here imports the prefix-sum or sliding-window machinery from
``samecp``; every statistic is recomputed from slices of the raw data.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import integrate, optimize


def folded_cdf_quad(x: float) -> float:
    value, _ = integrate.quad(
        lambda u: math.sqrt(2.0 / math.pi) * math.exp(-u * u / 2.0), 0.0, x,
        epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    return value


def folded_quantile_quad(alpha: float) -> float:
    if alpha == 1.0:
        return 0.0
    return optimize.brentq(lambda x: folded_cdf_quad(x) - (1.0 - alpha), 0.0, 40.0, xtol=1e-14, rtol=1e-15)


def normal_cdf_quad(z: float) -> float:
    half, _ = integrate.quad(
        lambda u: math.exp(-u * u / 2.0) / math.sqrt(2.0 * math.pi), 0.0, z,
        epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    return 0.5 + half


def normal_quantile_quad(p: float) -> float:
    return optimize.brentq(lambda z: normal_cdf_quad(z) - p, -12.0, 12.0, xtol=1e-14, rtol=1e-15)


def diff_variance_loop(x) -> float:
    total = 0.0
    for i in range(1, len(x)):
        total += (x[i] - x[i - 1]) ** 2
    return total / (2 * (len(x) - 1))


def scores_direct(x, k: int, s: float) -> dict[int, float]:
    """1-based position -> M_i^k, from slice means."""
    n = len(x)
    out = {}
    for i in range(k + 1, n - k + 2):
        left = np.mean(x[i - k - 1 : i - 1])
        right = np.mean(x[i - 1 : i + k - 1])
        out[i] = math.sqrt(k / 2.0) * abs(left - right) / s
    return out


def screen_bruteforce(x, k: int, delta: float, s: float) -> list[int]:
    """Vicinity-maximum rule evaluated position by position; ties go to the smaller index."""
    scores = scores_direct(x, k, s)
    n = len(x)
    picked = []
    for i, m in scores.items():
        if not m > delta:
            continue
        ok = True
        for j in range(max(i - k, k + 1), min(i + k - 1, n - k + 1) + 1):
            if j == i:
                continue
            if scores[j] > m or (scores[j] == m and j < i):
                ok = False
                break
        if ok:
            picked.append(i)
    return picked


def two_sample_direct(x, a: int, cp: int, b: int, s: float) -> float:
    left = x[a - 1 : cp - 1]
    right = x[cp - 1 : b - 1]
    return (np.mean(left) - np.mean(right)) / (s * math.sqrt(1 / len(left) + 1 / len(right)))


def reposition_direct(x, a: int, b: int, k_prime: int) -> int:
    best_j, best_v = None, -1.0
    for j in range(a + k_prime, b - k_prime + 1):
        v = abs(two_sample_direct(x, a, j, b, 1.0))
        if v > best_v:
            best_j, best_v = j, v
    return best_j


def merge_reference(x, points: list[int], crit: float, k_prime: int, s: float) -> list[int]:
    """Literal walk: test, drop, re-estimate the left neighbour, move on."""
    n = len(x)
    pts = list(points)
    i = 0
    while i < len(pts):
        left = 1 if i == 0 else pts[i - 1]
        right = n + 1 if i == len(pts) - 1 else pts[i + 1]
        if abs(two_sample_direct(x, left, pts[i], right, s)) > crit:
            i += 1
            continue
        pts.pop(i)
        if i >= 1:
            a = 1 if i == 1 else pts[i - 2]
            b = n + 1 if i == len(pts) else pts[i]
            pts[i - 1] = reposition_direct(x, a, b, k_prime)
    return pts


def segment_cost_direct(x, a: int, b: int, s2: float) -> float:
    """RSS of 0-based x[a:b] over s2."""
    seg = x[a:b]
    return float(np.sum((seg - seg.mean()) ** 2)) / s2


def optimal_partition_dp(x, beta: float, min_seg: int, s2: float) -> tuple[list[int], float]:
    """Exhaustive O(n^2) optimal partitioning with no pruning.

    Returns the 1-based change-points and the optimal penalized cost.
    """
    n = len(x)
    F = [math.inf] * (n + 1)
    prev = [0] * (n + 1)
    F[0] = -beta
    for t in range(min_seg, n + 1):
        for tau in range(0, t - min_seg + 1):
            if tau != 0 and tau < min_seg:
                continue
            v = F[tau] + segment_cost_direct(x, tau, t, s2) + beta
            if v < F[t]:
                F[t], prev[t] = v, tau
    cps, t = [], n
    while prev[t] > 0:
        t = prev[t]
        cps.append(t + 1)
    return sorted(cps), F[n]


def partition_cost(x, cps: list[int], beta: float, s2: float) -> float:
    bounds = [0, *[c - 1 for c in cps], len(x)]
    return sum(segment_cost_direct(x, a, b, s2) for a, b in zip(bounds, bounds[1:])) + beta * len(cps)


def enumerate_partitions(n: int, min_seg: int):
    """Every admissible change-point set for a series of length n (tiny n only)."""
    inner = range(min_seg + 1, n - min_seg + 2)
    for r in range(0, n // min_seg):
        for combo in itertools.combinations(inner, r):
            bounds = [1, *combo, n + 1]
            if all(b - a >= min_seg for a, b in zip(bounds, bounds[1:])):
                yield list(combo)
