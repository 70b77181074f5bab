import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from samecp import InvalidInputError, SameConfig, Segmentation, diff_variance, segment
from samecp.stats import folded_quantile, normal_quantile

from oracles import merge_reference, screen_bruteforce, scores_direct


def test_constant_series_single_segment():
    seg = segment(np.full(1000, 0.7))
    assert seg.change_points == []
    assert [(s.start, s.end, s.length) for s in seg.segments] == [(1, 1000, 1000)]
    assert seg.segments[0].mean == pytest.approx(0.7, rel=1e-12)


def _oracle_pipeline(x, cfg):
    """Brute-force screening per bandwidth, spacing by hand, literal merge walk."""
    s = diff_variance(x).s
    delta = folded_quantile(cfg.alpha_screen)
    pooled = []
    for k in cfg.bandwidths:
        sc = scores_direct(x, k, s)
        pooled += [(i, sc[i], k) for i in screen_bruteforce(x, k, delta, s)]
    pooled.sort(key=lambda c: (c[0], c[2]))
    runs, kept = [], []
    for c in pooled:
        if runs and c[0] - runs[-1][-1][0] < cfg.k_prime:
            runs[-1].append(c)
        else:
            runs.append([c])
    for run in runs:
        kept.append(min(run, key=lambda c: (-c[1], c[0], c[2]))[0])
    crit = normal_quantile(1 - cfg.alpha_merge / 2)
    return merge_reference(x, kept, crit, cfg.k_prime, s)


def test_noiseless_block():
    x = np.r_[np.zeros(300), np.ones(100), np.zeros(600)]
    assert _oracle_pipeline(x, SameConfig()) == [301, 401]
    seg = segment(x)
    assert seg.change_points == [301, 401]
    assert [(s.start, s.end) for s in seg.segments] == [(1, 300), (301, 400), (401, 1000)]
    assert [s.mean for s in seg.segments] == [0.0, 1.0, 0.0]


@pytest.mark.parametrize("seed", range(6))
def test_pipeline_matches_oracle_random(seed):
    rng = np.random.default_rng(seed)
    x = np.repeat(rng.normal(0, 1.2, 8), 100) + rng.normal(size=800)
    cfg = SameConfig(bandwidths=(25, 50), k_prime=20)
    assert segment(x, cfg).change_points == _oracle_pipeline(x, cfg)


def test_too_short_for_bandwidth():
    with pytest.raises(InvalidInputError, match="smaller bandwidth"):
        segment(np.zeros(150))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"bandwidths": ()},
        {"bandwidths": (50, 25)},
        {"bandwidths": (25, 25)},
        {"k_prime": 30},
        {"k_prime": 1},
        {"alpha_screen": 1.0},
        {"alpha_merge": 0.0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(InvalidInputError):
        SameConfig(**kwargs)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_segments_tile_and_reconstruct(seed):
    rng = np.random.default_rng(seed)
    x = np.repeat(rng.normal(0, 2, 10), 200) + rng.normal(size=2000)
    seg = segment(x)
    assert len(seg.segments) == len(seg.change_points) + 1
    assert seg.segments[0].start == 1 and seg.segments[-1].end == x.size
    for a, b in zip(seg.segments, seg.segments[1:]):
        assert b.start == a.end + 1
    for s in seg.segments:
        assert s.mean == pytest.approx(x[s.start - 1 : s.end].mean(), rel=1e-12, abs=1e-12)
    total = sum(s.mean * s.length for s in seg.segments)
    assert total == pytest.approx(x.sum(), rel=1e-9, abs=1e-9)


def test_deterministic():
    x = np.random.default_rng(9).normal(size=5000)
    assert segment(x) == segment(x.copy())


def test_from_change_points_validates():
    with pytest.raises(InvalidInputError):
        Segmentation.from_change_points(np.zeros(10), [5, 5])
    with pytest.raises(InvalidInputError):
        Segmentation.from_change_points(np.zeros(10), [1])


@pytest.mark.slow
def test_linear_scaling():
    rng = np.random.default_rng(0)
    segment(rng.normal(size=1000))

    def median_time(n):
        x = rng.normal(size=n)
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            segment(x)
            times.append(time.perf_counter() - t0)
        return float(np.median(times))

    assert median_time(200_000) / median_time(100_000) <= 2.5
