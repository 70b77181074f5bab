import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from samecp import InvalidInputError, diff_variance, folded_cdf, folded_quantile, normal_quantile

from oracles import diff_variance_loop, folded_cdf_quad, folded_quantile_quad, normal_quantile_quad


@pytest.mark.parametrize(
    "values, expected",
    [([5, 5, 5, 5], 0.0), ([0, 1, 0, 1, 0], 0.5), ([1, 2, 4], 1.25)],
)
def test_diff_variance_examples(values, expected):
    est = diff_variance(values)
    assert est.s2 == expected
    assert est.s == math.sqrt(expected)


def test_diff_variance_rejects_short_series():
    with pytest.raises(InvalidInputError, match="at least 2"):
        diff_variance([1.0])


def test_diff_variance_matches_loop():
    x = np.random.default_rng(3).normal(size=257)
    assert diff_variance(x).s2 == pytest.approx(diff_variance_loop(x), rel=1e-13)


@given(
    st.lists(st.integers(-1000, 1000), min_size=2, max_size=60),
    st.integers(-10**6, 10**6),
)
def test_diff_variance_shift_invariant(values, shift):
    # integer data keeps every difference exact
    x = np.array(values, dtype=float)
    assert diff_variance(x + shift).s2 == diff_variance(x).s2


@given(st.integers(2, 500), st.integers(1, 499), st.floats(-50, 50, allow_nan=False))
def test_diff_variance_single_jump(n, where, h):
    where = min(where, n - 1)
    x = np.zeros(n)
    x[where:] = h
    assert diff_variance(x).s2 == pytest.approx(h * h / (2 * (n - 1)), rel=1e-12, abs=1e-300)


def test_diff_variance_consistency():
    rng = np.random.default_rng(11)
    est = [diff_variance(rng.normal(0, 2.0, 10_000)).s2 for _ in range(50)]
    assert abs(np.mean(est) - 4.0) <= 0.05 * 4.0


def test_folded_cdf_examples():
    assert folded_cdf(0.0) == 0.0
    assert folded_cdf(1.959964) == pytest.approx(0.95, abs=1e-6)
    assert folded_cdf(2.575829) == pytest.approx(0.99, abs=1e-6)


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 1.959964, 2.575829, 4.0, 7.5])
def test_folded_cdf_against_quadrature(x):
    assert folded_cdf(x) == pytest.approx(folded_cdf_quad(x), abs=1e-12)


def test_folded_cdf_rejects_negative():
    with pytest.raises(InvalidInputError):
        folded_cdf(-0.1)


@given(st.floats(0, 40), st.floats(0, 40))
def test_folded_cdf_monotone(a, b):
    lo, hi = sorted((a, b))
    assert folded_cdf(lo) <= folded_cdf(hi) <= 1.0


def test_folded_quantile_examples():
    assert folded_quantile(1.0) == 0.0
    assert folded_quantile(0.05) == pytest.approx(1.959964, abs=1e-6)
    assert folded_quantile(0.01) == pytest.approx(2.575829, abs=1e-6)


@pytest.mark.parametrize("alpha", [0.5, 0.1, 0.05, 0.01, 1e-4, 1e-8])
def test_folded_quantile_inverts_cdf(alpha):
    assert folded_cdf(folded_quantile(alpha)) == pytest.approx(1 - alpha, abs=1e-9)


@pytest.mark.parametrize("alpha", [0.10, 0.05, 0.01, 0.001])
def test_folded_quantile_matches_normal_quantile(alpha):
    assert folded_quantile(alpha) == pytest.approx(normal_quantile(1 - alpha / 2), abs=1e-8)


@settings(max_examples=200)
@given(st.floats(0.1, 5.0))
def test_folded_quantile_roundtrip(x):
    assert folded_quantile(1 - folded_cdf(x)) == pytest.approx(x, abs=1e-8)


@pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5, float("nan")])
def test_folded_quantile_rejects_bad_alpha(alpha):
    with pytest.raises(InvalidInputError):
        folded_quantile(alpha)


def test_normal_quantile_examples():
    assert normal_quantile(0.5) == 0.0
    assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)
    assert normal_quantile(0.995) == pytest.approx(2.575829, abs=1e-6)


@pytest.mark.parametrize("p", [0.001, 0.2, 0.975, 0.995, 0.9999])
def test_normal_quantile_against_quadrature(p):
    assert normal_quantile(p) == pytest.approx(normal_quantile_quad(p), abs=1e-9)


@given(st.floats(1e-6, 0.5))
def test_normal_quantile_antisymmetric(p):
    assert normal_quantile(1 - p) == pytest.approx(-normal_quantile(p), abs=1e-9)


@pytest.mark.parametrize("p", [0.0, 1.0, 2.0])
def test_normal_quantile_rejects_bad_p(p):
    with pytest.raises(InvalidInputError):
        normal_quantile(p)


def test_quadrature_oracle_sanity():
    # the oracle itself must reproduce the textbook two-sided 5% point
    assert folded_quantile_quad(0.05) == pytest.approx(1.959963984540054, abs=1e-9)
