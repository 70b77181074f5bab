"""Scalar statistical primitives shared by the segmenters.

The screening threshold comes from the folded normal distribution (the law of
``|Z|`` for standard normal ``Z``), whose CDF is ``erf(x / sqrt(2))``.  Both the
CDF and the quantile functions below are closed-form wrappers around the
standard library's ``math.erf`` and ``statistics.NormalDist`` so they can be
called inside hot loops without numerical integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from ._validation import InvalidInputError, as_series, check_probability

_STD_NORMAL = NormalDist()
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class VarianceEstimate:
    """Noise variance ``s2`` together with its square root ``s``."""

    s2: float
    s: float

    @classmethod
    def from_s2(cls, s2: float) -> "VarianceEstimate":
        return cls(s2=float(s2), s=math.sqrt(s2))


def diff_variance(series) -> VarianceEstimate:
    """Difference-based estimate of the noise variance.

    Computes ``sum((x[i] - x[i-1])**2) / (2 * (n - 1))``.  Because only first
    differences enter, a sparse set of mean shifts inflates the estimate by
    ``sum(h_j**2) / (2 * (n - 1))``, which vanishes as ``n`` grows.

    Parameters
    ----------
    series : array_like
        Observations ``x_1..x_n`` with ``n >= 2``.

    Returns
    -------
    VarianceEstimate
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InvalidInputError(
            f"diff_variance needs a series of length at least 2, got {x.size}"
        )
    x = as_series(x, min_length=2)
    d = np.diff(x)
    s2 = float(np.dot(d, d)) / (2.0 * (x.size - 1))
    return VarianceEstimate.from_s2(s2)


def folded_cdf(x: float) -> float:
    """CDF of ``|Z|`` at ``x >= 0``; equals ``2 * Phi(x) - 1``."""
    x = float(x)
    if not x >= 0.0:
        raise InvalidInputError(f"folded_cdf is defined for x >= 0, got {x!r}")
    return math.erf(x / _SQRT2)


def normal_quantile(p: float) -> float:
    """Standard normal quantile ``Phi^{-1}(p)`` for ``0 < p < 1``."""
    p = check_probability(p, "p")
    # inv_cdf is accurate to a few ulps, but it is only exactly antisymmetric
    # when evaluated on the smaller tail.
    if p > 0.5:
        return -_STD_NORMAL.inv_cdf(1.0 - p)
    return _STD_NORMAL.inv_cdf(p)


def folded_quantile(alpha: float) -> float:
    """Upper ``alpha`` quantile of ``|Z|``, i.e. ``delta`` with ``P(|Z| > delta) = alpha``.

    ``folded_quantile(1) == 0``.  Evaluated as ``-Phi^{-1}(alpha / 2)`` so that
    small ``alpha`` does not lose digits to the ``1 - alpha/2`` subtraction.
    """
    alpha = check_probability(alpha, "alpha", upper_inclusive=True)
    if alpha == 1.0:
        return 0.0
    return -_STD_NORMAL.inv_cdf(alpha / 2.0)
