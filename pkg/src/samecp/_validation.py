from __future__ import annotations

import numpy as np


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


def as_series(values, *, min_length: int = 1, name: str = "series") -> np.ndarray:
    """Return ``values`` as a 1-D float64 array, rejecting non-finite entries."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {x.shape}")
    if x.size < min_length:
        raise InvalidInputError(
            f"{name} must have at least {min_length} observations, got {x.size}"
        )
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0]) + 1
        raise InvalidInputError(f"{name} has a non-finite value at position {bad}")
    return x


def check_probability(value: float, name: str, *, upper_inclusive: bool = False) -> float:
    value = float(value)
    ok = 0.0 < value <= 1.0 if upper_inclusive else 0.0 < value < 1.0
    if not ok:
        interval = "(0, 1]" if upper_inclusive else "(0, 1)"
        raise InvalidInputError(f"{name} must lie in {interval}, got {value!r}")
    return value
