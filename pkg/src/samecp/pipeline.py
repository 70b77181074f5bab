from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from ._validation import InvalidInputError, as_series, check_probability
from .merging import MergeConfig, merge
from .screening import multi_screen
from .stats import diff_variance


@dataclass(frozen=True)
class SameConfig:
    """Tuning parameters for screening-and-merging segmentation.

    Defaults match the benchmark configuration: bandwidths
    25, 50 and 100, level 0.01 for both screening and merging, and minimum
    segment length 20.
    """

    bandwidths: tuple[int, ...] = (25, 50, 100)
    alpha_screen: float = 0.01
    k_prime: int = 20
    alpha_merge: float = 0.01

    def __post_init__(self):
        bw = tuple(int(k) for k in self.bandwidths)
        if not bw:
            raise InvalidInputError("bandwidths must be nonempty")
        if any(k < 1 for k in bw) or any(b <= a for a, b in zip(bw, bw[1:])):
            raise InvalidInputError(
                f"bandwidths must be positive and strictly increasing, got {list(bw)}"
            )
        object.__setattr__(self, "bandwidths", bw)
        check_probability(self.alpha_screen, "alpha_screen")
        check_probability(self.alpha_merge, "alpha_merge")
        if int(self.k_prime) != self.k_prime or self.k_prime < 2:
            raise InvalidInputError(f"k_prime must be an integer >= 2, got {self.k_prime!r}")
        if self.k_prime > bw[0]:
            raise InvalidInputError(
                f"k_prime={self.k_prime} exceeds the smallest bandwidth {bw[0]}"
            )

    @property
    def merge_config(self) -> MergeConfig:
        return MergeConfig(alpha_merge=self.alpha_merge, k_prime=self.k_prime)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bandwidths"] = list(self.bandwidths)
        return d


@dataclass(frozen=True)
class Segment:
    start: int
    end: int  # inclusive
    mean: float

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass
class Segmentation:
    change_points: list[int]
    segments: list[Segment] = field(default_factory=list)

    @classmethod
    def from_change_points(cls, series, change_points: Sequence[int]) -> "Segmentation":
        """Build per-segment summaries; ``change_points`` are 1-based segment starts."""
        x = as_series(series)
        cps = [int(c) for c in change_points]
        bounds = [1, *cps, x.size + 1]
        if any(b <= a for a, b in zip(bounds, bounds[1:])):
            raise InvalidInputError(
                f"change-points must be strictly increasing inside [2, {x.size}]"
            )
        segments = [
            Segment(start=a, end=b - 1, mean=float(np.mean(x[a - 1 : b - 1])))
            for a, b in zip(bounds, bounds[1:])
        ]
        return cls(change_points=cps, segments=segments)

    @property
    def n(self) -> int:
        return self.segments[-1].end if self.segments else 0


def segment(series, config: SameConfig | None = None) -> Segmentation:
    """Screening-and-merging segmentation of a piecewise-constant mean signal.

    Estimates the noise scale once from first differences, screens candidates
    at every bandwidth, merges them with sequential two-sample tests, and
    summarizes the resulting segments.

    Examples
    --------
    >>> import numpy as np
    >>> x = np.r_[np.zeros(300), np.ones(100), np.zeros(600)]
    >>> segment(x).change_points
    [301, 401]
    """
    config = config or SameConfig()
    x = as_series(series)
    need = 2 * config.bandwidths[-1]
    if x.size < need:
        raise InvalidInputError(
            f"series of length {x.size} is too short for bandwidth {config.bandwidths[-1]} "
            f"(needs {need}); pass a smaller bandwidth set"
        )
    var = diff_variance(x)
    if var.s == 0.0:
        # differences all zero: the series is constant
        return Segmentation.from_change_points(x, [])
    candidates = multi_screen(x, config.bandwidths, config.alpha_screen, config.k_prime, var.s)
    points = merge(x, candidates, config.merge_config, var.s)
    return Segmentation.from_change_points(x, points)
