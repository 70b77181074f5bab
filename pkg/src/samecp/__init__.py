"""Screening-and-merging change-point segmentation for piecewise-constant means.

Positions are 1-based throughout; a change-point is the first index of the
segment to its right.
"""

__version__ = "0.1.0"

from ._validation import InvalidInputError
from .baselines import PenaltySpec, binary_segmentation, pelt
from .merging import MergeConfig, merge, merge_test, reposition
from .pipeline import SameConfig, Segment, Segmentation, segment
from .screening import Candidate, local_stats, multi_screen, screen
from .stats import VarianceEstimate, diff_variance, folded_cdf, folded_quantile, normal_quantile

__all__ = [
    "Candidate",
    "InvalidInputError",
    "MergeConfig",
    "PenaltySpec",
    "SameConfig",
    "Segment",
    "Segmentation",
    "VarianceEstimate",
    "binary_segmentation",
    "diff_variance",
    "folded_cdf",
    "folded_quantile",
    "local_stats",
    "merge",
    "merge_test",
    "multi_screen",
    "normal_quantile",
    "pelt",
    "reposition",
    "screen",
    "segment",
]
