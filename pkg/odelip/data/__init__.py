"""Data package initialization"""

from odelip.data.noise import sample_initial_conditions, mean_range, mean_ranges, add_noise
from odelip.data.derivatives import odd_extend, estimate_derivatives
from odelip.data.smoothing import SmoothingCurve, fit_smoothing_curve, default_roughness
from odelip.data.pipeline import build_dataset, SMOOTH_THEN_EXTEND, EXTEND_THEN_SMOOTH
from odelip.data.io import write_dataset, read_dataset

__all__ = [
    "sample_initial_conditions",
    "mean_range",
    "mean_ranges",
    "add_noise",
    "odd_extend",
    "estimate_derivatives",
    "SmoothingCurve",
    "fit_smoothing_curve",
    "default_roughness",
    "build_dataset",
    "SMOOTH_THEN_EXTEND",
    "EXTEND_THEN_SMOOTH",
    "write_dataset",
    "read_dataset",
]
