"""Balanced-homodyne simulation and direct sampling of exponential phase
moments of smoothed phase-space quasidistributions."""

from ._core import backend
from .estimator import (
    MomentEstimate,
    cnl_coefficient,
    estimate_moment,
    estimate_spectrum,
    estimate_vs_s,
    extract_ordered_moment,
    moments_from_density,
)
from .homodyne import HomodyneDataset, MeasurementPlan, read_dataset, simulate, write_dataset
from .kernels import (
    OrderingBoundError,
    OrderingContext,
    filter_F,
    filter_F_series,
    kernel_base,
    kernel_series,
    sampling_kernel,
    wigner_limit_kernel,
)
from .phasedist import PhaseCurve, curve_error_stats, reconstruct
from .states import (
    GaussianMoments,
    StateSpec,
    coherent_density_matrix,
    exact_phase_distribution,
    exact_phase_moment,
    quadrature_pdf,
    quasidist_eval,
    smooth_quasidist,
    tabulate_quasidist,
)

__version__ = "0.1.0"

__all__ = [
    "HomodyneDataset",
    "GaussianMoments",
    "MeasurementPlan",
    "MomentEstimate",
    "OrderingBoundError",
    "OrderingContext",
    "PhaseCurve",
    "StateSpec",
    "backend",
    "cnl_coefficient",
    "coherent_density_matrix",
    "curve_error_stats",
    "estimate_moment",
    "estimate_spectrum",
    "estimate_vs_s",
    "exact_phase_distribution",
    "exact_phase_moment",
    "extract_ordered_moment",
    "filter_F",
    "filter_F_series",
    "kernel_base",
    "kernel_series",
    "moments_from_density",
    "quadrature_pdf",
    "quasidist_eval",
    "read_dataset",
    "reconstruct",
    "sampling_kernel",
    "simulate",
    "smooth_quasidist",
    "tabulate_quasidist",
    "wigner_limit_kernel",
    "write_dataset",
]
