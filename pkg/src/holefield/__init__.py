"""Analytical bounds and Monte Carlo simulation for the interference Laplace
transform and SIR coverage at the typical point of a Poisson hole process."""

from .bounds import (
    Estimator,
    LaplaceEstimate,
    coverage,
    density_php,
    evaluate,
    hole_kernel_integral,
    laplace_fosa,
    laplace_lb1,
    laplace_lb2_two_hole,
    laplace_lbk,
    laplace_overlap_approx,
    laplace_ppp,
    laplace_single_hole_conditional,
    laplace_ub,
    ratio_approx,
)
from .model import (
    ConfigError,
    LaplaceArgument,
    NetworkParams,
    PRESET_NAMES,
    ScenarioPreset,
    coverage_argument,
    db_to_linear,
    linear_to_db,
    preset,
)
from .montecarlo import SimConfig, SimResult, empirical_coverage, empirical_laplace, simulate
from .overlap import HolePair, lens_area, mean_overlap_area, overlap_kernel_integral
from .quadrature import QuadResult, QuadSpec, QuadratureError, integrate, integrate_semi_infinite

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Estimator",
    "HolePair",
    "LaplaceArgument",
    "LaplaceEstimate",
    "NetworkParams",
    "PRESET_NAMES",
    "QuadResult",
    "QuadSpec",
    "QuadratureError",
    "ScenarioPreset",
    "SimConfig",
    "SimResult",
    "coverage",
    "coverage_argument",
    "db_to_linear",
    "density_php",
    "empirical_coverage",
    "empirical_laplace",
    "evaluate",
    "hole_kernel_integral",
    "integrate",
    "integrate_semi_infinite",
    "laplace_fosa",
    "laplace_lb1",
    "laplace_lb2_two_hole",
    "laplace_lbk",
    "laplace_overlap_approx",
    "laplace_ppp",
    "laplace_single_hole_conditional",
    "laplace_ub",
    "lens_area",
    "linear_to_db",
    "mean_overlap_area",
    "overlap_kernel_integral",
    "preset",
    "ratio_approx",
    "simulate",
]
