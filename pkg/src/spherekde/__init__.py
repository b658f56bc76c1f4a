"""Truncated spectral kernel density estimation on S^2, B^3 and R^d."""

from .estimator import (
    BandwidthPolicy,
    DensityEstimate,
    DensityField,
    bandwidth,
    evaluate,
    evaluate_grid,
    evaluate_many,
    fit,
    rectify,
)
from .geometry import (
    BallPoint,
    EuclidPoint,
    GeoCoord,
    SphereQuadrature,
    UnitVector3,
    angular_distance,
    ball_distance,
    geo_to_unit,
    sphere_quadrature,
)
from .kernels import (
    TruncatedKernel,
    build_ball_kernel,
    build_sphere_kernel,
    eval_ball_kernel,
    eval_euclid_gauss_kernel,
    eval_sphere_kernel,
    truncation_error_bound,
    truncation_error_bound_n,
)
from .poly import gegenbauer1_all, legendre_all
from .selection import CvResult, SplitSpec, grid_search, log_loss, split
from .symbols import Symbol, g_sigma, gauss_symbol, sigma_for_smoothness

__version__ = "0.1.0"

__all__ = [
    "BandwidthPolicy",
    "DensityEstimate",
    "DensityField",
    "bandwidth",
    "evaluate",
    "evaluate_grid",
    "evaluate_many",
    "fit",
    "rectify",
    "BallPoint",
    "EuclidPoint",
    "GeoCoord",
    "SphereQuadrature",
    "UnitVector3",
    "angular_distance",
    "ball_distance",
    "geo_to_unit",
    "sphere_quadrature",
    "TruncatedKernel",
    "build_ball_kernel",
    "build_sphere_kernel",
    "eval_ball_kernel",
    "eval_euclid_gauss_kernel",
    "eval_sphere_kernel",
    "truncation_error_bound",
    "truncation_error_bound_n",
    "gegenbauer1_all",
    "legendre_all",
    "CvResult",
    "SplitSpec",
    "grid_search",
    "log_loss",
    "split",
    "Symbol",
    "g_sigma",
    "gauss_symbol",
    "sigma_for_smoothness",
]
