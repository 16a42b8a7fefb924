"""Solver and verification harness for u_t - Lap(u) = |x|^(-gamma) u^q, 0 < q < 1.

The forcing is sublinear and carries a singular radial weight, so the zero
state is a solution next to nontrivial ones and classical uniqueness fails.
This package builds the maximal solution by a monotone regularization ladder,
bounds it from below by an explicit self-similar barrier, and exposes the
scalar constants that decide when a weighted contraction argument restores
uniqueness.  Every inequality the analysis rests on is mirrored by a runnable
check in :mod:`singheat.verify`.
"""

from .constants import (
    ConstantsReport,
    GammaStarResult,
    beta_gamma,
    ck_fixed_point,
    ck_lower_bound,
    ck_sequence,
    constants_report,
    eta0,
    eta1,
    eta2,
    eta_k,
    eta_k_limit,
    gamma_star,
    lambda_gamma,
    mittag_leffler,
)
from .errors import (
    ConvergenceError,
    GridMismatchError,
    ParameterError,
    SeriesRangeError,
    TruncationError,
)
from .fields import Grid, GridFunction, Params, make_grid, sample, standard_data, sup_norm, weight_field
from .scheme import (
    Nonlinearity,
    SolveConfig,
    TimeMesh,
    Trajectory,
    contraction_window,
    duhamel_rule,
    g_n,
    monotone_solve,
    picard_solve,
    positive_part,
    subsolution_coefficient,
    subsolution_w,
)
from .semigroup import (
    HeatPropagator,
    apply_heat,
    apply_weighted_heat,
    gaussian_exact,
    gaussian_floor,
    heat_kernel,
)
from .verify import (
    CheckReport,
    GronwallInstance,
    check_comparison,
    check_gronwall,
    check_heaviside_gap,
    check_lambda_limit,
    check_lower_bound,
    check_max_at_origin,
    check_smoothing_exponent,
    check_subsolution,
    check_uniqueness_contraction,
    default_suite,
    gronwall_envelope,
    run_suite,
    volterra_extremal,
)

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "ConstantsReport",
    "ConvergenceError",
    "GammaStarResult",
    "Grid",
    "GridFunction",
    "GridMismatchError",
    "GronwallInstance",
    "HeatPropagator",
    "Nonlinearity",
    "ParameterError",
    "Params",
    "SeriesRangeError",
    "SolveConfig",
    "TimeMesh",
    "Trajectory",
    "TruncationError",
    "apply_heat",
    "apply_weighted_heat",
    "beta_gamma",
    "check_comparison",
    "check_gronwall",
    "check_heaviside_gap",
    "check_lambda_limit",
    "check_lower_bound",
    "check_max_at_origin",
    "check_smoothing_exponent",
    "check_subsolution",
    "check_uniqueness_contraction",
    "ck_fixed_point",
    "ck_lower_bound",
    "ck_sequence",
    "constants_report",
    "contraction_window",
    "default_suite",
    "duhamel_rule",
    "eta0",
    "eta1",
    "eta2",
    "eta_k",
    "eta_k_limit",
    "g_n",
    "gamma_star",
    "gaussian_exact",
    "gaussian_floor",
    "gronwall_envelope",
    "heat_kernel",
    "lambda_gamma",
    "make_grid",
    "mittag_leffler",
    "monotone_solve",
    "picard_solve",
    "positive_part",
    "run_suite",
    "sample",
    "standard_data",
    "subsolution_coefficient",
    "subsolution_w",
    "sup_norm",
    "volterra_extremal",
    "weight_field",
]
