"""Nonlocal concave-convex energy toolkit on an interval grid.

Discretized fractional p-energy with exact exterior tail, ray (fibering)
analysis with the two-root projection, closed-form parameter thresholds,
concentrating-bubble scaling laws, and manifold-constrained descent for
positive and sign-changing critical points.
"""

from .bubble import (
    DEFAULT_DELTA_FRAC,
    DEFAULT_EPS_FRACS,
    BubbleSpec,
    ScalingFit,
    cutoff,
    fit_exponent,
    interaction_integrals,
    ladder,
    lq_mass_scaling,
    make_u_eps,
    mass_regime,
    profile_u,
)
from .constants import (
    P_BRANCH,
    ConstantsReport,
    SobolevEstimate,
    big_m,
    estimate_sobolev,
    mu_tilde,
    regime_report,
)
from .energy import (
    EnergyBreakdown,
    energy,
    form_a,
    gradient,
    lebesgue_mass,
    residual,
    seminorm_p,
    split_parts,
)
from .errors import (
    BisectionError,
    CollapseError,
    ConfigError,
    DegenerateDenominatorError,
    DegenerateInputError,
    GridMismatchError,
    NehariError,
    NoCrossingError,
    NoRootsError,
    NotMinusConeError,
    ParameterError,
    SolverError,
)
from .fibering import (
    FiberMap,
    FiberingReport,
    NehariClass,
    NehariTag,
    classify,
    fiber_derivatives,
    fiber_roots,
    perturbation_derivative,
    psi_and_t0,
    psi_mu,
)
from .config import DEFAULTS, apply_overrides, config_hash, load_config
from .grid import Grid, GridFunction, Params, build_grid, tail_weight
from .solver import (
    CrossingResult,
    FiberSupremum,
    SolveResult,
    SupScanResult,
    crossing_search,
    default_bubble,
    part_scales,
    project_minus,
    solve_positive,
    solve_sign_changing,
    sup_over_fiber,
    sup_scan_ab,
)
from .verification import ALL_GROUPS, CheckResult, run_battery

__version__ = "0.1.0"

__all__ = [
    "ALL_GROUPS",
    "BisectionError",
    "BubbleSpec",
    "CheckResult",
    "CollapseError",
    "ConfigError",
    "ConstantsReport",
    "CrossingResult",
    "DEFAULTS",
    "DEFAULT_DELTA_FRAC",
    "DEFAULT_EPS_FRACS",
    "DegenerateDenominatorError",
    "DegenerateInputError",
    "EnergyBreakdown",
    "FiberMap",
    "FiberSupremum",
    "FiberingReport",
    "Grid",
    "GridFunction",
    "GridMismatchError",
    "NehariClass",
    "NehariError",
    "NehariTag",
    "NoCrossingError",
    "NoRootsError",
    "NotMinusConeError",
    "P_BRANCH",
    "Params",
    "ParameterError",
    "ScalingFit",
    "SobolevEstimate",
    "SolveResult",
    "SolverError",
    "SupScanResult",
    "apply_overrides",
    "big_m",
    "build_grid",
    "classify",
    "config_hash",
    "crossing_search",
    "cutoff",
    "default_bubble",
    "energy",
    "estimate_sobolev",
    "fiber_derivatives",
    "fiber_roots",
    "fit_exponent",
    "form_a",
    "gradient",
    "interaction_integrals",
    "ladder",
    "lebesgue_mass",
    "load_config",
    "lq_mass_scaling",
    "make_u_eps",
    "mass_regime",
    "mu_tilde",
    "part_scales",
    "perturbation_derivative",
    "profile_u",
    "project_minus",
    "psi_and_t0",
    "psi_mu",
    "regime_report",
    "residual",
    "run_battery",
    "seminorm_p",
    "solve_positive",
    "solve_sign_changing",
    "split_parts",
    "sup_over_fiber",
    "sup_scan_ab",
    "tail_weight",
]
