"""Traveling-wave speeds and profiles for an activator-inhibitor system
through its sharp-interface limit energy.

The limit level gives a closed-form front speed and a nested root-finding
problem for the pulse speed and width.  The finite-interface-width level
minimizes the full constrained energy and recovers both as the width
shrinks.
"""

from .epsilon_solver import (
    AdmissibleProfile,
    DiscreteEnergy,
    EnergyReport,
    MinimizeResult,
    RecoveryProfile,
    SpeedResult,
    StudyResult,
    build_recovery,
    convergence_study,
    minimize_energy,
    recovery_profile,
    solver_grid,
    speed_eps,
)
from .errors import (
    BracketError,
    GridError,
    InvalidParameterError,
    NonConvergenceError,
    RegimeError,
)
from .limit_energy import (
    FrontEnergy,
    IntervalEnergy,
    LimitEnergyBreakdown,
    WidthCondition,
    front_energy,
    interval_energy,
    sharp_interface_energy,
    speed_ratio,
    width_condition,
)
from .model import (
    Params,
    Regime,
    RegimeTag,
    classify,
    gamma_star,
    gamma_star_limit,
    potentials,
)
from .nonlocal_operator import (
    CharRoots,
    InhibitorOperator,
    char_roots,
    lc_indicator,
    lc_solve_fd,
    nonlocal_energy,
)
from .wave_speeds import (
    FrontResult,
    PulseResult,
    front_condition,
    front_speed,
    limit_speed,
    optimal_width,
    pulse_speed,
)
from .weighted_space import (
    Grid,
    IntervalUnion,
    SampledFunction,
    shift,
    total_variation_e,
    total_variation_e_sampled,
    weighted_norms,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibleProfile", "BracketError", "CharRoots", "DiscreteEnergy",
    "EnergyReport", "FrontEnergy", "FrontResult", "Grid", "GridError",
    "InhibitorOperator", "IntervalEnergy", "IntervalUnion",
    "InvalidParameterError", "LimitEnergyBreakdown", "MinimizeResult",
    "NonConvergenceError", "Params", "PulseResult", "RecoveryProfile",
    "Regime", "RegimeError", "RegimeTag", "SampledFunction", "SpeedResult",
    "StudyResult", "WidthCondition", "build_recovery", "char_roots",
    "classify", "convergence_study", "front_condition", "front_energy",
    "front_speed", "gamma_star", "gamma_star_limit", "interval_energy",
    "lc_indicator", "lc_solve_fd", "limit_speed", "minimize_energy",
    "nonlocal_energy", "optimal_width", "potentials", "pulse_speed",
    "recovery_profile", "sharp_interface_energy", "shift", "solver_grid",
    "speed_eps", "speed_ratio", "total_variation_e",
    "total_variation_e_sampled", "weighted_norms", "width_condition",
]
