"""
osbrp
Exact linear-time repositioning for a single bike-sharing station
"""

from .exceptions import (
    ConfigError,
    ContractError,
    EpochRangeError,
    FeasibilityError,
    InputError,
    InstanceParseError,
    InstanceValidationError,
    InvariantViolation,
    OsbrpError,
    SearchSpaceTooLarge,
)
from .global_solver import Solution, StagePlan, prefix_loss, solve, solve_uncapacitated, verify_solution
from .instance_io import GeneratorConfig, generate, read_instance, write_instance, write_trajectory
from .milp_export import LpModel, build_lp_model, export_lp, solve_lp_model
from .model import (
    BaseTrajectory,
    Instance,
    TrajectoryDiagnostics,
    Visit,
    diagnostics,
    null_trajectory,
    simulate,
    with_initial_stock,
)
from .one_intervention import (
    AugmentationOverride,
    LocalResult,
    OptimalInterval,
    evaluate_intervention,
    optimal_interval,
    vehicle_intervention,
)
from .oracle import OracleResult, brute_force, sweep_1d, wide_bracket, widen_windows

__version__ = "1.0.0"
