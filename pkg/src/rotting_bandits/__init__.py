"""Rested rotting bandits with infinitely many arms: simulation and benchmarks."""

__version__ = "0.1.0"

from .env import (
    ArmId,
    ArmState,
    ConfigurationError,
    EnvConfig,
    Environment,
    Observation,
    RottingSchedule,
    regret_increment,
)
from .engine import (
    ALGORITHMS,
    RunResult,
    RunSpec,
    default_checkpoints,
    make_run_spec,
    run_many,
    run_one,
)
from .experiments import (
    RhoRule,
    SummaryPoint,
    SweepSpec,
    fit_scaling,
    mean_ci,
    run_sweep,
    theory_bound,
)
from .seeding import mix_seed

__all__ = [
    "__version__",
    "ArmId",
    "ArmState",
    "ConfigurationError",
    "EnvConfig",
    "Environment",
    "Observation",
    "RottingSchedule",
    "regret_increment",
    "ALGORITHMS",
    "RunResult",
    "RunSpec",
    "default_checkpoints",
    "make_run_spec",
    "run_many",
    "run_one",
    "RhoRule",
    "SummaryPoint",
    "SweepSpec",
    "fit_scaling",
    "mean_ci",
    "run_sweep",
    "theory_bound",
    "mix_seed",
]
