"""Projected subgradient methods with rate bounds that do not need Lipschitz continuity."""

from .bounds import (
    UNBOUNDED,
    GrowthModel,
    SecondMomentModel,
    fit_rate_exponent,
    growth_eval,
    shor_rhs,
    theorem_rhs,
)
from .core import (
    ConfigurationError,
    FeasibleRegion,
    OptimumCertificate,
    OracleError,
    Problem,
    RunTrace,
    StochasticOracle,
    UnsupportedOperation,
    exact_expectation,
    project,
    subgradient_inequality_check,
)
from .schedules import StepSchedule, step, verify_bounded_product, verify_recurrence
from .solvers import (
    AveragingRule,
    ensemble_expectation,
    run_deterministic,
    run_stochastic,
    weighted_average,
)

__version__ = "0.1.0"
