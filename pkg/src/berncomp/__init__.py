"""Numerical toolkit for expected suprema of sign and Gaussian processes:
complexity estimators for finite index sets and composite function classes,
covering/entropy/chaining functionals and doubly exponential tail bounds.
"""

from .chaining import (
    AdmissibleSequence,
    CoveringResult,
    EntropyProfile,
    EntropyResult,
    admissible_capacity,
    build_admissible_sequence,
    chaining_expectation_bound,
    composite_entropy_bound,
    composite_rate,
    covering_number,
    entropy_number,
    entropy_profile,
    entropy_profile_from_csv,
    entropy_profile_to_csv,
    gamma2_upper,
    lipschitz_entropy_formula,
    lipschitz_entropy_profile,
    min_truncation_objective,
    sequence_from_text,
    sequence_to_text,
    truncation_objective,
    uniform_metric_space,
)
from .classes import (
    FiniteFunctionClass,
    FunctionClassOracle,
    GaussianRkhsBall,
    LipschitzBall,
    PiecewiseLinearClass,
    finite_class_from_csv,
    finite_class_sup,
    finite_class_to_csv,
    gaussian_gram,
    lipschitz_ball_sup,
    oracle_convexity_check,
    rkhs_ball_sup,
    sample_piecewise_linear_class,
)
from .complexity import (
    EstimatorConfig,
    bernoulli_complexity,
    composite_bernoulli_complexity,
    empirical_rademacher,
    gaussian_complexity,
    increment_ratio,
    sign_patterns,
)
from .core import (
    ComplexityEstimate,
    FiniteMetricSpace,
    PointSet,
    diameter2,
    estimates_to_csv,
    metric_space_from_pointset,
    norm_pq,
    pointset_from_csv,
    pointset_to_csv,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    DegenerateSetError,
    InvalidInputError,
    SolverError,
    ToolkitError,
)
from .simplex import simplex_maximize
from .tails import (
    TailSeriesParams,
    expectation_bound_from_tail,
    log_tail_series,
    sample_from_capped_tail,
    tail_crossing_point,
    tail_integral,
    tail_series,
    tail_series_capped,
    uncenter_tail,
)

__version__ = "0.1.0"
