"""Bernstein-Chlodowsky operators on intervals, curve-bounded domains, triangles and disks."""
from .basis import (
    BasisIndex,
    ShiftedInterval,
    basis_mode,
    bernstein,
    bernstein_all,
    chlodowsky_basis,
    shifted_basis,
    shifted_basis_derivative,
)
from .bivariate import (
    ErrorReport,
    convergence_study,
    error_report,
    estimate_modulus,
    moment_y,
    moment_y2,
    remainder_qm,
    shifted_stancu_grid,
    shifted_stancu_operator,
    stancu_operator,
)
from .config import ExperimentConfig, load_config
from .domain import CurveDomain, NodeScheme, transform_point, y_step
from .errors import (
    BasisIndexError,
    ChlodowskyError,
    ConfigError,
    DomainError,
    EvaluationError,
    ExprError,
    ExprSyntaxError,
    InvalidDomainError,
    SingularityError,
)
from .expr import Expr, evaluate, parse
from .univariate import ChlodowskySequence, classical_operator, moment, shifted_operator, sup_error

