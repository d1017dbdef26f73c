"""meanlab: bivariate means (A, G, H, L, I, P, X, Y, power, Heronian) with
cancellation-safe evaluation, and a laboratory that verifies strict
inequality chains between them, recovers their sharp constants by endpoint
limits, and probes sharpness by perturbation."""

__version__ = "0.1.0"

from .chains import (
    ChainReport,
    ConjectureReport,
    GridSpec,
    InequalityChain,
    ProbeOutcome,
    bracket_best_exponent,
    builtin_suite,
    conjecture_scan,
    get_chain,
    sharpness_probe,
    verify_chain,
)
from .errors import (
    ConfigError,
    DegeneratePairError,
    DomainError,
    EvalError,
    ExtrapolationError,
    MeanLabError,
    NonMonotonePredicateError,
    ParseError,
    SeriesDomainError,
)
from .expressions import MeanExpr, eval_expr, evaluate, parse_expr, to_text
from .means import (
    MeanKind,
    MeanVector,
    ParamPoint,
    PositivePair,
    arithmetic,
    eval_all,
    eval_mean,
    geometric,
    harmonic,
    heronian_mean,
    identric,
    logarithmic,
    param_point,
    power_mean,
    seiffert,
    x_mean,
    y_mean,
)
from .ratios import (
    MonotonicityVerdict,
    NamedConstant,
    RatioFn,
    check_monotone,
    cusa_aux_margin,
    cusa_margin,
    endpoint_limit,
    named_constants,
    ratio_eval,
)
from .series import (
    BernoulliTable,
    SeriesKind,
    bernoulli_even_abs,
    coeff_ratio_monotonicity,
    series_coefficients,
    series_eval,
)

__all__ = [
    "__version__",
    "ChainReport",
    "ConjectureReport",
    "GridSpec",
    "InequalityChain",
    "ProbeOutcome",
    "bracket_best_exponent",
    "builtin_suite",
    "conjecture_scan",
    "get_chain",
    "sharpness_probe",
    "verify_chain",
    "ConfigError",
    "DegeneratePairError",
    "DomainError",
    "EvalError",
    "ExtrapolationError",
    "MeanLabError",
    "NonMonotonePredicateError",
    "ParseError",
    "SeriesDomainError",
    "MeanExpr",
    "eval_expr",
    "evaluate",
    "parse_expr",
    "to_text",
    "MeanKind",
    "MeanVector",
    "ParamPoint",
    "PositivePair",
    "arithmetic",
    "eval_all",
    "eval_mean",
    "geometric",
    "harmonic",
    "heronian_mean",
    "identric",
    "logarithmic",
    "param_point",
    "power_mean",
    "seiffert",
    "x_mean",
    "y_mean",
    "MonotonicityVerdict",
    "NamedConstant",
    "RatioFn",
    "check_monotone",
    "cusa_aux_margin",
    "cusa_margin",
    "endpoint_limit",
    "named_constants",
    "ratio_eval",
    "BernoulliTable",
    "SeriesKind",
    "bernoulli_even_abs",
    "coeff_ratio_monotonicity",
    "series_coefficients",
    "series_eval",
]
