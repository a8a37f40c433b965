"""Cesaro-averaged counting of prime-plus-two-squares representations and the
matching explicit-formula main terms built from Riemann zeta zeros."""

from .arithmetic import (
    CesaroParams,
    LambdaTable,
    LinnikTable,
    cesaro_lhs,
    compute_rq,
    omega2,
    s_tilde,
    sieve_von_mangoldt,
    theta3,
)
from .errors import (
    DomainError,
    FetchError,
    IntegrityError,
    LinnikError,
    PoleError,
    PrecisionError,
    QuadratureError,
    TableSizeError,
    ZeroTableError,
)
from .formula import (
    FormulaReport,
    ProbeSeries,
    TruncationSpec,
    default_truncation,
    evaluate,
    threshold_probe,
    m1_term,
    m2_term,
    m3_term,
    m4_term,
    scaling_study,
)
from .specfun import (
    PrecisionConfig,
    bessel_j,
    bessel_j_sonine,
    gamma_ratio,
    laplace_line_integral,
    log_gamma,
)
from .zeros import (
    ZeroSet,
    ZetaZero,
    bundled_zeros_path,
    fetch_zeros,
    load_zeros,
    paired_zero_sum,
    zero_tail_bound,
)

__version__ = "0.1.0"
