"""Cyclic vectors in the Hardy space of the infinite polydisk, computed through Dirichlet/Bohr series."""

__version__ = "0.1.0"

from .arith import MultiIndex, PrimeTable, divisors, factorize, index_of, mobius, multi_index
from .cyclicity import (
    CYCLIC,
    NOT_CYCLIC,
    RECIPROCAL_PRIMES,
    UNKNOWN,
    CyclicityVerdict,
    EngineConfig,
    Hints,
    decide,
    noncyclicity_bound,
    zero_search,
)
from .delta import DeltaEstimate, delta_hat, delta_sweep
from .disk import (
    OuterVerdict,
    TaylorPoly,
    bohr_lift,
    is_outer_polynomial,
    log_series,
    noor_w,
    polynomial_roots,
    power_dilation,
    shift,
    szego_defect,
)
from .dilation import (
    finite_support_evidence,
    indicator_sine_coeffs,
    ingest_odd_periodic,
    kozlov_F,
    kozlov_G,
    noor_experiment,
)
from .errors import (
    BohrError,
    DomainError,
    NonInvertibleError,
    ParseError,
    PreconditionError,
    RangeError,
    SolverError,
    StructureError,
    UnsupportedError,
    ValidationError,
)
from .series import (
    BohrSeries,
    Point,
    TailRule,
    dirichlet_multiply,
    evaluate,
    invert,
    kernel,
    kernel_bounded,
    kernel_inverse,
    kernel_norm,
    linear_combine,
    norm,
    read_series,
    restrict_to_first_variables,
    write_series,
)
from .structure import (
    MultiplicativityReport,
    PrimePartition,
    classify,
    delta_multiplicative,
    growth_class,
    multiplicative,
    partition_factorize,
    prime_factor_series,
    s_multiplicative,
    totally,
    variable_support,
)
