"""Growth of maximal norms of integer matrix products, and (Z, m)-regular sequences."""

__version__ = "0.1.0"

from .polynomial import Polynomial
from .linalg import (
    DimensionError,
    Matrix,
    NotInvariantError,
    Subspace,
    block_decompose,
    char_poly,
    mat_mul,
    mat_pow,
    norm,
    quotient,
    restrict,
    rref,
    span_closure,
)
from .tameness import (
    BlockTriangularization,
    CycloBound,
    NotTameError,
    TamenessVerdict,
    block_triangularize,
    cyclo_exponent,
    is_tame_charpoly,
    is_tame_matrix,
)
from .growth import (
    BudgetExhausted,
    Filtration,
    GeneratorSet,
    GrowthReport,
    InvariantViolation,
    MnTable,
    SemigroupClosure,
    Verdict,
    detect_degenerate,
    detect_exponential,
    filtration,
    growth_degree,
    mn_bruteforce,
    poly_progression_check,
    semigroup_closure,
    verify_telescoping,
)
from .regseq import (
    AlphabetMismatch,
    Dfao,
    LinRep,
    SeqGrowthReport,
    SeqVerdict,
    add,
    conv_oracle,
    convolve,
    digit_sum,
    epsilon_indicator,
    eval_rep,
    from_dfao,
    growth_degree_seq,
    minimize,
    one,
    thue_morse,
    thue_morse_dfao,
)

evaluate = eval_rep
