"""qdissect: truncated q-series engine and congruence verification harness.

The package verifies eta-quotient dissection identities, replays derivation
chains move by move on truncated series, and checks arithmetic-progression
congruence families for regular-bipartition counting streams against an
independent combinatorial oracle.
"""

from .series import (
    EXACT,
    CoeffRing,
    NonUnitError,
    PrecisionError,
    RingMismatchError,
    Series,
    add,
    dilate,
    eq_to_order,
    extract,
    invert,
    monomial,
    mul,
    one,
    pow_,
    reduce_mod,
    scalar_mul,
    sub,
    zero,
)
from .qexpr import (
    Const,
    Dilate,
    EtaF,
    Mul,
    Phi,
    Pochhammer,
    Pow,
    Psi,
    Q,
    QExpr,
    Sum,
    Theta,
    cubic_u,
    cubic_v,
    eta_quotient,
    eval_qexpr,
    parse_sexpr,
    rr_quotient,
    rr_quotient_13,
    theta_sum,
    to_sexpr,
)
from .oracle import (
    CountTable,
    bipartition_counts,
    coeff_fast,
    regular_coeff_fast,
    regular_counts,
)
from .identities import (
    AssertStage,
    ChainReport,
    DilateBack,
    Extract,
    IdentityCase,
    IdentityReport,
    ProofChain,
    ReduceMod,
    StageReport,
    Substitute,
    replay,
    verify,
)
from .registry import Registry, build_chains, build_identities, registry
from .congruences import (
    SEQUENCES,
    AffineIndex,
    CongruenceFamily,
    FamilyReport,
    Recur,
    RecurrenceSeq,
    SourceSpec,
    ThreeTerm,
    Zero,
    build_families,
    recurrence_consistency_checks,
    seq_eval,
    verify_family,
    verify_three_term,
)

__version__ = "0.1.0"
