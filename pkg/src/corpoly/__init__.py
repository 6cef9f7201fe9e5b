"""Exact-arithmetic toolkit for correlation and cut polyhedra.

Decides membership, rank, and relaxed rank over the conic and convex hulls
of rank-one 0/1 and sign matrices, with certificates that recompose the
input bit for bit. Every computation is exact rational; nothing here ever
rounds.
"""

from .exactnum import (
    AsymmetricInput,
    ConditionReport,
    Error,
    NonSquare,
    ParseError,
    PsdWitness,
    RationalMatrix,
    as_rational,
    check_dnn,
    check_psd,
    check_symmetric,
    format_matrix,
    parse_matrix,
    parse_rational,
)
from .generators import (
    FortetViolation,
    NegativeEntry,
    OutOfRange,
    SupportGraph,
    admissible_generators,
    boolean_vector,
    bqp_point_to_matrix,
    cut_generator,
    cut_representatives,
    generator_matrix,
    support,
    support_graph,
)
from .simplexcore import (
    DimensionMismatch,
    LinearSystem,
    LpOutcome,
    lp_feasible,
    lp_minimize,
)
from .hulls import (
    BOOLEAN_FAMILIES,
    CUT_FAMILIES,
    DEFAULT_MAX_N,
    FAMILIES,
    DecompositionCertificate,
    DimensionCap,
    HullSpec,
    InvalidCertificate,
    MembershipResult,
    NonPositiveRho,
    UnknownFamily,
    cp_witness,
    decide_membership,
    decide_scaled_cor,
    screen_failures,
    verify_certificate,
)
from .ranks import (
    RankResult,
    RelaxedRankResult,
    rank_decision,
    rank_minimum,
    relaxed_rank,
    relaxed_rank_decision,
)
from .reductions import (
    BadUniverseSize,
    FCCInstance,
    NonPositiveBudget,
    NonUnitDiagonal,
    NotLinear,
    ReducedInstance,
    X3CInstance,
    cor_to_cut,
    cut_to_cor,
    fcc_to_relaxed_rank_instance,
    lift_cor_to_conx,
    lift_to_normalized,
    solve_fcc,
    solve_x3c,
    x3c_to_rank_instance,
)
from .structured import (
    CliqueFamily,
    DecompositionFailure,
    ForestDecomposition,
    NotChordal,
    NotForest,
    UncoveredEntry,
    chordal_max_cliques,
    clique_lp_solve,
    clique_rank,
    clique_separation_dual,
    expand_bags,
    forest_decompose,
    is_chordal,
    is_forest,
    support_clique_family,
)

__version__ = "0.1.0"
