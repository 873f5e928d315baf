"""Computational toolkit for knot-group Dehn fillings.

Builds filling quotient presentations, evaluates words under exact PSL(2)
matrix representations, computes conjugacy invariants, and produces
machine-checkable certificates that a group element survives or dies under
a given Dehn filling.
"""

from .words import (
    CommutingPair,
    CyclicWord,
    InvalidN,
    Word,
    bmt_word,
    commutator,
    conjugate,
    cyclic_reduce,
    exponent_sum,
    invert,
    is_conjugate_free,
    iterate_construction,
    torus_gn,
)
from .presentations import (
    AbelianImage,
    AbelianInvariants,
    FinitePresentation,
    SmithNormalForm,
    UnknownGenerator,
    abelianization,
    add_relators,
    image_in_abelianization,
    presentation,
    smith_normal_form,
)
from .knots import (
    FillingClassification,
    InfiniteSlope,
    InvalidCableParams,
    InvalidTorusParams,
    PeripheralizedKnotGroup,
    Slope,
    build_filling,
    classify_cable_filling,
    enumerate_slopes,
    figure_eight_group,
    is_cyclic_torus_filling,
    load_knot,
    slope_distance,
    torus_knot_group,
)
from .reps import (
    DegenerateZeta,
    DiscriminantMismatch,
    ProjMatrix2,
    QuadExt,
    Representation,
    ZeroZeta,
    eval_word,
    figure_eight_holonomy,
    invariant_nonperipheral,
    invariant_peripheral,
    is_peripheral_trace,
    parse_quad,
    quad,
    sign_canonical,
    stays_peripheral,
    trace_pm,
)
from .quotients import (
    AbelianizationEvidence,
    BudgetExceeded,
    FiniteTarget,
    HomCertificate,
    KillTestReport,
    abelianization_certificate,
    alternating,
    certify_nontrivial,
    enumerate_homs,
    kill_test,
    parse_target,
    psl2,
    symmetric,
)
from .explorer import (
    DEFAULT_LADDER,
    BudgetNote,
    ConstraintCheckResult,
    CyclicSlopeRule,
    DisjointRule,
    InclusionRule,
    NormalClosureWitness,
    SlopeSetReport,
    UnknownSlopeInRule,
    Verdict,
    check_constraints,
    fiber_disjoint_rules_for,
    inclusion_rules_for,
    scan,
    witness_search,
)

__version__ = "0.1.0"
