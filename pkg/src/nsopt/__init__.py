"""nsopt: numerical generalized directional derivatives and optimality
verdicts for nonsmooth functions and cone-constrained vector problems."""

from .core import (
    LiminfEstimate,
    SampleSchedule,
    estimate_liminf,
    TREND_CONVERGED,
    TREND_DIV_MINUS,
    TREND_DIV_PLUS,
    TREND_INCONCLUSIVE,
    TREND_OSCILLATING,
)
from .functions import ProperFunction, WitnessFamily, eval_quotient1, eval_quotient2
from .derivatives import (
    DirectionSet,
    bp2,
    bz2,
    dini1,
    dini2,
    ginchev,
    hadamard1,
    hadamard2,
    subdiff_contains,
)
from .classify import (
    check_2invex_on_box,
    check_isolated_order2,
    check_lstability,
    check_necessary_local_min,
    check_necessary_local_min_dini,
    check_spc_first_order_sufficiency,
    check_strong_pseudoconvex,
    is_2stationary,
)
from .cones import (
    PolyhedralCone,
    contains,
    double_polar_check,
    interior_contains,
    polar,
    project,
    separate,
    sphere_max,
)
from .oracle import GridSpec, OracleReport, global_min_box, isolated_order2, local_min
from .vecopt import (
    ScalarizedF,
    VectorProblem,
    check_vector_isolated_order2,
    check_weak_min_necessary,
    feasible,
    scalarize,
    vector_isolated_oracle,
)
from .verdicts import Verdict
from .corpus import CorpusEntry, corpus

__version__ = "0.1.0"

__all__ = [
    "CorpusEntry",
    "DirectionSet",
    "GridSpec",
    "LiminfEstimate",
    "OracleReport",
    "PolyhedralCone",
    "ProperFunction",
    "SampleSchedule",
    "ScalarizedF",
    "VectorProblem",
    "Verdict",
    "WitnessFamily",
    "bp2",
    "bz2",
    "check_2invex_on_box",
    "check_isolated_order2",
    "check_lstability",
    "check_necessary_local_min",
    "check_necessary_local_min_dini",
    "check_spc_first_order_sufficiency",
    "check_strong_pseudoconvex",
    "check_vector_isolated_order2",
    "check_weak_min_necessary",
    "contains",
    "corpus",
    "dini1",
    "dini2",
    "double_polar_check",
    "estimate_liminf",
    "eval_quotient1",
    "eval_quotient2",
    "feasible",
    "ginchev",
    "global_min_box",
    "hadamard1",
    "hadamard2",
    "interior_contains",
    "is_2stationary",
    "isolated_order2",
    "local_min",
    "polar",
    "project",
    "scalarize",
    "separate",
    "sphere_max",
    "subdiff_contains",
    "vector_isolated_oracle",
]
