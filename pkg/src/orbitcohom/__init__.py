"""orbitcohom: exact cohomology of orbit spaces of free S^1/S^3 actions on
spaces with the cohomology of a product of spheres, plus the associated
index bounds and equivariant-map obstructions."""

from .fields import F2, QQ, Field, ParamPoly, field_by_name
from .graded import (
    GradedDims,
    Generator,
    NonTerminating,
    ParamDependent,
    Presentation,
    make_presentation,
    nilpotency_index,
    normal_form,
    poincare,
    presentation_from_json,
    to_json_dict,
)
from .gysin import (
    BranchChoice,
    ChaseSolution,
    ChaseState,
    FiberProfile,
    chase,
    congruence_precheck,
    exactness_audit,
)
from .spectral import (
    BiGradedPage,
    DifferentialChoice,
    EInfData,
    InfeasibleChoice,
    build_e2,
    enumerate_differentials,
    feasible_einf,
    ring_candidates,
    run_to_einf,
)
from .indexes import (
    BadDimension,
    IndexReport,
    OrbitPresentation,
    ProductSpheres,
    StandardSphere,
    borsuk_ulam_forbidden,
    cohom_index,
    cohom_index_by_family,
    coind_join_bound,
    ind_standard_sphere,
)
from .classify import (
    FixtureTable,
    RingFamily,
    UnsupportedCombination,
    classify_orbit,
    load_fixtures,
    verify_fixtures,
)

__all__ = [
    "F2",
    "QQ",
    "Field",
    "ParamPoly",
    "field_by_name",
    "GradedDims",
    "Generator",
    "NonTerminating",
    "ParamDependent",
    "Presentation",
    "make_presentation",
    "nilpotency_index",
    "normal_form",
    "poincare",
    "presentation_from_json",
    "to_json_dict",
    "BranchChoice",
    "ChaseSolution",
    "ChaseState",
    "FiberProfile",
    "chase",
    "congruence_precheck",
    "exactness_audit",
    "BiGradedPage",
    "DifferentialChoice",
    "EInfData",
    "InfeasibleChoice",
    "build_e2",
    "enumerate_differentials",
    "feasible_einf",
    "ring_candidates",
    "run_to_einf",
    "BadDimension",
    "IndexReport",
    "OrbitPresentation",
    "ProductSpheres",
    "StandardSphere",
    "borsuk_ulam_forbidden",
    "cohom_index",
    "cohom_index_by_family",
    "coind_join_bound",
    "ind_standard_sphere",
    "FixtureTable",
    "RingFamily",
    "UnsupportedCombination",
    "classify_orbit",
    "load_fixtures",
    "verify_fixtures",
]

__version__ = "0.1.0"
