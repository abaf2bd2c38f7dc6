"""Absolute continuity of convolutions of orbital measures on SO(2n+1).

Exact combinatorial decision (eligibility of a tuple of torus elements) plus
an independent randomized matrix oracle that verifies the decision
numerically.
"""

from .rootsys import (
    AnnihilatorDecomposition,
    Root,
    RootKind,
    TorusElement,
    adjoint_orbit_dim,
    annihilator,
    conjugacy_class_dim,
    enumerate_types,
    lie_annihilator,
    positive_roots,
)
from .eligibility import (
    CDElement,
    DominantClass,
    DominantKind,
    EligibilityVerdict,
    NecessityCertificate,
    cd_eligibility,
    cd_exceptional,
    decide_eligibility,
    decide_lie_eligibility,
    dominant_class,
    necessity_certificate,
    reduce_element,
)
from .liealg import (
    AlgebraElement,
    GroupElement,
    SubspaceBasis,
    WeylBracketReport,
    nonannihilating_span,
    root_space,
    tangent_space,
    torus_matrix,
    weyl_bracket_check,
)
from .oracle import (
    ForcedEigenvalueReport,
    RankCertificate,
    StrategyReport,
    SweepRecord,
    cross_validate,
    distinct_eigenvalue_probe,
    evaluate_tuple,
    find_spanning_conjugators,
    forced_eigenvalue_probe,
    rank_test,
    strategy_check,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "AnnihilatorDecomposition",
    "CDElement",
    "DominantClass",
    "DominantKind",
    "EligibilityVerdict",
    "ForcedEigenvalueReport",
    "GroupElement",
    "NecessityCertificate",
    "RankCertificate",
    "Root",
    "RootKind",
    "StrategyReport",
    "SubspaceBasis",
    "SweepRecord",
    "TorusElement",
    "WeylBracketReport",
    "adjoint_orbit_dim",
    "annihilator",
    "cd_eligibility",
    "cd_exceptional",
    "conjugacy_class_dim",
    "cross_validate",
    "decide_eligibility",
    "decide_lie_eligibility",
    "distinct_eigenvalue_probe",
    "dominant_class",
    "enumerate_types",
    "evaluate_tuple",
    "find_spanning_conjugators",
    "forced_eigenvalue_probe",
    "lie_annihilator",
    "necessity_certificate",
    "nonannihilating_span",
    "positive_roots",
    "rank_test",
    "reduce_element",
    "root_space",
    "strategy_check",
    "tangent_space",
    "torus_matrix",
    "weyl_bracket_check",
    "__version__",
]
