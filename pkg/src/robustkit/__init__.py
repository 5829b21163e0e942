"""robustkit: robust linear optimization at desk scale.

Build models whose constraint coefficients carry uncertain parameters,
attach polyhedral / ellipsoidal / constraint-described uncertainty sets,
optionally declare adjustable variables governed by linear decision rules,
and solve the worst-case problem by duality-based reformulation, cutting
planes, or plain nominal substitution.  A bounded-variable simplex and
branch-and-bound kernel is embedded, so there is no external solver
dependency.
"""

from .base import AdjId, ObjSense, Sense, UncId, VarId
from .errors import RobustKitError
from .model import Constraint, DecisionVar, Expr, Model, UncParamGroup, VarDomain
from .sets import (
    EllipsoidalSet,
    GaussianConfidenceSet,
    GenericSet,
    Geometry,
    PolyhedralSet,
    detect_geometry,
    gaussian_confidence_set,
    support_function,
)
from .solve import (
    CutGenerator,
    FeasibilityReport,
    RowCheck,
    SolveResult,
    SolveStats,
    SolveStatus,
    SolverOptions,
    check_robust_feasibility,
    solve,
    solve_cutting_plane,
    solve_nominal,
    solve_reformulation,
)

__version__ = "0.1.0"

__all__ = [
    "AdjId",
    "Constraint",
    "CutGenerator",
    "DecisionVar",
    "EllipsoidalSet",
    "Expr",
    "FeasibilityReport",
    "GaussianConfidenceSet",
    "GenericSet",
    "Geometry",
    "Model",
    "ObjSense",
    "PolyhedralSet",
    "RobustKitError",
    "RowCheck",
    "Sense",
    "SolveResult",
    "SolveStats",
    "SolveStatus",
    "SolverOptions",
    "UncId",
    "UncParamGroup",
    "VarDomain",
    "VarId",
    "check_robust_feasibility",
    "detect_geometry",
    "gaussian_confidence_set",
    "solve",
    "solve_cutting_plane",
    "solve_nominal",
    "solve_reformulation",
    "support_function",
    "__version__",
]
