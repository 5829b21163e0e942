"""Exception hierarchy.

Everything raised deliberately by the library derives from
:class:`RobustKitError`, so callers can catch one type at the boundary.
Statuses that are expected outcomes of a solve (infeasible, unbounded,
iteration limit) are reported as result values, not exceptions.
"""

from __future__ import annotations


class RobustKitError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------------------
# model construction / validation


class InvalidBounds(RobustKitError):
    """Lower bound exceeds upper bound, or a domain disagrees with bounds."""


class DimensionMismatch(RobustKitError):
    """Vector or matrix sizes disagree."""


class MalformedExpr(RobustKitError):
    """An expression violates the supported algebra (e.g. products of two
    uncertain factors, or adjustable variables multiplied by parameters)."""


class MissingAssignment(RobustKitError):
    """evaluate() was called without a value for a referenced id."""


class UncertainEquality(RobustKitError):
    """Equality constraints may not reference uncertain parameters."""


class UnknownUncParam(RobustKitError):
    """A dependency list references an id that is not an uncertain parameter."""


class EmptyDeps(RobustKitError):
    """An adjustable variable was declared with no dependencies."""


class NominalOutsideSet(RobustKitError):
    """The nominal point violates the attached uncertainty set."""


class MissingNominal(RobustKitError):
    """A transform needed a nominal point that is not available."""


class ValidationError(RobustKitError):
    """Catch-all structural validation failure (dangling ids and similar)."""


# ---------------------------------------------------------------------------
# uncertainty sets


class EmptySet(RobustKitError):
    """The polyhedron has no feasible point."""


class UnboundedSet(RobustKitError):
    """The set has a direction of unbounded recession."""


class NotSymmetric(RobustKitError):
    """A covariance-like matrix is not symmetric."""


class NotPositiveDefinite(RobustKitError):
    """A covariance-like matrix is not (numerically) positive definite."""


class AlphaOutOfRange(RobustKitError):
    """Confidence level must lie strictly inside (0, 1)."""


# ---------------------------------------------------------------------------
# transforms / solvers


class NotAffineInXi(RobustKitError):
    """A counterpart was requested for a row that is not affine in the
    uncertain parameters (adjustable terms must be substituted first)."""


class NonAffineAfterSubstitution(RobustKitError):
    """Decision-rule substitution produced terms outside the expression
    algebra.  Unreachable through the public builders, kept as a guard."""


class NoApplicableReformulation(RobustKitError):
    """No closed-form counterpart exists for the constraint/set pairing."""


class SeparationUnavailable(RobustKitError):
    """The worst-case subproblem cannot be solved for the attached set."""


class KernelError(RobustKitError):
    """Internal numerical failure inside the LP kernel."""


# ---------------------------------------------------------------------------
# serialization


class ParseError(RobustKitError):
    """A document failed schema validation.

    Carries the JSON-pointer-ish ``path`` of the offending field plus a
    human-readable ``reason``.
    """

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason
