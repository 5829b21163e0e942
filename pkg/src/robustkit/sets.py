"""Uncertainty sets and their shared interface.

Three concrete families:

* :class:`PolyhedralSet` -- ``{xi : P xi <= b}``, validated nonempty and
  bounded at construction (one feasibility LP plus two LPs per dimension).
* :class:`EllipsoidalSet` -- ``{xi : (xi - mean)^T cov^{-1} (xi - mean) <= 1}``
  with a symmetric positive definite ``cov``.
* :class:`GenericSet` -- a list of affine or convex-quadratic constraints in
  the parameters; :func:`detect_geometry` classifies it back into one of the
  closed-form families when possible.

:func:`support_function` evaluates ``max_{xi in S} a . xi`` together with an
attaining point; it is the single primitive both the cutting-plane
separation and the dual reformulation are built on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .base import Sense
from .chi2 import chi2_quantile
from .errors import (
    DimensionMismatch,
    EmptySet,
    NotPositiveDefinite,
    NotSymmetric,
    SeparationUnavailable,
    UnboundedSet,
)
from .kernel import ROW_LE, LpStatus, StandardLp, solve_lp

_SYM_TOL = 1e-10
_PD_REL_TOL = 1e-10


class PolyhedralSet:
    """Bounded nonempty polyhedron ``{xi : mat @ xi <= rhs}``."""

    def __init__(self, mat, rhs, *, validate: bool = True):
        P = np.asarray(mat, dtype=float)
        if P.ndim != 2:
            raise DimensionMismatch("constraint matrix must be two-dimensional")
        b = np.asarray(rhs, dtype=float).reshape(-1)
        if P.shape[0] != b.shape[0]:
            raise DimensionMismatch(
                f"{P.shape[0]} rows in the matrix but {b.shape[0]} right-hand sides"
            )
        if P.shape[0] == 0 or P.shape[1] == 0:
            raise DimensionMismatch("the set needs at least one row and one column")
        if not (np.all(np.isfinite(P)) and np.all(np.isfinite(b))):
            raise DimensionMismatch("set data must be finite")
        self.mat = P
        self.rhs = b
        if validate:
            self._check_nonempty_bounded()

    @property
    def dim(self) -> int:
        return self.mat.shape[1]

    def _lp(self, direction: np.ndarray) -> StandardLp:
        k = self.dim
        return StandardLp(
            obj=direction,
            A=self.mat,
            senses=np.full(self.mat.shape[0], ROW_LE, dtype=np.int8),
            rhs=self.rhs,
            lower=np.full(k, -math.inf),
            upper=np.full(k, math.inf),
            maximize=True,
        )

    def _check_nonempty_bounded(self) -> None:
        probe = solve_lp(self._lp(np.zeros(self.dim)))
        if probe.status is LpStatus.INFEASIBLE:
            raise EmptySet("the polyhedron has no feasible point")
        for j in range(self.dim):
            e = np.zeros(self.dim)
            for sign in (1.0, -1.0):
                e[j] = sign
                sol = solve_lp(self._lp(e))
                if sol.status is LpStatus.UNBOUNDED:
                    raise UnboundedSet(
                        f"the polyhedron recedes along coordinate {j} "
                        f"({'+' if sign > 0 else '-'} direction)"
                    )
            e[j] = 0.0

    def contains(self, point, tol: float = 1e-8) -> bool:
        xi = np.asarray(point, dtype=float).reshape(-1)
        if xi.shape[0] != self.dim:
            raise DimensionMismatch("point dimension does not match the set")
        return bool(np.all(self.mat @ xi <= self.rhs + tol))

    def support(self, a) -> tuple[float, np.ndarray]:
        """``max a . xi`` over the set and an attaining vertex."""
        a = np.asarray(a, dtype=float).reshape(-1)
        if a.shape[0] != self.dim:
            raise DimensionMismatch("direction dimension does not match the set")
        sol = solve_lp(self._lp(a))
        if sol.status is LpStatus.INFEASIBLE:
            raise EmptySet("the polyhedron has no feasible point")
        if sol.status is not LpStatus.OPTIMAL:
            raise SeparationUnavailable(f"support LP ended with status {sol.status.value}")
        return float(sol.objective), sol.x.copy()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyhedralSet):
            return NotImplemented
        return np.array_equal(self.mat, other.mat) and np.array_equal(self.rhs, other.rhs)

    def __repr__(self) -> str:
        return f"PolyhedralSet(dim={self.dim}, rows={self.mat.shape[0]})"


class EllipsoidalSet:
    """Ellipsoid ``(xi - mean)^T cov^{-1} (xi - mean) <= 1``.

    ``cov`` must be symmetric positive definite; near-singular matrices
    (condition cutoff 1e-10 on the Cholesky diagonal, relative to the
    largest variance) are rejected rather than regularized.
    """

    def __init__(self, mean, cov):
        mu = np.asarray(mean, dtype=float).reshape(-1)
        S = np.asarray(cov, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise DimensionMismatch("covariance must be a square matrix")
        if S.shape[0] != mu.shape[0]:
            raise DimensionMismatch("mean and covariance dimensions disagree")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(S))):
            raise DimensionMismatch("set data must be finite")
        scale = float(np.abs(S).max())
        if float(np.abs(S - S.T).max()) > _SYM_TOL * max(1.0, scale):
            raise NotSymmetric("covariance matrix is not symmetric")
        try:
            L = np.linalg.cholesky(S)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("covariance matrix is not positive definite") from exc
        dmin = float(np.min(np.diag(L)))
        dmax = float(np.max(np.diag(S)))
        if dmin * dmin <= _PD_REL_TOL * dmax:
            raise NotPositiveDefinite("covariance matrix is numerically singular")
        self.mean = mu
        self.cov = S
        self._chol = L

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def chol(self) -> np.ndarray:
        """Lower-triangular L with ``cov = L @ L.T``."""
        return self._chol

    def mahalanobis_sq(self, point) -> float:
        xi = np.asarray(point, dtype=float).reshape(-1)
        if xi.shape[0] != self.dim:
            raise DimensionMismatch("point dimension does not match the set")
        w = np.linalg.solve(self._chol, xi - self.mean)
        return float(w @ w)

    def contains(self, point, tol: float = 1e-8) -> bool:
        return self.mahalanobis_sq(point) <= 1.0 + tol

    def support(self, a) -> tuple[float, np.ndarray]:
        """Closed form: ``a . mean + ||L^T a||`` attained on the boundary."""
        a = np.asarray(a, dtype=float).reshape(-1)
        if a.shape[0] != self.dim:
            raise DimensionMismatch("direction dimension does not match the set")
        base = float(a @ self.mean)
        La = self._chol.T @ a
        norm = float(np.linalg.norm(La))
        if norm <= 0.0:
            return base, self.mean.copy()
        xi = self.mean + (self.cov @ a) / norm
        return base + norm, xi

    def __eq__(self, other) -> bool:
        if not isinstance(other, EllipsoidalSet):
            return NotImplemented
        return np.array_equal(self.mean, other.mean) and np.array_equal(self.cov, other.cov)

    def __repr__(self) -> str:
        return f"EllipsoidalSet(dim={self.dim})"


class GaussianConfidenceSet(EllipsoidalSet):
    """Confidence ellipsoid of a Gaussian at level ``alpha``.

    Behaves exactly like the scaled :class:`EllipsoidalSet` it is, but
    remembers the distribution parameters so documents round-trip.
    """

    def __init__(self, mean, cov, alpha: float):
        base = np.asarray(cov, dtype=float)
        self.alpha = float(alpha)
        self.base_cov = base
        r2 = chi2_quantile(self.alpha, np.asarray(mean).reshape(-1).shape[0])
        self.radius_sq = r2
        super().__init__(mean, r2 * base)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianConfidenceSet):
            return NotImplemented
        return (
            np.array_equal(self.mean, other.mean)
            and np.array_equal(self.base_cov, other.base_cov)
            and self.alpha == other.alpha
        )

    def __repr__(self) -> str:
        return f"GaussianConfidenceSet(dim={self.dim}, alpha={self.alpha})"


def gaussian_confidence_set(mean, cov, alpha: float) -> GaussianConfidenceSet:
    """Ellipsoid covering probability ``alpha`` of a Gaussian(mean, cov).

    The radius is the chi-square quantile with as many degrees of freedom
    as there are dimensions, so Monte-Carlo mass inside the set matches
    ``alpha``.
    """
    return GaussianConfidenceSet(mean, cov, alpha)


@dataclass(frozen=True)
class SetConstraint:
    """One constraint of a :class:`GenericSet`, canonically stored.

    ``quad`` holds upper-triangle entries ``(i, j, coef)`` with ``i <= j``
    meaning ``coef * xi_i * xi_j``; ``lin`` holds ``(j, coef)``.
    """

    lin: tuple[tuple[int, float], ...]
    quad: tuple[tuple[int, int, float], ...]
    constant: float
    sense: Sense
    rhs: float

    def value(self, xi: np.ndarray) -> float:
        total = self.constant
        for j, c in self.lin:
            total += c * xi[j]
        for i, j, c in self.quad:
            total += c * xi[i] * xi[j]
        return total

    def holds(self, xi: np.ndarray, tol: float) -> bool:
        v = self.value(xi)
        if self.sense is Sense.LE:
            return v <= self.rhs + tol
        if self.sense is Sense.GE:
            return v >= self.rhs - tol
        return abs(v - self.rhs) <= tol


class GenericSet:
    """Uncertainty set described by explicit constraints on the parameters.

    Constraints may be affine or quadratic; geometry detection decides
    whether the collection is secretly a polyhedron or an ellipsoid.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise DimensionMismatch("the set needs at least one dimension")
        self._dim = int(dim)
        self.constraints: list[SetConstraint] = []
        self._geometry: Geometry | None = None

    @property
    def dim(self) -> int:
        return self._dim

    def add_constraint(self, lin=None, quad=None, constant: float = 0.0,
                       sense: Sense | str = Sense.LE, rhs: float = 0.0) -> None:
        if isinstance(sense, str):
            sense = Sense.parse(sense)
        lt = []
        for j, c in sorted((lin or {}).items()):
            if not 0 <= int(j) < self._dim:
                raise DimensionMismatch(f"linear index {j} outside the set dimensions")
            if float(c) != 0.0:
                lt.append((int(j), float(c)))
        qt = []
        for key, c in sorted((quad or {}).items()):
            i, j = (int(key[0]), int(key[1])) if isinstance(key, tuple) else (int(key), int(key))
            if i > j:
                i, j = j, i
            if not (0 <= i < self._dim and 0 <= j < self._dim):
                raise DimensionMismatch(f"quadratic index ({i},{j}) outside the set dimensions")
            if float(c) != 0.0:
                qt.append((i, j, float(c)))
        self.constraints.append(
            SetConstraint(tuple(lt), tuple(qt), float(constant), sense, float(rhs))
        )
        self._geometry = None

    def contains(self, point, tol: float = 1e-8) -> bool:
        xi = np.asarray(point, dtype=float).reshape(-1)
        if xi.shape[0] != self._dim:
            raise DimensionMismatch("point dimension does not match the set")
        return all(c.holds(xi, tol) for c in self.constraints)

    def geometry(self) -> "Geometry":
        if self._geometry is None:
            self._geometry = detect_geometry(self)
        return self._geometry

    def support(self, a) -> tuple[float, np.ndarray]:
        geo = self.geometry()
        concrete = geo.as_set()
        if concrete is None:
            raise SeparationUnavailable(
                "the constraint list matches neither a polyhedron nor an ellipsoid"
            )
        return concrete.support(a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenericSet):
            return NotImplemented
        return self._dim == other._dim and self.constraints == other.constraints

    def __repr__(self) -> str:
        return f"GenericSet(dim={self._dim}, constraints={len(self.constraints)})"


@dataclass
class Geometry:
    """Classification result for a constraint-described set."""

    kind: str  # "polyhedral" | "ellipsoidal" | "unsupported"
    mat: np.ndarray | None = None
    rhs: np.ndarray | None = None
    mean: np.ndarray | None = None
    cov: np.ndarray | None = None
    reason: str = ""
    _cache: object = field(default=None, repr=False, compare=False)

    def as_set(self):
        """Concrete validated set, or None for unsupported geometry."""
        if self._cache is None:
            if self.kind == "polyhedral":
                self._cache = PolyhedralSet(self.mat, self.rhs)
            elif self.kind == "ellipsoidal":
                self._cache = EllipsoidalSet(self.mean, self.cov)
            else:
                return None
        return self._cache


def detect_geometry(gset: GenericSet) -> Geometry:
    """Classify a :class:`GenericSet` into a closed-form family.

    All-affine constraint lists assemble into ``(P, b)`` row by row
    (``>=`` rows negated, equalities split into two inequalities).  A
    single convex-quadratic constraint with positive definite quadratic
    part is completed to an ellipsoid.  Everything else is unsupported.
    """
    k = gset.dim
    cons = gset.constraints
    quads = [c for c in cons if c.quad]
    if not quads:
        rows: list[np.ndarray] = []
        rhs: list[float] = []
        for c in cons:
            row = np.zeros(k)
            for j, coef in c.lin:
                row[j] = coef
            bound = c.rhs - c.constant
            if c.sense is Sense.LE:
                rows.append(row)
                rhs.append(bound)
            elif c.sense is Sense.GE:
                rows.append(-row)
                rhs.append(-bound)
            else:
                rows.append(row.copy())
                rhs.append(bound)
                rows.append(-row)
                rhs.append(-bound)
        if not rows:
            return Geometry("unsupported", reason="the set has no constraints")
        return Geometry("polyhedral", mat=np.array(rows), rhs=np.array(rhs))
    if len(cons) != 1:
        return Geometry(
            "unsupported",
            reason="quadratic constraints can only be classified in isolation",
        )
    c = cons[0]
    if c.sense is Sense.EQ:
        return Geometry("unsupported", reason="quadratic equality constraints")
    sign = 1.0 if c.sense is Sense.LE else -1.0
    A = np.zeros((k, k))
    for i, j, coef in c.quad:
        v = sign * coef
        if i == j:
            A[i, i] += v
        else:
            A[i, j] += 0.5 * v
            A[j, i] += 0.5 * v
    lin = np.zeros(k)
    for j, coef in c.lin:
        lin[j] = sign * coef
    c0 = sign * (c.constant - c.rhs)
    try:
        np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        return Geometry("unsupported", reason="quadratic part is not positive definite")
    mu = np.linalg.solve(A, -0.5 * lin)
    r2 = float(mu @ A @ mu - c0)
    if r2 <= _PD_REL_TOL * max(1.0, abs(c0)):
        return Geometry("unsupported", reason="the quadratic region is empty or a point")
    cov = r2 * np.linalg.inv(A)
    cov = 0.5 * (cov + cov.T)
    return Geometry("ellipsoidal", mean=mu, cov=cov)


def support_function(uncset, a) -> tuple[float, np.ndarray]:
    """``max_{xi in set} a . xi`` with an attaining point.

    Dispatches on the set family: an LP for polyhedra, the closed form for
    ellipsoids, geometry detection first for constraint-described sets.
    """
    return uncset.support(a)


__all__ = [
    "EllipsoidalSet",
    "GaussianConfidenceSet",
    "GenericSet",
    "Geometry",
    "PolyhedralSet",
    "SetConstraint",
    "detect_geometry",
    "gaussian_confidence_set",
    "support_function",
]
