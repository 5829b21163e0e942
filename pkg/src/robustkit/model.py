"""Decision model with uncertain coefficients.

Expressions are kept in a canonical sparse form with four term groups:
a constant, linear terms in decision variables, linear terms in uncertain
parameters, bilinear (variable x parameter) terms, and linear terms in
adjustable variables.  Everything a solver consumes is affine in the
decisions for any fixed parameter value and affine in the parameters for
any fixed decision; products that would break that (parameter x parameter,
adjustable x parameter) are rejected at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Iterable, Mapping

from .base import INF, AdjId, ObjSense, Sense, UncId, VarId
from .errors import (
    DimensionMismatch,
    EmptyDeps,
    InvalidBounds,
    MalformedExpr,
    MissingAssignment,
    NominalOutsideSet,
    UncertainEquality,
    UnknownUncParam,
    ValidationError,
)

_NOMINAL_TOL = 1e-8


def _clean(mapping: Mapping | None, key_type) -> dict:
    out = {}
    if mapping:
        for k, v in mapping.items():
            coef = float(v)
            if coef != 0.0:
                out[key_type(k)] = coef
    return out


@dataclass
class Expr:
    """Sparse affine/bilinear expression.

    ``bilin`` maps ``(variable id, parameter id)`` pairs to coefficients.
    Zero coefficients are never stored, so structural equality of two
    expressions is plain field equality.
    """

    constant: float = 0.0
    lin_x: dict[int, float] = field(default_factory=dict)
    lin_xi: dict[int, float] = field(default_factory=dict)
    bilin: dict[tuple[int, int], float] = field(default_factory=dict)
    lin_y: dict[int, float] = field(default_factory=dict)

    # -- constructors --------------------------------------------------

    @classmethod
    def of(cls, constant=0.0, x=None, xi=None, bilin=None, y=None) -> "Expr":
        b = {}
        if bilin:
            for (i, j), v in bilin.items():
                coef = float(v)
                if coef != 0.0:
                    b[(int(i), int(j))] = coef
        return cls(float(constant), _clean(x, int), _clean(xi, int), b, _clean(y, int))

    @classmethod
    def var(cls, vid: VarId, coef: float = 1.0) -> "Expr":
        return cls.of(x={vid: coef})

    @classmethod
    def unc(cls, uid: UncId, coef: float = 1.0) -> "Expr":
        return cls.of(xi={uid: coef})

    @classmethod
    def adj(cls, aid: AdjId, coef: float = 1.0) -> "Expr":
        return cls.of(y={aid: coef})

    # -- algebra ---------------------------------------------------------

    def copy(self) -> "Expr":
        return Expr(self.constant, dict(self.lin_x), dict(self.lin_xi), dict(self.bilin), dict(self.lin_y))

    @staticmethod
    def _merge(dst: dict, src: Mapping, scale: float) -> None:
        for k, v in src.items():
            new = dst.get(k, 0.0) + scale * v
            if new == 0.0:
                dst.pop(k, None)
            else:
                dst[k] = new

    def _add_scaled(self, other: "Expr", scale: float) -> "Expr":
        out = self.copy()
        out.constant += scale * other.constant
        self._merge(out.lin_x, other.lin_x, scale)
        self._merge(out.lin_xi, other.lin_xi, scale)
        self._merge(out.bilin, other.bilin, scale)
        self._merge(out.lin_y, other.lin_y, scale)
        return out

    def __add__(self, other):
        if isinstance(other, Expr):
            return self._add_scaled(other, 1.0)
        if isinstance(other, Real):
            out = self.copy()
            out.constant += float(other)
            return out
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Expr):
            return self._add_scaled(other, -1.0)
        if isinstance(other, Real):
            return self + (-float(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self * -1.0

    def _scaled(self, scale: float) -> "Expr":
        if scale == 0.0:
            return Expr()
        return Expr(
            self.constant * scale,
            {k: v * scale for k, v in self.lin_x.items()},
            {k: v * scale for k, v in self.lin_xi.items()},
            {k: v * scale for k, v in self.bilin.items()},
            {k: v * scale for k, v in self.lin_y.items()},
        )

    def _is_constant(self) -> bool:
        return not (self.lin_x or self.lin_xi or self.bilin or self.lin_y)

    def __mul__(self, other):
        if isinstance(other, Real):
            return self._scaled(float(other))
        if not isinstance(other, Expr):
            return NotImplemented
        # a pure-constant factor just scales the other side
        if self._is_constant():
            return other._scaled(self.constant)
        if other._is_constant():
            return self._scaled(other.constant)
        left, right = self, other
        if left.lin_xi or left.bilin:
            left, right = right, left
        if left.lin_xi or left.bilin:
            raise MalformedExpr("products may contain uncertain parameters in one factor only")
        if right.bilin:
            raise MalformedExpr("products with bilinear factors are not supported")
        if left.lin_y or right.lin_y:
            raise MalformedExpr("adjustable variables may not appear in products")
        if left.lin_x and right.lin_x:
            raise MalformedExpr("products of two decision-variable expressions are not linear")
        # left: constant + lin_x; right: constant + lin_x|lin_xi
        out = right._scaled(left.constant)
        for i in sorted(left.lin_x):
            ci = left.lin_x[i]
            if right.constant != 0.0:
                new = out.lin_x.get(i, 0.0) + ci * right.constant
                if new == 0.0:
                    out.lin_x.pop(i, None)
                else:
                    out.lin_x[i] = new
            for j in sorted(right.lin_xi):
                key = (i, j)
                new = out.bilin.get(key, 0.0) + ci * right.lin_xi[j]
                if new == 0.0:
                    out.bilin.pop(key, None)
                else:
                    out.bilin[key] = new
        return out

    __rmul__ = __mul__

    # -- queries ---------------------------------------------------------

    def references_xi(self) -> bool:
        return bool(self.lin_xi or self.bilin)

    def xi_ids(self) -> set[int]:
        ids = set(self.lin_xi)
        ids.update(j for (_, j) in self.bilin)
        return ids

    def var_ids(self) -> set[int]:
        ids = set(self.lin_x)
        ids.update(i for (i, _) in self.bilin)
        return ids

    def evaluate(
        self,
        x: Mapping[int, float] | None = None,
        xi: Mapping[int, float] | None = None,
        y: Mapping[int, float] | None = None,
    ) -> float:
        """Numeric value; raises MissingAssignment for unreferenced ids."""

        def lookup(m, k, kind):
            if m is None or k not in m:
                raise MissingAssignment(f"no value supplied for {kind} id {k}")
            return m[k]

        total = self.constant
        for i in sorted(self.lin_x):
            total += self.lin_x[i] * lookup(x, i, "variable")
        for j in sorted(self.lin_xi):
            total += self.lin_xi[j] * lookup(xi, j, "parameter")
        for i, j in sorted(self.bilin):
            total += self.bilin[(i, j)] * lookup(x, i, "variable") * lookup(xi, j, "parameter")
        for a in sorted(self.lin_y):
            total += self.lin_y[a] * lookup(y, a, "adjustable")
        return total


def instantiate(expr: Expr, xi: Mapping[int, float]) -> Expr:
    """Substitute fixed parameter values, folding bilinear terms into lin_x.

    The summation order is fixed (sorted ids) so repeated calls with the
    same inputs produce bit-identical coefficients.
    """
    out = Expr(expr.constant, dict(expr.lin_x), {}, {}, dict(expr.lin_y))
    for j in sorted(expr.lin_xi):
        try:
            out.constant += expr.lin_xi[j] * xi[j]
        except KeyError:
            raise MissingAssignment(f"no value supplied for parameter id {j}") from None
    for i, j in sorted(expr.bilin):
        try:
            add = expr.bilin[(i, j)] * xi[j]
        except KeyError:
            raise MissingAssignment(f"no value supplied for parameter id {j}") from None
        new = out.lin_x.get(i, 0.0) + add
        if new == 0.0:
            out.lin_x.pop(i, None)
        else:
            out.lin_x[i] = new
    return out


def substitute_rules(expr: Expr, rules: Mapping[int, tuple[int, Mapping[int, int]]]) -> Expr:
    """Replace adjustable terms by decision-rule variables.

    ``rules[aid] = (intercept_vid, {param_id: slope_vid})``; a coefficient
    ``c`` on adjustable ``aid`` becomes ``c`` on the intercept variable and
    bilinear terms ``c * slope_j * xi_j``.
    """
    out = Expr(expr.constant, dict(expr.lin_x), dict(expr.lin_xi), dict(expr.bilin), {})
    for aid in sorted(expr.lin_y):
        coef = expr.lin_y[aid]
        if aid not in rules:
            raise MissingAssignment(f"no decision rule for adjustable id {aid}")
        intercept, slopes = rules[aid]
        new = out.lin_x.get(intercept, 0.0) + coef
        if new == 0.0:
            out.lin_x.pop(intercept, None)
        else:
            out.lin_x[intercept] = new
        for j in sorted(slopes):
            key = (slopes[j], j)
            nb = out.bilin.get(key, 0.0) + coef
            if nb == 0.0:
                out.bilin.pop(key, None)
            else:
                out.bilin[key] = nb
    return out


class VarDomain:
    CONTINUOUS = "continuous"
    BINARY = "binary"
    INTEGER = "integer"
    ALL = (CONTINUOUS, BINARY, INTEGER)


@dataclass(frozen=True)
class DecisionVar:
    id: VarId
    name: str
    domain: str = VarDomain.CONTINUOUS
    lower: float = -INF
    upper: float = INF


@dataclass(frozen=True)
class AdjustableVar:
    id: AdjId
    name: str
    deps: tuple[UncId, ...]
    lower: float = -INF
    upper: float = INF


@dataclass
class UncParamGroup:
    name: str
    ids: tuple[UncId, ...]
    nominal: tuple[float, ...]
    uncset: object  # PolyhedralSet | EllipsoidalSet | GenericSet

    @property
    def size(self) -> int:
        return len(self.ids)

    def labels(self) -> list[str]:
        return [f"{self.name}[{k}]" for k in range(len(self.ids))]


@dataclass
class Constraint:
    expr: Expr
    sense: Sense
    rhs: float
    label: str

    @property
    def uncertain(self) -> bool:
        return self.expr.references_xi()


class Model:
    """Container for variables, uncertain parameter groups, adjustable
    variables, constraints and the objective.

    Building is imperative (``add_var`` and friends); ``validate()`` checks
    the cross-cutting invariants and is called by every solver entry point.
    """

    def __init__(self, name: str = "model"):
        self.name = name
        self.vars: list[DecisionVar] = []
        self.adjustables: list[AdjustableVar] = []
        self.groups: list[UncParamGroup] = []
        self.constraints: list[Constraint] = []
        self.objective: Expr = Expr()
        self.sense: ObjSense = ObjSense.MIN
        self._names: set[str] = set()

    # -- construction ------------------------------------------------------

    def _claim_name(self, name: str) -> str:
        if name in self._names:
            raise ValidationError(f"duplicate name {name!r}")
        self._names.add(name)
        return name

    def add_var(
        self,
        name: str,
        domain: str = VarDomain.CONTINUOUS,
        lower: float = -INF,
        upper: float = INF,
    ) -> VarId:
        if domain not in VarDomain.ALL:
            raise ValidationError(f"unknown domain {domain!r}")
        if domain == VarDomain.BINARY:
            if lower == -INF:
                lower = 0.0
            if upper == INF:
                upper = 1.0
            if lower < 0.0 or upper > 1.0:
                raise InvalidBounds(f"binary variable {name!r} must have bounds within [0, 1]")
        lower, upper = float(lower), float(upper)
        if lower > upper:
            raise InvalidBounds(f"variable {name!r} has lower bound above upper bound")
        if math.isnan(lower) or math.isnan(upper):
            raise InvalidBounds(f"variable {name!r} has NaN bounds")
        if domain == VarDomain.INTEGER and not (math.isfinite(lower) and math.isfinite(upper)):
            raise InvalidBounds(f"integer variable {name!r} needs finite bounds")
        vid = VarId(len(self.vars))
        self.vars.append(DecisionVar(vid, self._claim_name(name), domain, lower, upper))
        return vid

    def add_unc_params(self, name: str, nominal: Iterable[float], uncset) -> list[UncId]:
        """Declare a group of uncertain parameters sharing one set.

        Returns the per-component parameter ids.  Parameter ids are global
        across groups; set matrices are indexed by position within the
        group.
        """
        nom = tuple(float(v) for v in nominal)
        if not nom:
            raise DimensionMismatch(f"group {name!r} must contain at least one parameter")
        if uncset is None:
            raise ValidationError(f"group {name!r} needs an uncertainty set")
        if getattr(uncset, "dim", None) != len(nom):
            raise DimensionMismatch(
                f"group {name!r}: set dimension {getattr(uncset, 'dim', None)} "
                f"!= nominal length {len(nom)}"
            )
        if not uncset.contains(nom, tol=_NOMINAL_TOL):
            raise NominalOutsideSet(f"group {name!r}: nominal point violates the attached set")
        base = sum(g.size for g in self.groups)
        ids = [UncId(base + k) for k in range(len(nom))]
        self.groups.append(UncParamGroup(self._claim_name(name), tuple(ids), nom, uncset))
        return ids

    def add_adjustable(
        self,
        name: str,
        deps: Iterable[UncId],
        lower: float = -INF,
        upper: float = INF,
    ) -> AdjId:
        dep_ids = tuple(UncId(int(d)) for d in deps)
        if not dep_ids:
            raise EmptyDeps(f"adjustable {name!r} needs at least one dependency")
        self._check_deps(name, dep_ids)
        lower, upper = float(lower), float(upper)
        if lower > upper:
            raise InvalidBounds(f"adjustable {name!r} has lower bound above upper bound")
        aid = AdjId(len(self.adjustables))
        self.adjustables.append(AdjustableVar(aid, self._claim_name(name), dep_ids, lower, upper))
        return aid

    def set_adjustable_deps(self, aid: AdjId, deps: Iterable[UncId]) -> None:
        """Narrow (or widen) the parameters an adjustable may react to.

        An empty list is allowed here and turns the variable static: the
        decision-rule transform then treats it as an ordinary variable.
        """
        dep_ids = tuple(UncId(int(d)) for d in deps)
        old = self.adjustables[int(aid)]
        self._check_deps(old.name, dep_ids)
        self.adjustables[int(aid)] = AdjustableVar(old.id, old.name, dep_ids, old.lower, old.upper)

    def _check_deps(self, name: str, dep_ids: tuple[UncId, ...]) -> None:
        if len(set(dep_ids)) != len(dep_ids):
            raise UnknownUncParam(f"adjustable {name!r} lists a dependency twice")
        known = self.unc_ids()
        for d in dep_ids:
            if int(d) not in known:
                raise UnknownUncParam(f"adjustable {name!r} depends on unknown parameter id {int(d)}")

    def add_constraint(self, expr: Expr, sense: Sense | str, rhs: float, label: str | None = None) -> int:
        if isinstance(sense, str):
            sense = Sense.parse(sense)
        if sense is Sense.EQ and expr.references_xi():
            raise UncertainEquality("equality constraints may not reference uncertain parameters")
        idx = len(self.constraints)
        lbl = label or f"c{idx}"
        # labels key feasibility reports, so they must stay unique
        if any(c.label == lbl for c in self.constraints):
            raise ValidationError(f"duplicate constraint label {lbl!r}")
        self.constraints.append(Constraint(expr, sense, float(rhs), lbl))
        return idx

    def set_objective(self, expr: Expr, sense: ObjSense | str) -> None:
        if isinstance(sense, str):
            sense = ObjSense.parse(sense)
        self.objective = expr
        self.sense = sense

    # -- lookups -----------------------------------------------------------

    def unc_ids(self) -> set[int]:
        out = set()
        for g in self.groups:
            out.update(int(i) for i in g.ids)
        return out

    def group_of(self, uid: int) -> tuple[UncParamGroup, int]:
        """Owning group and local offset of a global parameter id."""
        for g in self.groups:
            base = int(g.ids[0])
            if base <= uid < base + g.size:
                return g, uid - base
        raise UnknownUncParam(f"unknown parameter id {uid}")

    def nominal_point(self) -> dict[int, float]:
        out = {}
        for g in self.groups:
            for uid, val in zip(g.ids, g.nominal):
                out[int(uid)] = val
        return out

    def param_labels(self) -> dict[int, str]:
        out = {}
        for g in self.groups:
            for k, uid in enumerate(g.ids):
                out[int(uid)] = f"{g.name}[{k}]"
        return out

    # -- validation ----------------------------------------------------------

    def _check_expr(self, expr: Expr, where: str) -> None:
        nvars = len(self.vars)
        nadj = len(self.adjustables)
        unc = self.unc_ids()
        for i in expr.lin_x:
            if not 0 <= i < nvars:
                raise ValidationError(f"{where}: unknown variable id {i}")
        for j in expr.lin_xi:
            if j not in unc:
                raise ValidationError(f"{where}: unknown parameter id {j}")
        for (i, j) in expr.bilin:
            if not 0 <= i < nvars:
                raise ValidationError(f"{where}: unknown variable id {i}")
            if j not in unc:
                raise ValidationError(f"{where}: unknown parameter id {j}")
        for a in expr.lin_y:
            if not 0 <= a < nadj:
                raise ValidationError(f"{where}: unknown adjustable id {a}")

    def validate(self) -> None:
        """Check every structural invariant; raises on the first failure."""
        for v in self.vars:
            if v.lower > v.upper:
                raise InvalidBounds(f"variable {v.name!r} has crossing bounds")
            if v.domain == VarDomain.BINARY and (v.lower < 0 or v.upper > 1):
                raise InvalidBounds(f"binary variable {v.name!r} has bounds outside [0, 1]")
        for g in self.groups:
            if g.uncset is None:
                raise ValidationError(f"group {g.name!r} has no uncertainty set")
            if getattr(g.uncset, "dim", None) != g.size:
                raise DimensionMismatch(f"group {g.name!r}: set dimension mismatch")
            if not g.uncset.contains(g.nominal, tol=_NOMINAL_TOL):
                raise NominalOutsideSet(f"group {g.name!r}: nominal point violates the set")
        known = self.unc_ids()
        for a in self.adjustables:
            if a.lower > a.upper:
                raise InvalidBounds(f"adjustable {a.name!r} has crossing bounds")
            for d in a.deps:
                if int(d) not in known:
                    raise UnknownUncParam(
                        f"adjustable {a.name!r} depends on unknown parameter id {int(d)}"
                    )
        for c in self.constraints:
            self._check_expr(c.expr, c.label)
            if c.sense is Sense.EQ and c.uncertain:
                raise UncertainEquality(f"{c.label}: uncertain equality constraint")
            if not math.isfinite(c.rhs):
                raise ValidationError(f"{c.label}: right-hand side must be finite")
        self._check_expr(self.objective, "objective")

    # -- misc ----------------------------------------------------------------

    def var_by_name(self, name: str) -> DecisionVar:
        for v in self.vars:
            if v.name == name:
                return v
        raise KeyError(name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.adjustables == other.adjustables
            and self.groups == other.groups
            and self.constraints == other.constraints
            and self.objective == other.objective
            and self.sense == other.sense
        )

    def __repr__(self) -> str:
        return (
            f"Model({self.name!r}: {len(self.vars)} vars, {len(self.adjustables)} adjustable, "
            f"{sum(g.size for g in self.groups)} params, {len(self.constraints)} constraints)"
        )


__all__ = [
    "AdjustableVar",
    "Constraint",
    "DecisionVar",
    "Expr",
    "Model",
    "UncParamGroup",
    "VarDomain",
    "instantiate",
    "substitute_rules",
]
