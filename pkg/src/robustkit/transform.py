"""Reductions from uncertain models to deterministic ones.

The pipeline pieces:

* :func:`lift_objective` -- move an uncertainty-affected objective into an
  epigraph constraint so the objective itself becomes certain.
* :func:`apply_ldr` -- replace each adjustable variable by an affine
  decision rule ``y(xi) = y0 + sum_j Y_j xi_j`` over its declared
  dependencies, turning adjustables into ordinary columns.
* :func:`nominal_substitute` -- freeze all parameters at their nominal
  values, giving the deterministic baseline problem.
* :func:`reformulate_polyhedral` / :func:`reformulate_ellipsoidal` -- the
  duality-based counterpart of one uncertain row: multiplier columns plus
  linear rows for polyhedral groups, a :class:`ConicRow` in closed form
  for a single ellipsoidal group.
* :func:`build_counterpart` -- per-row geometry dispatch over a whole
  model, assembling a :class:`DeterministicModel` with provenance tags.

All functions leave their input model untouched and return new objects.
Coefficient assembly iterates ids in sorted order throughout, so repeated
runs produce bit-identical matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .base import INF, ObjSense, Sense
from .errors import (
    NoApplicableReformulation,
    NonAffineAfterSubstitution,
    NotAffineInXi,
    ValidationError,
)
from .kernel import ROW_EQ, ROW_GE, ROW_LE, StandardLp
from .model import (
    AdjustableVar,
    Constraint,
    Expr,
    Model,
    VarDomain,
    instantiate,
    substitute_rules,
)
from .sets import EllipsoidalSet, GenericSet, PolyhedralSet

_ROW_CODE = {Sense.LE: ROW_LE, Sense.GE: ROW_GE, Sense.EQ: ROW_EQ}


# ---------------------------------------------------------------------------
# deterministic model containers


@dataclass
class Column:
    name: str
    lower: float = -INF
    upper: float = INF
    kind: str = VarDomain.CONTINUOUS

    @property
    def is_integer(self) -> bool:
        return self.kind != VarDomain.CONTINUOUS


@dataclass
class LinRow:
    label: str
    coefs: dict[str, float]
    sense: Sense
    rhs: float


@dataclass
class ConicRow:
    """Row of the form ``f(x) + a(x).mean + ||chol.T @ a(x)|| <= 0``.

    ``a(x) = a_const + sum_i a_lin[name_i] * x_i`` is the vector of
    parameter coefficients as a function of the decision variables, and
    ``f(x) = f_const + sum_i f_lin[name_i] * x_i`` collects everything
    parameter-free.  Solved by supporting-hyperplane cuts.
    """

    label: str
    mean: np.ndarray
    cov: np.ndarray
    chol: np.ndarray
    a_const: np.ndarray
    a_lin: dict[str, np.ndarray]
    f_const: float
    f_lin: dict[str, float]

    def coef_vector(self, x: Mapping[str, float]) -> np.ndarray:
        a = self.a_const.copy()
        for name in sorted(self.a_lin):
            a += self.a_lin[name] * x[name]
        return a

    def evaluate(self, x: Mapping[str, float]) -> float:
        """Exact left-hand side at a candidate point (feasible iff <= 0)."""
        a = self.coef_vector(x)
        f = self.f_const
        for name in sorted(self.f_lin):
            f += self.f_lin[name] * x[name]
        return f + float(a @ self.mean) + float(np.linalg.norm(self.chol.T @ a))

    def cut(self, u: np.ndarray, tag: str) -> LinRow:
        """Linear outer cut for a direction ``u`` with ``||u|| <= 1``.

        ``u.T chol.T a(x) + mean.T a(x) + f(x) <= 0`` underestimates the
        norm term, so every such row is implied by the conic row.
        """
        w = self.mean + self.chol @ u
        coefs: dict[str, float] = {}
        for name in sorted(self.a_lin):
            coefs[name] = float(w @ self.a_lin[name])
        for name in sorted(self.f_lin):
            coefs[name] = coefs.get(name, 0.0) + self.f_lin[name]
        const = self.f_const + float(w @ self.a_const)
        return LinRow(tag, coefs, Sense.LE, -const)


@dataclass
class DeterministicModel:
    """Plain LP/MILP data with named columns, plus any pending conic rows.

    ``provenance`` records ``kind`` plus per-generated-row and
    per-generated-column maps back to the source uncertain constraint
    label, so exported counterparts stay inspectable.
    """

    columns: list[Column] = field(default_factory=list)
    rows: list[LinRow] = field(default_factory=list)
    conic_rows: list[ConicRow] = field(default_factory=list)
    obj: dict[str, float] = field(default_factory=dict)
    obj_const: float = 0.0
    maximize: bool = False
    provenance: dict = field(default_factory=dict)

    def column_index(self) -> dict[str, int]:
        return {c.name: i for i, c in enumerate(self.columns)}

    def to_standard_lp(self, extra_rows: list[LinRow] | None = None):
        """Assemble the linear part into a kernel LP.

        Conic rows are not representable directly and are skipped; callers
        approximate them with ``extra_rows`` cuts.  Returns the LP and the
        indices of integer-constrained columns.
        """
        index = self.column_index()
        rows = self.rows if not extra_rows else self.rows + extra_rows
        n = len(self.columns)
        m = len(rows)
        A = np.zeros((m, n))
        senses = np.zeros(m, dtype=np.int8)
        rhs = np.zeros(m)
        for r, row in enumerate(rows):
            for cname, coef in row.coefs.items():
                A[r, index[cname]] += coef
            senses[r] = _ROW_CODE[row.sense]
            rhs[r] = row.rhs
        obj = np.zeros(n)
        for cname, coef in self.obj.items():
            obj[index[cname]] += coef
        lp = StandardLp(
            obj=obj,
            A=A,
            senses=senses,
            rhs=rhs,
            lower=np.array([c.lower for c in self.columns], dtype=float),
            upper=np.array([c.upper for c in self.columns], dtype=float),
            maximize=self.maximize,
            names=[c.name for c in self.columns],
        )
        int_cols = [i for i, c in enumerate(self.columns) if c.is_integer]
        return lp, int_cols

    def objective_value(self, xvec: np.ndarray) -> float:
        index = self.column_index()
        total = self.obj_const
        for cname in sorted(self.obj):
            total += self.obj[cname] * float(xvec[index[cname]])
        return total


@dataclass
class LdrCoefficients(Mapping):
    """Decision-rule bookkeeping: which columns realize which adjustable.

    ``rules[adj_id] = (intercept_var_id, {param_id: slope_var_id})``; an
    empty slope map marks a static (dependency-free) adjustable.  Behaves
    as a read-only mapping so it can be fed straight back into
    :func:`robustkit.model.substitute_rules`.
    """

    rules: dict[int, tuple[int, dict[int, int]]] = field(default_factory=dict)

    def __getitem__(self, aid) -> tuple[int, dict[int, int]]:
        return self.rules[int(aid)]

    def __iter__(self) -> Iterator[int]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def evaluate(self, aid, var_values, xi_values) -> float:
        """Reconstruct ``y(xi) = y0 + sum_j Y_j xi_j`` at an assignment."""
        v0, slopes = self.rules[int(aid)]
        y = float(var_values[v0])
        for uid in sorted(slopes):
            y += float(var_values[slopes[uid]]) * float(xi_values[uid])
        return y


# ---------------------------------------------------------------------------
# model rebuilding helpers


def _fresh_name(model: Model, base: str) -> str:
    name = base
    k = 1
    while name in model._names:
        name = f"{base}{k}"
        k += 1
    return name


def _clone_shell(model: Model) -> Model:
    """New model with the same decision variables and parameter groups.

    Ids are assigned in declaration order on both sides, so every VarId
    and UncId of the source remains valid in the clone.
    """
    m = Model(model.name)
    for v in model.vars:
        m.add_var(v.name, v.domain, v.lower, v.upper)
    for g in model.groups:
        m.add_unc_params(g.name, g.nominal, g.uncset)
    return m


def clone_model(model: Model) -> Model:
    m = _clone_shell(model)
    for a in model.adjustables:
        # rebuilt directly: the source was validated, and add_adjustable
        # would refuse deps that were legitimately cleared to ()
        m.adjustables.append(
            AdjustableVar(a.id, m._claim_name(a.name), a.deps, a.lower, a.upper)
        )
    for c in model.constraints:
        m.constraints.append(Constraint(c.expr.copy(), c.sense, c.rhs, c.label))
    m.objective = model.objective.copy()
    m.sense = model.sense
    return m


# ---------------------------------------------------------------------------
# objective lifting


def _objective_uncertain(model: Model) -> bool:
    obj = model.objective
    if obj.references_xi():
        return True
    for aid in obj.lin_y:
        if model.adjustables[int(aid)].deps:
            return True
    return False


def lift_objective(model: Model) -> tuple[Model, str | None]:
    """Epigraph reformulation of an uncertainty-affected objective.

    Returns ``(new_model, t_name)`` where ``t_name`` is the epigraph
    variable, or ``(clone, None)`` when the objective is already certain.
    A minimized objective ``f`` becomes ``min t`` with ``f - t <= 0``; a
    maximized one becomes ``max t`` with ``t - f <= 0``.  The new row is
    labeled ``obj``.  Objectives that reach parameters only through an
    adjustable variable with dependencies are lifted too, since the
    decision-rule substitution will surface those parameters.
    """
    out = clone_model(model)
    if not _objective_uncertain(model):
        return out, None
    tname = _fresh_name(out, "t.obj")
    tvid = out.add_var(tname)
    tvar = Expr.var(tvid)
    if model.sense is ObjSense.MIN:
        out.add_constraint(model.objective.copy() - tvar, Sense.LE, 0.0, label="obj")
    else:
        out.add_constraint(tvar - model.objective.copy(), Sense.LE, 0.0, label="obj")
    out.set_objective(tvar, model.sense)
    return out, tname


# ---------------------------------------------------------------------------
# linear decision rules


def apply_ldr(model: Model, freeze_slopes: bool = False) -> tuple[Model, LdrCoefficients]:
    """Substitute affine decision rules for every adjustable variable.

    Each adjustable with dependencies ``J`` gains an intercept column and
    one slope column per dependency; its finite bounds turn into uncertain
    rows (labels ``b.<name>.lo`` / ``b.<name>.up``) because the rule must
    respect them for every parameter realization.  Dependency-free
    adjustables become ordinary static columns.  ``freeze_slopes`` pins
    every slope to zero, which recovers the static policy on the same
    column layout.
    """
    out = _clone_shell(model)
    labels = model.param_labels()
    rules: dict[int, tuple[int, dict[int, int]]] = {}
    for a in model.adjustables:
        if not a.deps:
            vid = out.add_var(a.name, VarDomain.CONTINUOUS, a.lower, a.upper)
            rules[int(a.id)] = (vid, {})
            continue
        v0 = out.add_var(_fresh_name(out, f"{a.name}.0"))
        slopes: dict[int, int] = {}
        for uid in sorted(int(u) for u in a.deps):
            sname = _fresh_name(out, f"{a.name}.d.{labels[uid]}")
            if freeze_slopes:
                slopes[uid] = out.add_var(sname, VarDomain.CONTINUOUS, 0.0, 0.0)
            else:
                slopes[uid] = out.add_var(sname)
        rules[int(a.id)] = (v0, slopes)
    for c in model.constraints:
        sub = substitute_rules(c.expr, rules)
        if sub.lin_y:
            raise NonAffineAfterSubstitution(
                f"constraint {c.label!r} kept adjustable terms after substitution"
            )
        out.add_constraint(sub, c.sense, c.rhs, c.label)
    for a in model.adjustables:
        if not a.deps:
            continue
        v0, slopes = rules[int(a.id)]
        rule = Expr.of(x={v0: 1.0}, bilin={(svid, uid): 1.0 for uid, svid in slopes.items()})
        if a.lower > -INF:
            out.add_constraint(rule.copy(), Sense.GE, a.lower, label=f"b.{a.name}.lo")
        if a.upper < INF:
            out.add_constraint(rule.copy(), Sense.LE, a.upper, label=f"b.{a.name}.up")
    out.set_objective(substitute_rules(model.objective, rules), model.sense)
    return out, LdrCoefficients(rules)


# ---------------------------------------------------------------------------
# nominal instantiation


def instantiated_row(con: Constraint, xi: Mapping[int, float],
                     var_name, adj_name=None, label: str | None = None) -> LinRow:
    """Freeze one constraint at a parameter assignment.

    Shared by the nominal reduction and the scenario rows of the
    cutting-plane solver so both produce the same coefficients for the
    same assignment, bit for bit.
    """
    e = instantiate(con.expr, xi)
    coefs: dict[str, float] = {}
    for vid in sorted(e.lin_x):
        coefs[var_name(vid)] = e.lin_x[vid]
    for aid in sorted(e.lin_y):
        if adj_name is None:
            raise NotAffineInXi(
                f"constraint {con.label!r} still references adjustable variables"
            )
        name = adj_name(aid)
        coefs[name] = coefs.get(name, 0.0) + e.lin_y[aid]
    return LinRow(label or con.label, coefs, con.sense, con.rhs - e.constant)


def nominal_substitute(model: Model) -> DeterministicModel:
    """Deterministic baseline: parameters at nominal, adjustables static.

    With a single fixed scenario there is nothing for a decision rule to
    react to, so each adjustable is kept as one plain column with its own
    bounds.
    """
    xi = model.nominal_point()
    det = DeterministicModel(maximize=model.sense is ObjSense.MAX,
                             provenance={"kind": "nominal", "rows": {}, "columns": {}})
    for v in model.vars:
        det.columns.append(Column(v.name, v.lower, v.upper, v.domain))
    for a in model.adjustables:
        det.columns.append(Column(a.name, a.lower, a.upper))
    var_name = lambda vid: model.vars[int(vid)].name
    adj_name = lambda aid: model.adjustables[int(aid)].name
    for c in model.constraints:
        det.rows.append(instantiated_row(c, xi, var_name, adj_name))
    e = instantiate(model.objective, xi)
    det.obj_const = e.constant
    for vid in sorted(e.lin_x):
        det.obj[var_name(vid)] = e.lin_x[vid]
    for aid in sorted(e.lin_y):
        name = adj_name(aid)
        det.obj[name] = det.obj.get(name, 0.0) + e.lin_y[aid]
    return det


# ---------------------------------------------------------------------------
# per-expression parameter profile


def xi_profile(model: Model, expr: Expr, x) -> tuple[float, dict[int, np.ndarray]]:
    """Split an expression at fixed decisions into its parameter profile.

    Returns ``(f, a)`` with ``expr(x, xi) = f + sum_g a[g] . xi_g`` where
    ``g`` ranges over the indices of referenced parameter groups.  ``x``
    is anything indexable by variable id.
    """
    if expr.lin_y:
        raise NotAffineInXi("adjustable variables must be substituted out first")
    f = expr.constant
    for vid in sorted(expr.lin_x):
        f += expr.lin_x[vid] * float(x[int(vid)])
    where = _param_index(model)
    a: dict[int, np.ndarray] = {}
    for uid in sorted(expr.lin_xi):
        gi, off = where[int(uid)]
        vec = a.setdefault(gi, np.zeros(model.groups[gi].size))
        vec[off] += expr.lin_xi[uid]
    for vid, uid in sorted(expr.bilin):
        gi, off = where[int(uid)]
        vec = a.setdefault(gi, np.zeros(model.groups[gi].size))
        vec[off] += expr.bilin[(vid, uid)] * float(x[int(vid)])
    return f, a


def _param_index(model: Model) -> dict[int, tuple[int, int]]:
    where: dict[int, tuple[int, int]] = {}
    for gi, g in enumerate(model.groups):
        for off, uid in enumerate(g.ids):
            where[int(uid)] = (gi, off)
    return where


# ---------------------------------------------------------------------------
# duality-based counterpart


def _normalized(con: Constraint) -> tuple[Expr, float]:
    """Uncertain row as ``expr <= rhs`` (>= rows are negated)."""
    if con.sense is Sense.LE:
        return con.expr, con.rhs
    if con.sense is Sense.GE:
        return -con.expr, -con.rhs
    raise NotAffineInXi(f"equality row {con.label!r} cannot be robustified")


def _split_groups(model: Model, expr: Expr):
    """Per-group symbolic coefficient split of an uncertain row.

    ``a_g(x)[j] = d[g][j] + sum_i B[g][i][j] x_i`` over referenced group
    indices ``g``.
    """
    where = _param_index(model)
    d: dict[int, np.ndarray] = {}
    B: dict[int, dict[int, np.ndarray]] = {}
    for uid in sorted(expr.lin_xi):
        gi, off = where[int(uid)]
        d.setdefault(gi, np.zeros(model.groups[gi].size))[off] += expr.lin_xi[uid]
    for vid, uid in sorted(expr.bilin):
        gi, off = where[int(uid)]
        d.setdefault(gi, np.zeros(model.groups[gi].size))
        B.setdefault(gi, {}).setdefault(int(vid), np.zeros(model.groups[gi].size))
        B[gi][int(vid)][off] += expr.bilin[(vid, uid)]
    return d, B


def _group_geometry(group):
    """Concrete set family backing a group, for reformulation purposes."""
    s = group.uncset
    if isinstance(s, PolyhedralSet):
        return "poly", s
    if isinstance(s, EllipsoidalSet):
        return "ellip", s
    if isinstance(s, GenericSet):
        geo = s.geometry()
        concrete = geo.as_set()
        if concrete is None:
            return "unsupported", geo.reason
        if isinstance(concrete, PolyhedralSet):
            return "poly", concrete
        return "ellip", concrete
    return "unsupported", f"unknown set type {type(s).__name__}"


def reformulate_polyhedral(model: Model, con: Constraint):
    """Dual block replacing one uncertain row over polyhedral groups.

    The row is normalized to ``f(x) + sum_g a_g(x) . xi_g <= 0``.  Each
    referenced group ``{xi : P xi <= b}`` contributes multipliers
    ``lam >= 0`` (columns ``lam[<label>][r]``, with the group name
    interposed when several groups appear), equality rows
    ``P.T lam = a_g(x)``, and a term ``b . lam`` on the shared budget row
    ``f(x) + sum_g b_g . lam_g <= 0``, which carries the original label.
    Returns ``(columns, rows)`` with the budget row last.
    """
    expr, rhs = _normalized(con)
    if expr.lin_y:
        raise NotAffineInXi(
            f"constraint {con.label!r} references adjustable variables; "
            "apply decision rules first"
        )
    var_name = lambda vid: model.vars[int(vid)].name
    d, B = _split_groups(model, expr)
    gids = sorted(d)
    budget: dict[str, float] = {
        var_name(vid): c for vid, c in sorted(expr.lin_x.items())
    }
    columns: list[Column] = []
    rows: list[LinRow] = []
    multi = len(gids) > 1
    for gi in gids:
        kind, backing = _group_geometry(model.groups[gi])
        gname = model.groups[gi].name
        if kind != "poly":
            reason = backing if kind == "unsupported" else "the set is not polyhedral"
            raise NoApplicableReformulation(
                f"constraint {con.label!r}: group {gname!r} has no polyhedral form ({reason})"
            )
        P, b = backing.mat, backing.rhs
        lam = []
        for r in range(P.shape[0]):
            name = (f"lam[{con.label}][{gname}][{r}]" if multi
                    else f"lam[{con.label}][{r}]")
            columns.append(Column(name, 0.0, INF))
            lam.append(name)
        for j in range(backing.dim):
            coefs = {lam[r]: P[r, j] for r in range(P.shape[0]) if P[r, j] != 0.0}
            for vid in sorted(B.get(gi, {})):
                bij = B[gi][vid][j]
                if bij != 0.0:
                    coefs[var_name(vid)] = coefs.get(var_name(vid), 0.0) - bij
            eqlabel = (f"{con.label}.eq[{gname}][{j}]" if multi
                       else f"{con.label}.eq[{j}]")
            rows.append(LinRow(eqlabel, coefs, Sense.EQ, d[gi][j]))
        for r in range(P.shape[0]):
            if b[r] != 0.0:
                budget[lam[r]] = budget.get(lam[r], 0.0) + b[r]
    rows.append(LinRow(con.label, budget, Sense.LE, rhs - expr.constant))
    return columns, rows


def reformulate_ellipsoidal(model: Model, con: Constraint) -> ConicRow:
    """Closed-form counterpart of one uncertain row over one ellipsoid.

    The worst case of ``a(x) . xi`` over the set is
    ``a(x) . mean + ||chol.T a(x)||``, so the row becomes a single
    :class:`ConicRow`; the solver linearizes it by supporting
    hyperplanes.  The row must reference exactly one group, and that
    group's set must be (or detect as) ellipsoidal.
    """
    expr, rhs = _normalized(con)
    if expr.lin_y:
        raise NotAffineInXi(
            f"constraint {con.label!r} references adjustable variables; "
            "apply decision rules first"
        )
    var_name = lambda vid: model.vars[int(vid)].name
    d, B = _split_groups(model, expr)
    gids = sorted(d)
    if len(gids) != 1:
        raise NoApplicableReformulation(
            f"constraint {con.label!r} references {len(gids)} parameter groups; "
            "the ellipsoidal counterpart handles exactly one"
        )
    gi = gids[0]
    kind, backing = _group_geometry(model.groups[gi])
    if kind != "ellip":
        reason = backing if kind == "unsupported" else "the set is not ellipsoidal"
        raise NoApplicableReformulation(
            f"constraint {con.label!r}: group {model.groups[gi].name!r} "
            f"has no ellipsoidal form ({reason})"
        )
    return ConicRow(
        label=con.label,
        mean=backing.mean.copy(),
        cov=backing.cov.copy(),
        chol=backing.chol.copy(),
        a_const=d[gi].copy(),
        a_lin={var_name(vid): B[gi][vid].copy() for vid in sorted(B.get(gi, {}))},
        f_const=expr.constant - rhs,
        f_lin={var_name(vid): c for vid, c in sorted(expr.lin_x.items())},
    )


def build_counterpart(model: Model) -> DeterministicModel:
    """Deterministic robust counterpart of a model without adjustables.

    Certain rows are copied; every uncertain row is dispatched on the
    geometry of the groups it references: all-polyhedral rows get dual
    blocks via :func:`reformulate_polyhedral`, rows touching exactly one
    ellipsoidal group become conic rows via
    :func:`reformulate_ellipsoidal`, and anything else raises
    :class:`NoApplicableReformulation`.  Generated columns and rows are
    recorded in ``provenance`` under their source constraint label.
    """
    if any(c.expr.lin_y for c in model.constraints) or model.objective.lin_y:
        raise NotAffineInXi(
            "the model still contains adjustable variables; apply decision rules first"
        )
    if model.objective.references_xi():
        raise ValidationError(
            "the objective references uncertain parameters; lift it into a constraint first"
        )
    rowprov: dict[str, str] = {}
    colprov: dict[str, str] = {}
    det = DeterministicModel(
        maximize=model.sense is ObjSense.MAX,
        provenance={"kind": "counterpart", "rows": rowprov, "columns": colprov},
    )
    for v in model.vars:
        det.columns.append(Column(v.name, v.lower, v.upper, v.domain))
    var_name = lambda vid: model.vars[int(vid)].name
    for vid in sorted(model.objective.lin_x):
        det.obj[var_name(vid)] = model.objective.lin_x[vid]
    det.obj_const = model.objective.constant

    for con in model.constraints:
        if not con.uncertain:
            coefs = {var_name(vid): c for vid, c in sorted(con.expr.lin_x.items())}
            det.rows.append(LinRow(con.label, coefs, con.sense,
                                   con.rhs - con.expr.constant))
            continue
        d, _ = _split_groups(model, con.expr)
        kinds = {_group_geometry(model.groups[gi])[0] for gi in d}
        if "unsupported" in kinds:
            bad = next(gi for gi in sorted(d)
                       if _group_geometry(model.groups[gi])[0] == "unsupported")
            raise NoApplicableReformulation(
                f"constraint {con.label!r}: group {model.groups[bad].name!r} "
                f"has no closed-form counterpart ({_group_geometry(model.groups[bad])[1]})"
            )
        if kinds == {"poly"}:
            columns, rows = reformulate_polyhedral(model, con)
            for c in columns:
                colprov[c.name] = con.label
            for r in rows:
                rowprov[r.label] = con.label
            det.columns.extend(columns)
            det.rows.extend(rows)
        elif kinds == {"ellip"} and len(d) == 1:
            cr = reformulate_ellipsoidal(model, con)
            rowprov[cr.label] = con.label
            det.conic_rows.append(cr)
        else:
            raise NoApplicableReformulation(
                f"constraint {con.label!r} mixes set geometries "
                "(a row may touch several polyhedral groups, or exactly one "
                "ellipsoidal group, but not both kinds at once)"
            )
    return det


__all__ = [
    "Column",
    "ConicRow",
    "DeterministicModel",
    "LdrCoefficients",
    "LinRow",
    "apply_ldr",
    "build_counterpart",
    "clone_model",
    "lift_objective",
    "nominal_substitute",
    "reformulate_ellipsoidal",
    "reformulate_polyhedral",
    "xi_profile",
]
