"""Worst-case solvers and the feasibility checker.

Three routes to a robust solution:

* :func:`solve_reformulation` -- exact counterpart via multiplier blocks
  for polyhedral groups; ellipsoidal rows are handled by an outer loop of
  supporting hyperplanes on their closed-form worst case.
* :func:`solve_cutting_plane` -- scenario generation: solve a master over
  the scenarios collected so far, find each row's worst parameter point by
  a support-function call, add it, repeat.
* :func:`solve_nominal` -- parameters pinned at their nominal values, the
  deterministic baseline.

All three share the same preparation (epigraph lift of an
uncertainty-affected objective, then decision-rule substitution) and the
same result shape.  The reported ``objective`` is always the certified
worst case of the returned decisions, evaluated through the uncertainty
sets' support functions, not the master's own optimum; the master value
stays available in ``stats``.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

from .base import INF, ObjSense, Sense
from .errors import (
    MissingAssignment,
    SeparationUnavailable,
    UnknownUncParam,
)
from .kernel import LpOptions, LpSolution, LpStatus, solve_milp
from .kernel import backend as _kernel_backend
from .model import Constraint, Expr, Model, substitute_rules
from .transform import (
    Column,
    DeterministicModel,
    LdrCoefficients,
    apply_ldr,
    build_counterpart,
    instantiated_row,
    lift_objective,
    nominal_substitute,
    _param_index,
)

_SCENARIO_SET_TOL = 1e-8   # appended scenarios must lie in their sets
_SCENARIO_DEDUP_TOL = 1e-11  # treat closer scenario pairs as the same point
_DIRECTION_DEDUP_TOL = 1e-12


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITER_LIMIT = "iter_limit"


_FROM_LP = {
    LpStatus.OPTIMAL: SolveStatus.OPTIMAL,
    LpStatus.INFEASIBLE: SolveStatus.INFEASIBLE,
    LpStatus.UNBOUNDED: SolveStatus.UNBOUNDED,
    LpStatus.ITER_LIMIT: SolveStatus.ITER_LIMIT,
}


@dataclass
class SolverOptions:
    """Knobs shared by the robust solvers.

    ``cut_tol`` is the scenario-violation threshold of the cutting-plane
    loop, ``conic_tol`` the same for supporting-hyperplane rounds on
    ellipsoidal rows.  ``freeze_ldr`` pins every decision-rule slope to
    zero, recovering the static policy on the same column layout.
    ``lp_options`` overrides the kernel's own tolerances; ``mip_gap`` and
    ``node_limit`` are copied into it either way.
    """

    cut_tol: float = 1e-6
    conic_tol: float = 1e-6
    max_iter: int = 200
    mip_gap: float = 1e-6
    node_limit: int = 100_000
    freeze_ldr: bool = False
    lp_options: LpOptions | None = None

    def kernel_options(self) -> LpOptions:
        base = self.lp_options if self.lp_options is not None else LpOptions()
        return replace(base, mip_gap=self.mip_gap, node_limit=self.node_limit)


@dataclass
class SolveStats:
    solver: str
    backend: str
    iterations: int = 0
    cuts_added: int = 0
    master_solves: int = 0
    separation_solves: int = 0
    master_objective: float | None = None
    master_objective_trace: list[float] = field(default_factory=list)
    pivots: int = 0
    nodes: int = 0
    transform_time: float = 0.0
    solve_time: float = 0.0
    limit: str | None = None


@dataclass
class RowCheck:
    """Worst-case verdict for one constraint at fixed decisions.

    ``violation`` is signed: how far the worst parameter point pushes the
    row past its bound, with anything <= 0 meaning the row holds for every
    point of the set.  ``xi`` is a witness assignment (by parameter label)
    achieving it; empty for rows without uncertainty.
    """

    label: str
    violation: float
    xi: dict[str, float]
    ok: bool


@dataclass
class FeasibilityReport:
    ok: bool
    max_violation: float
    rows: dict[str, RowCheck]


@dataclass
class SolveResult:
    status: SolveStatus
    objective: float | None
    x: dict[str, float]
    ldr: dict[str, dict]
    worst_case: dict[str, RowCheck]
    max_violation: float | None
    stats: SolveStats


# ---------------------------------------------------------------------------
# numeric worst-case machinery (shared by solvers and the public checker)


def _expr_profile(model: Model, expr: Expr, xvals: Mapping[int, float],
                  rules: Mapping[int, tuple[float, Mapping[int, float]]]):
    """Collapse an expression at fixed decisions to ``const + sum a_g . xi_g``.

    ``rules`` supplies numeric decision rules ``aid -> (const, {uid: slope})``
    for any adjustable terms.  Returns ``(const, {group_index: vec})``.
    Iteration is in sorted id order so the floats are reproducible.
    """
    where = _param_index(model)
    const = expr.constant
    prof: dict[int, np.ndarray] = {}

    def bump(uid: int, coef: float) -> None:
        gi, off = where[uid]
        vec = prof.setdefault(gi, np.zeros(model.groups[gi].size))
        vec[off] += coef

    for vid in sorted(expr.lin_x):
        const += expr.lin_x[vid] * xvals[int(vid)]
    for uid in sorted(expr.lin_xi):
        bump(int(uid), expr.lin_xi[uid])
    for vid, uid in sorted(expr.bilin):
        bump(int(uid), expr.bilin[(vid, uid)] * xvals[int(vid)])
    for aid in sorted(expr.lin_y):
        coef = expr.lin_y[aid]
        if int(aid) not in rules:
            raise MissingAssignment(f"no decision rule for adjustable id {int(aid)}")
        y0, slopes = rules[int(aid)]
        const += coef * y0
        for uid in sorted(slopes):
            bump(int(uid), coef * slopes[uid])
    return const, prof


def _sup_profile(model: Model, const: float, prof: Mapping[int, np.ndarray]):
    """Maximum of ``const + sum a_g . xi_g`` over the sets, with a witness.

    The witness covers only the referenced groups, keyed by parameter id.
    """
    total = const
    wit: dict[int, float] = {}
    for gi in sorted(prof):
        g = model.groups[gi]
        val, arg = g.uncset.support(np.asarray(prof[gi], dtype=float))
        total += float(val)
        for off, uid in enumerate(g.ids):
            wit[int(uid)] = float(arg[off])
    return total, wit


def _profile_violation(model: Model, const: float, prof, sense: Sense, rhs: float):
    """Signed worst-case violation of ``const + sum a_g . xi_g  <sense>  rhs``."""
    if sense is Sense.LE:
        worst, wit = _sup_profile(model, const, prof)
        return worst - rhs, wit
    neg = {gi: -vec for gi, vec in prof.items()}
    if sense is Sense.GE:
        worst, wit = _sup_profile(model, -const, neg)
        return worst + rhs, wit
    hi, wit_hi = _sup_profile(model, const, prof)
    lo, wit_lo = _sup_profile(model, -const, neg)
    if hi - rhs >= lo + rhs:
        return hi - rhs, wit_hi
    return lo + rhs, wit_lo


def _full_witness(model: Model, wit: Mapping[int, float]) -> dict[int, float]:
    out = model.nominal_point()
    out.update(wit)
    return out


def _row_violation(model: Model, con: Constraint, xvals, rules):
    const, prof = _expr_profile(model, con.expr, xvals, rules)
    violation, wit = _profile_violation(model, const, prof, con.sense, con.rhs)
    return violation, wit, bool(prof)


def _labelled(model: Model, wit: Mapping[int, float]) -> dict[str, float]:
    labels = model.param_labels()
    full = _full_witness(model, wit)
    return {labels[uid]: full[uid] for uid in sorted(full)}


def _report_rows(model: Model, xvals, rules, extra, tol: float) -> dict[str, RowCheck]:
    """RowCheck per constraint, plus the synthesized rows in ``extra``.

    ``extra`` holds ``(label, const, prof, sense, rhs)`` tuples for rows
    that exist only implicitly, like decision-rule bound enforcement.
    """
    rows: dict[str, RowCheck] = {}
    for con in model.constraints:
        violation, wit, uncertain = _row_violation(model, con, xvals, rules)
        xi = _labelled(model, wit) if uncertain else {}
        rows[con.label] = RowCheck(con.label, violation, xi, violation <= tol)
    for label, const, prof, sense, rhs in extra:
        violation, wit = _profile_violation(model, const, prof, sense, rhs)
        xi = _labelled(model, wit) if prof else {}
        rows[label] = RowCheck(label, violation, xi, violation <= tol)
    return rows


def _bound_rows(model: Model, rules) -> list:
    """Implicit rows keeping each adjustable's rule inside its bounds."""
    where = _param_index(model)
    extra = []
    for a in model.adjustables:
        y0, slopes = rules[int(a.id)]
        prof: dict[int, np.ndarray] = {}
        for uid in sorted(slopes):
            gi, off = where[int(uid)]
            prof.setdefault(gi, np.zeros(model.groups[gi].size))[off] += slopes[uid]
        if a.lower > -INF:
            extra.append((f"b.{a.name}.lo", y0, prof, Sense.GE, a.lower))
        if a.upper < INF:
            extra.append((f"b.{a.name}.up", y0, prof, Sense.LE, a.upper))
    return extra


def check_robust_feasibility(model: Model, x: Mapping[str, float],
                             tol: float = 1e-6, *,
                             ldr: Mapping[str, Mapping] | None = None) -> FeasibilityReport:
    """Does a fixed policy satisfy every constraint for every parameter point?

    ``x`` maps variable names to values; adjustables may appear either in
    ``ldr`` as ``{"const": c, "slopes": {param_label: coef}}`` rules or,
    when static, in ``x`` directly.  Each constraint is checked at its own
    worst parameter point (a support-function call per referenced group),
    and adjustable bounds are checked as implicit rows labelled
    ``b.<name>.lo`` / ``b.<name>.up``.  Variable bounds are not checked.
    """
    model.validate()
    ldr = ldr or {}
    xvals: dict[int, float] = {}
    for v in model.vars:
        if v.name not in x:
            raise MissingAssignment(f"no value supplied for variable {v.name!r}")
        xvals[int(v.id)] = float(x[v.name])
    to_uid = {lbl: uid for uid, lbl in model.param_labels().items()}
    rules: dict[int, tuple[float, dict[int, float]]] = {}
    for a in model.adjustables:
        if a.name in ldr:
            entry = ldr[a.name]
            slopes: dict[int, float] = {}
            for lbl, coef in dict(entry.get("slopes", {})).items():
                if lbl not in to_uid:
                    raise UnknownUncParam(
                        f"rule for {a.name!r} references unknown parameter {lbl!r}"
                    )
                slopes[to_uid[lbl]] = float(coef)
            rules[int(a.id)] = (float(entry.get("const", 0.0)), slopes)
        elif a.name in x:
            rules[int(a.id)] = (float(x[a.name]), {})
        else:
            raise MissingAssignment(f"no value or rule supplied for adjustable {a.name!r}")
    rows = _report_rows(model, xvals, rules, _bound_rows(model, rules), tol)
    max_violation = max((r.violation for r in rows.values()), default=0.0)
    return FeasibilityReport(all(r.ok for r in rows.values()), max_violation, rows)


# ---------------------------------------------------------------------------
# scenario generation


@dataclass
class CutGenerator:
    """Scenario pool for one uncertain row of a prepared model.

    Starts from the nominal point; :meth:`separate` finds the row's worst
    parameter assignment at fixed decisions, and :meth:`add_scenario`
    grows the pool while refusing points outside the sets and deduplicating
    near-identical ones (the master gains nothing from a repeat row).
    """

    model: Model
    index: int
    scenarios: list[dict[int, float]] = field(default_factory=list)

    def __post_init__(self):
        if not self.scenarios:
            self.scenarios.append(self.model.nominal_point())

    @property
    def constraint(self) -> Constraint:
        return self.model.constraints[self.index]

    def separate(self, xvals: Mapping[int, float]):
        """Worst-case violation of the row at ``xvals`` plus a witness."""
        violation, wit, _ = _row_violation(self.model, self.constraint, xvals, {})
        return violation, _full_witness(self.model, wit)

    def add_scenario(self, xi: Mapping[int, float], tol: float = _SCENARIO_SET_TOL) -> bool:
        point = dict(xi)
        for g in self.model.groups:
            coords = [point[int(uid)] for uid in g.ids]
            if not g.uncset.contains(coords, tol=tol):
                raise SeparationUnavailable(
                    f"separation witness for {self.constraint.label!r} "
                    f"left the set of group {g.name!r}"
                )
        for s in self.scenarios:
            if all(abs(s[k] - point[k]) <= _SCENARIO_DEDUP_TOL for k in s):
                return False
        self.scenarios.append(point)
        return True


# ---------------------------------------------------------------------------
# shared solver plumbing


def _prepare(model: Model, opt: SolverOptions):
    model.validate()
    lifted, _ = lift_objective(model)
    prepared, plan = apply_ldr(lifted, freeze_slopes=opt.freeze_ldr)
    return prepared, plan


def _values_by_vid(prepared: Model, lp_names: list[str], xvec: np.ndarray) -> dict[int, float]:
    byname = {name: float(v) for name, v in zip(lp_names, xvec)}
    return {int(v.id): byname[v.name] for v in prepared.vars}


def _extract_policy(model: Model, plan: LdrCoefficients, xvals: Mapping[int, float]):
    """Split a prepared-model solution into originals, statics, and rules."""
    x = {v.name: float(xvals[int(v.id)]) for v in model.vars}
    ldr: dict[str, dict] = {}
    labels = model.param_labels()
    for a in model.adjustables:
        v0, slopes = plan[a.id]
        if not a.deps:
            x[a.name] = float(xvals[v0])
            continue
        ldr[a.name] = {
            "const": float(xvals[v0]),
            "slopes": {labels[uid]: float(xvals[slopes[uid]]) for uid in sorted(slopes)},
        }
    return x, ldr


def _numeric_rules(model: Model, plan: LdrCoefficients, xvals) -> dict:
    rules = {}
    for a in model.adjustables:
        v0, slopes = plan[a.id]
        rules[int(a.id)] = (
            float(xvals[v0]),
            {uid: float(xvals[svid]) for uid, svid in slopes.items()},
        )
    return rules


def _certified_objective(model: Model, prepared: Model, plan: LdrCoefficients,
                         xvals) -> float:
    """Worst-case value of the original objective under the found policy."""
    obj = substitute_rules(model.objective, plan)
    const, prof = _expr_profile(prepared, obj, xvals, {})
    if model.sense is ObjSense.MIN:
        worst, _ = _sup_profile(prepared, const, prof)
        return worst
    neg = {gi: -vec for gi, vec in prof.items()}
    low, _ = _sup_profile(prepared, -const, neg)
    return -low


def _report_tol(opt: SolverOptions) -> float:
    kopt = opt.kernel_options()
    return max(10.0 * opt.cut_tol, 10.0 * opt.conic_tol, kopt.feas_tol)


def _finish(model: Model, prepared: Model, plan: LdrCoefficients,
            status: SolveStatus, xvals, stats: SolveStats,
            opt: SolverOptions) -> SolveResult:
    if xvals is None:
        return SolveResult(status, None, {}, {}, {}, None, stats)
    x, ldr = _extract_policy(model, plan, xvals)
    objective = _certified_objective(model, prepared, plan, xvals)
    rows = _report_rows(prepared, xvals, {}, [], _report_tol(opt))
    max_violation = max((r.violation for r in rows.values()), default=0.0)
    return SolveResult(status, objective, x, ldr, rows, max_violation, stats)


def _master_from(prepared: Model, row_builder: Callable) -> DeterministicModel:
    """Deterministic master over the prepared model's columns.

    ``row_builder(con, index)`` yields the LinRows standing in for each
    constraint.  The objective must already be certain.
    """
    det = DeterministicModel(maximize=prepared.sense is ObjSense.MAX,
                             provenance={"kind": "master", "rows": {}, "columns": {}})
    for v in prepared.vars:
        det.columns.append(Column(v.name, v.lower, v.upper, v.domain))
    for ci, con in enumerate(prepared.constraints):
        for row in row_builder(con, ci):
            det.rows.append(row)
            det.provenance["rows"][row.label] = con.label
    obj = prepared.objective
    det.obj_const = obj.constant
    for vid in sorted(obj.lin_x):
        det.obj[prepared.vars[int(vid)].name] = obj.lin_x[vid]
    return det


def _run_kernel(det: DeterministicModel, kopt: LpOptions,
                stats: SolveStats, extra_rows=None) -> LpSolution:
    lp, int_cols = det.to_standard_lp(extra_rows=extra_rows)
    sol = solve_milp(lp, int_cols, kopt)
    stats.master_solves += 1
    stats.pivots += sol.iterations
    stats.nodes += sol.nodes
    if sol.status is LpStatus.OPTIMAL:
        stats.master_objective = det.objective_value(sol.x)
        stats.master_objective_trace.append(stats.master_objective)
    return sol


# ---------------------------------------------------------------------------
# solvers


def solve_reformulation(model: Model, options: SolverOptions | None = None) -> SolveResult:
    """Robust optimum through the deterministic counterpart.

    Polyhedral rows are exact after one kernel solve.  Each ellipsoidal
    row contributes supporting-hyperplane cuts: starting from its nominal
    cut, the loop resolves the master and adds the touching hyperplane at
    the incumbent's own coefficient vector until the exact worst case is
    within ``conic_tol``.
    """
    opt = options or SolverOptions()
    stats = SolveStats(solver="reformulate", backend=_kernel_backend.name())
    t0 = time.perf_counter()
    prepared, plan = _prepare(model, opt)
    det = build_counterpart(prepared)
    stats.transform_time = time.perf_counter() - t0
    kopt = opt.kernel_options()
    t1 = time.perf_counter()

    try:
        if not det.conic_rows:
            stats.iterations = 1
            sol = _run_kernel(det, kopt, stats)
            status = _FROM_LP[sol.status]
            if sol.status is LpStatus.ITER_LIMIT:
                stats.limit = sol.limit or "pivots"
            xvals = (_values_by_vid(prepared, det.to_standard_lp()[0].names, sol.x)
                     if sol.x is not None else None)
            return _finish(model, prepared, plan, status, xvals, stats, opt)

        cuts = []
        dirs: dict[int, list[np.ndarray]] = {}
        for ri, cr in enumerate(det.conic_rows):
            u0 = np.zeros(cr.mean.shape[0])
            cuts.append(cr.cut(u0, f"{cr.label}.oa[0]"))
            dirs[ri] = [u0]
        names = det.to_standard_lp()[0].names
        while True:
            stats.iterations += 1
            sol = _run_kernel(det, kopt, stats, extra_rows=cuts)
            if sol.status is not LpStatus.OPTIMAL:
                status = _FROM_LP[sol.status]
                if sol.status is LpStatus.ITER_LIMIT:
                    stats.limit = sol.limit or "pivots"
                xvals = (_values_by_vid(prepared, names, sol.x)
                         if sol.x is not None else None)
                return _finish(model, prepared, plan, status, xvals, stats, opt)
            byname = {n: float(v) for n, v in zip(names, sol.x)}
            xvals = _values_by_vid(prepared, names, sol.x)

            violated = []
            for ri, cr in enumerate(det.conic_rows):
                stats.separation_solves += 1
                gap = cr.evaluate(byname)
                if gap > opt.conic_tol:
                    violated.append((ri, gap))
            if not violated:
                return _finish(model, prepared, plan, SolveStatus.OPTIMAL,
                               xvals, stats, opt)

            worst = max(gap for _, gap in violated)
            added = False
            for ri, _ in violated:
                cr = det.conic_rows[ri]
                a = cr.coef_vector(byname)
                z = cr.chol.T @ a
                nz = float(np.linalg.norm(z))
                u = z / nz if nz > 0.0 else np.zeros_like(z)
                if any(float(np.max(np.abs(u - prev))) <= _DIRECTION_DEDUP_TOL
                       for prev in dirs[ri]):
                    continue
                dirs[ri].append(u)
                cuts.append(cr.cut(u, f"{cr.label}.oa[{len(dirs[ri]) - 1}]"))
                stats.cuts_added += 1
                added = True
            if not added:
                # every violated row already carries this exact hyperplane;
                # the master cannot move, so the residual is kernel noise
                if worst <= 10.0 * opt.conic_tol:
                    return _finish(model, prepared, plan, SolveStatus.OPTIMAL,
                                   xvals, stats, opt)
                stats.limit = "stalled"
                res = _finish(model, prepared, plan, SolveStatus.ITER_LIMIT,
                              xvals, stats, opt)
                return res
            if stats.iterations >= opt.max_iter:
                stats.limit = "iterations"
                return _finish(model, prepared, plan, SolveStatus.ITER_LIMIT,
                               xvals, stats, opt)
    finally:
        stats.solve_time = time.perf_counter() - t1


def solve_cutting_plane(model: Model, options: SolverOptions | None = None) -> SolveResult:
    """Robust optimum through scenario generation.

    The master holds every uncertain row instantiated at its collected
    scenarios (initially the nominal point) and is rebuilt from scratch
    each round.  After each master solve, every uncertain row is separated
    at the incumbent; each row violated beyond ``cut_tol`` contributes its
    worst parameter point as a new scenario.  The loop stops when nothing
    is violated, when no new scenario can be added (the incumbent's worst
    points are already in the pool), or at ``max_iter``.
    """
    opt = options or SolverOptions()
    stats = SolveStats(solver="cuts", backend=_kernel_backend.name())
    t0 = time.perf_counter()
    prepared, plan = _prepare(model, opt)
    gens = {ci: CutGenerator(prepared, ci)
            for ci, con in enumerate(prepared.constraints) if con.uncertain}
    stats.transform_time = time.perf_counter() - t0
    kopt = opt.kernel_options()
    t1 = time.perf_counter()
    var_name = lambda vid: prepared.vars[int(vid)].name

    def rows_for(con: Constraint, ci: int):
        if ci in gens:
            return [instantiated_row(con, sc, var_name, label=f"{con.label}@{k}")
                    for k, sc in enumerate(gens[ci].scenarios)]
        return [instantiated_row(con, {}, var_name)]

    try:
        while True:
            stats.iterations += 1
            det = _master_from(prepared, rows_for)
            sol = _run_kernel(det, kopt, stats)
            if sol.status is not LpStatus.OPTIMAL:
                status = _FROM_LP[sol.status]
                if sol.status is LpStatus.ITER_LIMIT:
                    stats.limit = sol.limit or "pivots"
                names = det.to_standard_lp()[0].names
                xvals = (_values_by_vid(prepared, names, sol.x)
                         if sol.x is not None else None)
                return _finish(model, prepared, plan, status, xvals, stats, opt)
            names = det.to_standard_lp()[0].names
            xvals = _values_by_vid(prepared, names, sol.x)

            violated = []
            for ci in sorted(gens):
                stats.separation_solves += 1
                violation, witness = gens[ci].separate(xvals)
                if violation > opt.cut_tol:
                    violated.append((ci, violation, witness))
            if not violated:
                return _finish(model, prepared, plan, SolveStatus.OPTIMAL,
                               xvals, stats, opt)

            worst = max(v for _, v, _ in violated)
            added = False
            for ci, _, witness in violated:
                if gens[ci].add_scenario(witness):
                    stats.cuts_added += 1
                    added = True
            if not added:
                # the worst points are already scenario rows, so the master
                # cannot improve; what remains is kernel-level noise
                if worst <= 10.0 * opt.cut_tol:
                    return _finish(model, prepared, plan, SolveStatus.OPTIMAL,
                                   xvals, stats, opt)
                stats.limit = "stalled"
                return _finish(model, prepared, plan, SolveStatus.ITER_LIMIT,
                               xvals, stats, opt)
            if stats.iterations >= opt.max_iter:
                stats.limit = "iterations"
                return _finish(model, prepared, plan, SolveStatus.ITER_LIMIT,
                               xvals, stats, opt)
    finally:
        stats.solve_time = time.perf_counter() - t1


def solve_nominal(model: Model, options: SolverOptions | None = None) -> SolveResult:
    """Deterministic baseline with parameters at their nominal values.

    Adjustables become plain columns (one fixed scenario leaves a decision
    rule nothing to react to).  The reported objective is the master's own
    optimum; ``worst_case`` still evaluates the found point against the
    full sets, which is how far nominal planning can drift.
    """
    opt = options or SolverOptions()
    stats = SolveStats(solver="nominal", backend=_kernel_backend.name())
    t0 = time.perf_counter()
    model.validate()
    det = nominal_substitute(model)
    stats.transform_time = time.perf_counter() - t0
    kopt = opt.kernel_options()
    t1 = time.perf_counter()
    stats.iterations = 1
    sol = _run_kernel(det, kopt, stats)
    stats.solve_time = time.perf_counter() - t1
    status = _FROM_LP[sol.status]
    if sol.status is LpStatus.ITER_LIMIT:
        stats.limit = sol.limit or "pivots"
    if sol.x is None:
        return SolveResult(status, None, {}, {}, {}, None, stats)
    names = det.to_standard_lp()[0].names
    byname = {n: float(v) for n, v in zip(names, sol.x)}
    x = {v.name: byname[v.name] for v in model.vars}
    for a in model.adjustables:
        x[a.name] = byname[a.name]
    objective = det.objective_value(sol.x)
    xvals = {int(v.id): byname[v.name] for v in model.vars}
    rules = {int(a.id): (byname[a.name], {}) for a in model.adjustables}
    try:
        rows = _report_rows(model, xvals, rules, _bound_rows(model, rules),
                            _report_tol(opt))
        max_violation = max((r.violation for r in rows.values()), default=0.0)
    except SeparationUnavailable:
        # sets without a support oracle still admit a nominal solve
        rows, max_violation = {}, None
    return SolveResult(status, objective, x, {}, rows, max_violation, stats)


_SOLVERS = {
    "reformulate": solve_reformulation,
    "cuts": solve_cutting_plane,
    "nominal": solve_nominal,
}


def solve(model: Model, solver: str = "reformulate",
          options: SolverOptions | None = None) -> SolveResult:
    try:
        fn = _SOLVERS[solver]
    except KeyError:
        raise ValueError(
            f"unknown solver {solver!r}; expected one of {sorted(_SOLVERS)}"
        ) from None
    return fn(model, options)


__all__ = [
    "CutGenerator",
    "FeasibilityReport",
    "RowCheck",
    "SolveResult",
    "SolveStats",
    "SolveStatus",
    "SolverOptions",
    "check_robust_feasibility",
    "solve",
    "solve_cutting_plane",
    "solve_nominal",
    "solve_reformulation",
]
