"""Bounded-variable revised simplex with an explicit dense basis inverse.

Design notes
------------
* Rows enter as ``<=``, ``>=`` or ``==``; each gets one slack column whose
  bounds encode the sense, so the working form is ``A x = b`` with
  ``l <= x <= u`` throughout.
* Phase 1 starts from an all-artificial basis (one signed artificial per
  row) and minimizes the sum of artificials; leftover basic artificials are
  driven out by degenerate pivots, redundant rows keep theirs pinned at
  zero.
* Pricing is Dantzig (most violating reduced cost).  After a run of
  degenerate iterations the driver switches to Bland's rule, which cannot
  cycle, and stays there.
* The dense basis inverse is maintained by product-form updates and rebuilt
  from scratch every ``refactor_every`` pivots.
* There is no randomness and every tie-break is by lowest index, so a given
  input and option set replays the exact same pivot sequence.

The dense inner-loop primitives (pricing, ftran/btran, inverse update,
ratio test) are delegated to the backend selected in
:mod:`robustkit.kernel.backend`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import KernelError
from . import backend

ROW_LE, ROW_GE, ROW_EQ = 0, 1, 2

_BASIC, _AT_LOWER, _AT_UPPER, _FREE, _FIXED = 0, 1, 2, 3, 4


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITER_LIMIT = "iter_limit"


@dataclass
class LpOptions:
    """Kernel tolerances and limits."""

    max_iters: int = 50_000
    feas_tol: float = 1e-7
    opt_tol: float = 1e-7
    piv_tol: float = 1e-9
    refactor_every: int = 50
    stall_limit: int = 30
    track_pivots: bool = False
    # branch-and-bound knobs (used by solve_milp)
    mip_gap: float = 1e-6
    int_tol: float = 1e-6
    node_limit: int = 100_000


@dataclass
class StandardLp:
    """Dense LP container.

    ``A`` is an ``m x n`` coefficient matrix, ``senses`` holds one of
    ``ROW_LE``/``ROW_GE``/``ROW_EQ`` per row, and variable bounds may be
    ``+-inf``.  Right-hand sides must be finite.
    """

    obj: np.ndarray
    A: np.ndarray
    senses: np.ndarray
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    maximize: bool = False
    names: list[str] | None = None

    def __post_init__(self):
        self.obj = np.ascontiguousarray(self.obj, dtype=float)
        self.A = np.ascontiguousarray(self.A, dtype=float).reshape(-1, self.obj.shape[0])
        self.senses = np.asarray(self.senses, dtype=np.int8).reshape(-1)
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        self.lower = np.asarray(self.lower, dtype=float).reshape(-1)
        self.upper = np.asarray(self.upper, dtype=float).reshape(-1)
        n = self.obj.shape[0]
        m = self.A.shape[0]
        if self.senses.shape[0] != m or self.rhs.shape[0] != m:
            raise ValueError("row arrays disagree on the number of rows")
        if self.lower.shape[0] != n or self.upper.shape[0] != n:
            raise ValueError("bound arrays disagree on the number of columns")
        if not np.all(np.isfinite(self.rhs)):
            raise ValueError("right-hand sides must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def ncols(self) -> int:
        return self.obj.shape[0]

    @property
    def nrows(self) -> int:
        return self.A.shape[0]


@dataclass
class LpSolution:
    """Result of a kernel solve.

    ``duals`` and ``reduced_costs`` follow the convention that, in the
    model's own sense, ``reduced_costs == obj - A.T @ duals`` at optimality;
    both are None for non-optimal statuses and for branch-and-bound results.
    """

    status: LpStatus
    objective: float | None
    x: np.ndarray | None
    duals: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    iterations: int = 0
    nodes: int = 0
    limit: str | None = None
    pivots: list[tuple[int, int]] | None = None


@dataclass
class VerifyReport:
    """Primal/dual certificate check produced by :func:`verify_solution`."""

    max_primal_violation: float
    max_dual_violation: float
    complementary_slackness: float
    objective_mismatch: float
    dual_objective: float

    def ok(self, tol: float = 1e-6) -> bool:
        return (
            self.max_primal_violation <= tol
            and self.max_dual_violation <= tol
            and self.complementary_slackness <= tol
            and self.objective_mismatch <= tol
        )


class _Simplex:
    def __init__(self, lp: StandardLp, options: LpOptions):
        self.lp = lp
        self.opt = options
        self.ops = backend.active()
        n, m = lp.ncols, lp.nrows
        self.n, self.m = n, m
        self.nart0 = n + m
        ntot = n + m + m
        self.ntot = ntot

        AT = np.zeros((ntot, m))
        if m:
            AT[:n, :] = lp.A.T
        lower = np.empty(ntot)
        upper = np.empty(ntot)
        lower[:n] = lp.lower
        upper[:n] = lp.upper
        for i, s in enumerate(lp.senses):
            AT[n + i, i] = 1.0
            if s == ROW_LE:
                lower[n + i], upper[n + i] = 0.0, math.inf
            elif s == ROW_GE:
                lower[n + i], upper[n + i] = -math.inf, 0.0
            else:
                lower[n + i], upper[n + i] = 0.0, 0.0
        lower[n + m:] = 0.0
        upper[n + m:] = math.inf
        self.AT = AT
        self.lower = lower
        self.upper = upper
        self.b = lp.rhs.copy()

        self.cmin = np.zeros(ntot)
        self.cmin[:n] = -lp.obj if lp.maximize else lp.obj

        self.status = np.empty(ntot, dtype=np.int8)
        self.x = np.zeros(ntot)
        for j in range(n + m):
            lo, up = lower[j], upper[j]
            if lo == up:
                self.status[j], self.x[j] = _FIXED, lo
            elif math.isfinite(lo):
                self.status[j], self.x[j] = _AT_LOWER, lo
            elif math.isfinite(up):
                self.status[j], self.x[j] = _AT_UPPER, up
            else:
                self.status[j], self.x[j] = _FREE, 0.0

        self.basis = np.arange(n + m, ntot, dtype=np.intp)
        self.Binv = np.zeros((m, m))
        self.iters = 0
        self.pivot_count = 0
        self.since_refactor = 0
        self.bland = False
        self.trace: list[tuple[int, int]] | None = [] if options.track_pivots else None

        self._ybuf = np.empty(m)
        self._dbuf = np.empty(ntot)
        self._wbuf = np.empty(m)

    # -- basis maintenance -------------------------------------------------

    def _refactor(self):
        m = self.m
        if m == 0:
            return
        B = self.AT[self.basis].T.copy()
        try:
            Binv = np.linalg.inv(B)
            # inv() raises only on exact singularity; a near-singular basis
            # inverts "successfully" into garbage, so check the growth too
            growth = float(np.abs(Binv).max(initial=0.0)) * \
                float(np.abs(B).max(initial=0.0))
            if not np.isfinite(Binv).all() or growth > 1e13:
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            self._repair_basis()
            B = self.AT[self.basis].T.copy()
            try:
                Binv = np.linalg.inv(B)
            except np.linalg.LinAlgError as exc:
                raise KernelError("singular basis during refactorization") from exc
        self.Binv = np.ascontiguousarray(Binv)
        nb = np.flatnonzero(self.status != _BASIC)
        resid = self.b - self.AT[nb].T @ self.x[nb]
        self.x[self.basis] = self.Binv @ resid
        self.since_refactor = 0

    def _repair_basis(self):
        """Swap linearly dependent basic columns for artificial unit columns.

        Accumulated update error can pivot a dependent column into the
        basis; once the explicit inverse notices, the only sound move is
        to rebuild a nonsingular basis and keep going.  Demoted bounded
        columns snap to their nearest bound, demoted free columns keep
        their value, so the incumbent point barely moves.
        """
        n, m = self.n, self.m
        cols = self.AT[self.basis]          # m rows, one per basic column
        q_dirs = np.zeros((0, m))
        dependent = []
        for p in range(m):
            col = cols[p].astype(float)
            r = col - q_dirs.T @ (q_dirs @ col)
            r -= q_dirs.T @ (q_dirs @ r)    # second MGS pass for accuracy
            nr = float(np.linalg.norm(r))
            if nr > 1e-9 * max(1.0, float(np.linalg.norm(col))):
                q_dirs = np.vstack([q_dirs, r / nr])
            else:
                dependent.append(p)
        for p in dependent:
            old = int(self.basis[p])
            lo, up = self.lower[old], self.upper[old]
            if lo == up:
                self.status[old], self.x[old] = _FIXED, lo
            elif math.isinf(lo) and math.isinf(up):
                self.status[old] = _FREE    # keeps its current value
            elif math.isinf(up) or (not math.isinf(lo)
                                    and self.x[old] - lo <= up - self.x[old]):
                self.status[old], self.x[old] = _AT_LOWER, lo
            else:
                self.status[old], self.x[old] = _AT_UPPER, up
            filled = False
            for i in range(m):
                art = n + m + i
                if self.status[art] == _BASIC:
                    continue
                e = np.zeros(m)
                e[i] = 1.0
                r = e - q_dirs.T @ (q_dirs @ e)
                if float(np.linalg.norm(r)) <= 1e-8:
                    continue
                if self.AT[art, i] == 0.0:
                    self.AT[art, i] = 1.0
                self.basis[p] = art
                self.status[art] = _BASIC
                q_dirs = np.vstack([q_dirs, r / float(np.linalg.norm(r))])
                filled = True
                break
            if not filled:
                raise KernelError("singular basis during refactorization")

    def _init_artificial_basis(self):
        n, m = self.n, self.m
        if m == 0:
            return
        nb = np.arange(n + m)
        resid = self.b - self.AT[nb].T @ self.x[nb]
        sigma = np.where(resid >= 0.0, 1.0, -1.0)
        for i in range(m):
            self.AT[n + m + i, i] = sigma[i]
            self.x[n + m + i] = abs(resid[i])
            self.status[n + m + i] = _BASIC
        self.Binv = np.ascontiguousarray(np.diag(sigma))

    def _drive_out_artificials(self):
        """Degenerate pivots replacing basic artificials with real columns."""
        n, m = self.n, self.m
        self._refactor()   # pivot choices below must not see phase-1 drift
        for p in range(m):
            if self.basis[p] < n + m:
                continue
            tab = self.AT[: n + m] @ self.Binv[p]
            eligible = np.abs(tab)
            eligible[(self.status[: n + m] == _BASIC)
                     | (self.status[: n + m] == _FIXED)] = 0.0
            entering = int(np.argmax(eligible))
            # the biggest eligible element keeps the new basis well formed
            if eligible[entering] <= 1e-9:
                continue  # redundant row: artificial stays basic at zero
            w = self.ops.ftran(self.Binv, self.AT[entering], self._wbuf)
            leaving = self.basis[p]
            self.status[entering] = _BASIC
            self.status[leaving] = _FIXED
            self.x[leaving] = 0.0
            self.ops.update_inverse(self.Binv, np.asarray(w), p)
            self.basis[p] = entering
            self.pivot_count += 1
            self.since_refactor += 1
        # artificials can never re-enter
        self.lower[n + m:] = 0.0
        self.upper[n + m:] = 0.0
        art = np.arange(n + m, self.ntot)
        nonbasic_art = art[self.status[art] != _BASIC]
        self.status[nonbasic_art] = _FIXED
        self.x[nonbasic_art] = 0.0
        self._refactor()

    # -- pivoting ----------------------------------------------------------

    def _choose_entering(self, d: np.ndarray) -> int:
        viol = np.zeros(self.ntot)
        st = self.status
        low = st == _AT_LOWER
        up = st == _AT_UPPER
        fr = st == _FREE
        viol[low] = -d[low]
        viol[up] = d[up]
        viol[fr] = np.abs(d[fr])
        np.maximum(viol, 0.0, out=viol)
        if self.bland:
            hits = np.flatnonzero(viol > self.opt.opt_tol)
            return int(hits[0]) if hits.size else -1
        q = int(np.argmax(viol))
        return q if viol[q] > self.opt.opt_tol else -1

    def _bland_ratio(self, xB, lB, uB, w, dirsign, cap, piv_tol):
        eff = dirsign * w
        m = eff.shape[0]
        limits = np.full(m, np.inf)
        dec = eff > piv_tol
        inc = eff < -piv_tol
        limits[dec] = (xB[dec] - lB[dec]) / eff[dec]
        limits[inc] = (uB[inc] - xB[inc]) / (-eff[inc])
        np.maximum(limits, 0.0, out=limits)
        best = limits.min() if m else np.inf
        if cap <= best:
            return (cap, -1, 0)
        ties = np.flatnonzero(limits <= best)
        pos = int(ties[np.argmin(self.basis[ties])])
        kind = 1 if eff[pos] > 0.0 else 2
        return (float(best), pos, kind)

    def _iterate(self, c: np.ndarray, phase: int) -> LpStatus:
        ops = self.ops
        opt = self.opt
        last_obj = float(c @ self.x)
        stall = 0
        while True:
            if self.iters >= opt.max_iters:
                return LpStatus.ITER_LIMIT
            if self.since_refactor >= opt.refactor_every:
                self._refactor()
            y = ops.btran(self.Binv, np.ascontiguousarray(c[self.basis]), self._ybuf)
            d = ops.price(self.AT, np.asarray(y), c, self._dbuf)
            d = np.asarray(d)
            q = self._choose_entering(d)
            if q < 0:
                return LpStatus.OPTIMAL
            st = self.status[q]
            if st == _AT_LOWER or (st == _FREE and d[q] < 0.0):
                dirsign = 1.0
            else:
                dirsign = -1.0
            w = np.asarray(ops.ftran(self.Binv, self.AT[q], self._wbuf))
            cap = self.upper[q] - self.lower[q]
            xB = self.x[self.basis]
            lB = self.lower[self.basis]
            uB = self.upper[self.basis]
            # entries tiny relative to the column's largest are noise left
            # by the inverse, not blocking structure; never pivot on them
            piv_tol = max(opt.piv_tol, 1e-9 * float(np.abs(w).max(initial=0.0)))
            if self.bland:
                step, pos, kind = self._bland_ratio(xB, lB, uB, w, dirsign,
                                                    cap, piv_tol)
            else:
                step, pos, kind = ops.ratio_test(
                    xB, lB, uB, w, dirsign, cap, piv_tol
                )
            if not math.isfinite(step) and pos == -1:
                if self.since_refactor:
                    # an unblocked ray claimed off a stale inverse may be
                    # pure drift; re-price from a fresh factorization
                    self._refactor()
                    continue
                if phase == 1:
                    raise KernelError("phase-1 objective unbounded below")
                return LpStatus.UNBOUNDED
            if pos >= 0 and self.since_refactor:
                piv = abs(float(w[pos]))
                wmax = float(np.abs(w).max())
                if piv < max(100.0 * opt.piv_tol, 1e-6 * wmax):
                    # a pivot this small relative to its column is inverse
                    # drift, not structure; never divide by it
                    self._refactor()
                    continue
            if pos == -1:
                # the entering variable flips to its opposite bound
                self.x[self.basis] = xB - dirsign * step * w
                self.x[q] = self.upper[q] if dirsign > 0 else self.lower[q]
                self.status[q] = _AT_UPPER if dirsign > 0 else _AT_LOWER
            else:
                leaving = int(self.basis[pos])
                self.x[self.basis] = xB - dirsign * step * w
                self.x[q] = self.x[q] + dirsign * step
                if kind == 1:
                    self.x[leaving] = self.lower[leaving]
                    self.status[leaving] = _AT_LOWER
                else:
                    self.x[leaving] = self.upper[leaving]
                    self.status[leaving] = _AT_UPPER
                self.status[q] = _BASIC
                self.basis[pos] = q
                ops.update_inverse(self.Binv, w, pos)
                self.pivot_count += 1
                self.since_refactor += 1
                if self.trace is not None:
                    self.trace.append((q, leaving))
            self.iters += 1
            obj = float(c @ self.x)
            if obj >= last_obj - 1e-12 * (1.0 + abs(last_obj)):
                stall += 1
                if stall >= opt.stall_limit:
                    self.bland = True
            else:
                stall = 0
            last_obj = obj

    # -- driver ------------------------------------------------------------

    def solve(self) -> LpSolution:
        n, m = self.n, self.m
        if m:
            self._init_artificial_basis()
            c1 = np.zeros(self.ntot)
            c1[n + m:] = 1.0
            status = self._iterate(c1, phase=1)
            if status is LpStatus.ITER_LIMIT:
                return LpSolution(status, None, None, iterations=self.iters,
                                  limit="iterations")
            infeas = float(c1 @ self.x)
            if infeas > self.opt.feas_tol * max(1.0, float(np.abs(self.b).max())):
                return LpSolution(LpStatus.INFEASIBLE, None, None, iterations=self.iters)
            self._drive_out_artificials()
        status = self._iterate(self.cmin, phase=2)
        if status is not LpStatus.OPTIMAL:
            return LpSolution(status, None, None, iterations=self.iters, pivots=self.trace,
                              limit="iterations" if status is LpStatus.ITER_LIMIT else None)
        xs = self.x[:n].copy()
        user_obj = float(self.lp.obj @ xs)
        if m:
            y = np.asarray(
                self.ops.btran(
                    self.Binv, np.ascontiguousarray(self.cmin[self.basis]), self._ybuf
                )
            ).copy()
            d = np.asarray(self.ops.price(self.AT, y, self.cmin, self._dbuf)).copy()
        else:
            y = np.zeros(0)
            d = self.cmin.copy()
        if self.lp.maximize:
            y = -y
            d = -d
        return LpSolution(
            LpStatus.OPTIMAL,
            user_obj,
            xs,
            duals=y,
            reduced_costs=d[:n].copy(),
            iterations=self.iters,
            pivots=self.trace,
        )


def solve_lp(lp: StandardLp, options: LpOptions | None = None) -> LpSolution:
    """Solve a linear program; see :class:`LpSolution` for the contract."""
    return _Simplex(lp, options or LpOptions()).solve()


def verify_solution(lp: StandardLp, sol: LpSolution, tol: float = 1e-6) -> VerifyReport:
    """Independently recheck an optimal solution against its certificate.

    Recomputes row activities, bound feasibility, reduced-cost sign
    conditions, complementary slackness and the dual objective from scratch
    (no state shared with the solve).
    """
    if sol.status is not LpStatus.OPTIMAL or sol.x is None or sol.duals is None:
        raise ValueError("verify_solution expects an optimal solution with duals")
    x = np.asarray(sol.x, dtype=float)
    act = lp.A @ x if lp.nrows else np.zeros(0)
    primal = 0.0
    for i, s in enumerate(lp.senses):
        if s == ROW_LE:
            primal = max(primal, act[i] - lp.rhs[i])
        elif s == ROW_GE:
            primal = max(primal, lp.rhs[i] - act[i])
        else:
            primal = max(primal, abs(act[i] - lp.rhs[i]))
    finite_lo = np.isfinite(lp.lower)
    finite_up = np.isfinite(lp.upper)
    if finite_lo.any():
        primal = max(primal, float((lp.lower[finite_lo] - x[finite_lo]).max(initial=0.0)))
    if finite_up.any():
        primal = max(primal, float((x[finite_up] - lp.upper[finite_up]).max(initial=0.0)))

    sgn = -1.0 if lp.maximize else 1.0
    cmin = sgn * lp.obj
    ymin = sgn * np.asarray(sol.duals, dtype=float)
    dmin = cmin - (lp.A.T @ ymin if lp.nrows else 0.0)

    at_lo = finite_lo & (x <= lp.lower + tol)
    at_up = finite_up & (x >= lp.upper - tol)
    interior = ~(at_lo | at_up)
    dual = 0.0
    if at_lo.any():
        dual = max(dual, float(np.maximum(-dmin[at_lo & ~at_up], 0.0).max(initial=0.0)))
    if at_up.any():
        dual = max(dual, float(np.maximum(dmin[at_up & ~at_lo], 0.0).max(initial=0.0)))
    if interior.any():
        dual = max(dual, float(np.abs(dmin[interior]).max(initial=0.0)))

    cs = 0.0
    for i, s in enumerate(lp.senses):
        if s == ROW_LE:
            slack = lp.rhs[i] - act[i]
        elif s == ROW_GE:
            slack = act[i] - lp.rhs[i]
        else:
            continue
        cs = max(cs, abs(slack * ymin[i]))

    dual_obj_min = float(ymin @ lp.rhs) if lp.nrows else 0.0
    pos = np.maximum(dmin, 0.0)
    neg = np.minimum(dmin, 0.0)
    lo_term = np.where(finite_lo, lp.lower, 0.0) * np.where(finite_lo, pos, 0.0)
    up_term = np.where(finite_up, lp.upper, 0.0) * np.where(finite_up, neg, 0.0)
    dual_obj_min += float(lo_term.sum() + up_term.sum())

    return VerifyReport(
        max_primal_violation=float(primal),
        max_dual_violation=float(dual),
        complementary_slackness=float(cs),
        objective_mismatch=abs(float(lp.obj @ x) - float(sol.objective)),
        dual_objective=sgn * dual_obj_min,
    )


def make_lp(
    obj,
    rows,
    senses,
    rhs,
    lower,
    upper,
    maximize=False,
    names=None,
) -> StandardLp:
    """Convenience constructor accepting plain lists."""
    n = len(obj)
    A = np.asarray(rows, dtype=float).reshape(-1, n) if len(rows) else np.zeros((0, n))
    code = {"<=": ROW_LE, ">=": ROW_GE, "==": ROW_EQ}
    sarr = [code[s] if isinstance(s, str) else int(s) for s in senses]
    return StandardLp(
        obj=np.asarray(obj, dtype=float),
        A=A,
        senses=np.asarray(sarr, dtype=np.int8),
        rhs=np.asarray(rhs, dtype=float),
        lower=np.asarray(lower, dtype=float),
        upper=np.asarray(upper, dtype=float),
        maximize=maximize,
        names=names,
    )


__all__ = [
    "ROW_LE",
    "ROW_GE",
    "ROW_EQ",
    "LpStatus",
    "LpOptions",
    "StandardLp",
    "LpSolution",
    "VerifyReport",
    "solve_lp",
    "verify_solution",
    "make_lp",
    "replace",
]
