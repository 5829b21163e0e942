"""Independent brute-force oracles used to cross-check the library.

Everything here deliberately avoids the code paths under test: LPs are
solved by basic-solution enumeration, MILPs by exhaustive assignment,
worst cases by explicit vertex enumeration instead of duality.
"""
import itertools

import numpy as np

from robustkit.kernel.lp import LpOptions, make_lp, solve_lp
from robustkit.kernel.milp import solve_milp
from robustkit.model import VarDomain
from robustkit.sets import PolyhedralSet
from robustkit.transform import apply_ldr, lift_objective


def brute_lp(lp, tol=1e-7):
    """Enumerate basic solutions of { rows + finite bounds } for tiny LPs.

    Returns (feasible, best objective or None).
    """
    n = lp.ncols
    halves = []  # (a, b) meaning a @ x <= b
    eqs = []
    for i in range(lp.nrows):
        a, b = np.asarray(lp.A[i], dtype=float), float(lp.rhs[i])
        if lp.senses[i] == 0:
            halves.append((a, b))
        elif lp.senses[i] == 1:
            halves.append((-a, -b))
        else:
            eqs.append((a, b))
            halves.append((a, b))
            halves.append((-a, -b))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(lp.upper[j]):
            halves.append((e.copy(), float(lp.upper[j])))
        if np.isfinite(lp.lower[j]):
            halves.append((-e, -float(lp.lower[j])))
    best = None
    feasible = False
    for combo in itertools.combinations(range(len(halves)), n):
        A = np.array([halves[k][0] for k in combo])
        b = np.array([halves[k][1] for k in combo])
        try:
            v = np.linalg.solve(A, b)
        except np.linalg.LinAlgError:
            continue
        ok = all(a @ v <= bb + tol for a, bb in halves) and all(
            abs(a @ v - bb) <= tol for a, bb in eqs
        )
        if not ok:
            continue
        feasible = True
        val = float(lp.obj @ v)
        if best is None or (lp.maximize and val > best) or (not lp.maximize and val < best):
            best = val
    return feasible, best


def brute_milp(lp, int_cols, tol=1e-7):
    """Exhaustive integer assignment + basic-solution LP on the rest.

    Integer columns need finite bounds; they are substituted out so the
    inner enumeration only sees the continuous tail. Returns
    (feasible, best or None).
    """
    int_cols = sorted(int_cols)
    free = [j for j in range(lp.ncols) if j not in int_cols]
    ranges = []
    for j in int_cols:
        lo, hi = int(np.ceil(lp.lower[j] - 1e-9)), int(np.floor(lp.upper[j] + 1e-9))
        ranges.append(range(lo, hi + 1))
    A = np.asarray(lp.A, dtype=float).reshape(lp.nrows, lp.ncols)
    senses = [("<=", ">=", "==")[s] for s in lp.senses]
    best = None
    feasible = False
    for combo in itertools.product(*ranges):
        vals = np.array(combo, dtype=float)
        shift = A[:, int_cols] @ vals if lp.nrows else np.zeros(0)
        base = float(np.asarray(lp.obj)[int_cols] @ vals)
        if free:
            fixed = make_lp(np.asarray(lp.obj)[free], A[:, free], senses,
                            np.asarray(lp.rhs) - shift,
                            np.asarray(lp.lower)[free], np.asarray(lp.upper)[free],
                            maximize=lp.maximize)
            feas, val = brute_lp(fixed, tol=tol)
            if not feas:
                continue
            val += base
        else:
            resid = np.asarray(lp.rhs) - shift
            ok = all((resid[i] >= -tol) if s == 0 else
                     (resid[i] <= tol) if s == 1 else
                     (abs(resid[i]) <= tol)
                     for i, s in enumerate(lp.senses))
            if not ok:
                continue
            val = base
        feasible = True
        if best is None or (lp.maximize and val > best) or (not lp.maximize and val < best):
            best = val
    return feasible, best


def poly_vertices(mat, rhs, tol=1e-7):
    """All vertices of { xi : mat @ xi <= rhs } by facet enumeration."""
    P = np.asarray(mat, dtype=float)
    b = np.asarray(rhs, dtype=float)
    k = P.shape[1]
    seen = set()
    verts = []
    for combo in itertools.combinations(range(P.shape[0]), k):
        A = P[list(combo)]
        try:
            v = np.linalg.solve(A, b[list(combo)])
        except np.linalg.LinAlgError:
            continue
        if not np.all(P @ v <= b + tol):
            continue
        key = tuple(np.round(v, 9))
        if key in seen:
            continue
        seen.add(key)
        verts.append(v)
    return verts


def poly_support_dual(mat, rhs, a, options=None):
    """Support of { xi : mat xi <= rhs } in direction a, via the dual LP.

    min rhs @ lam  s.t.  mat.T @ lam == a,  lam >= 0.
    """
    P = np.asarray(mat, dtype=float)
    b = np.asarray(rhs, dtype=float)
    a = np.asarray(a, dtype=float)
    m = P.shape[0]
    lp = make_lp(b, P.T, ["=="] * P.shape[1], a,
                 np.zeros(m), np.full(m, np.inf), maximize=False)
    sol = solve_lp(lp, options)
    return sol.status, sol.objective


def _scenario_rows(con, nvars, xi):
    """Constraint coefficients/rhs with the uncertain parameters fixed."""
    e = con.expr
    coefs = np.zeros(nvars)
    for vid, c in e.lin_x.items():
        coefs[vid] += c
    const = e.constant
    for uid, c in e.lin_xi.items():
        const += c * xi[uid]
    for (vid, uid), c in e.bilin.items():
        coefs[vid] += c * xi[uid]
    if e.lin_y:
        raise AssertionError("oracle expects decision-rule substituted rows")
    return coefs, con.rhs - const


def scenario_robust_oracle(model, mip_gap=0.0):
    """Robust optimum by explicit scenario enumeration over set vertices.

    Works on models whose groups all carry polyhedral sets. The affine
    policy space matches the library's (objective lifting plus linear
    decision rules), but the worst case is handled by instantiating every
    vertex scenario instead of dualizing.
    Returns (status_name, objective or None).
    """
    lifted, _ = lift_objective(model)
    ldrm, _ = apply_ldr(lifted)

    verts_per_group = []
    for g in ldrm.groups:
        s = g.uncset
        if not isinstance(s, PolyhedralSet):
            raise AssertionError(f"oracle needs polyhedral groups, got {type(s).__name__}")
        vs = poly_vertices(s.mat, s.rhs)
        assert vs, f"group {g.name} enumerated no vertices"
        verts_per_group.append([(g.ids, v) for v in vs])

    scenarios = []
    for combo in itertools.product(*verts_per_group):
        xi = {}
        for ids, v in combo:
            for uid, val in zip(ids, v):
                xi[uid] = float(val)
        scenarios.append(xi)
    if not scenarios:
        scenarios = [{}]

    nvars = len(ldrm.vars)
    rows, senses, rhs = [], [], []
    for con in ldrm.constraints:
        if con.expr.references_xi():
            for xi in scenarios:
                coefs, r = _scenario_rows(con, nvars, xi)
                rows.append(coefs)
                senses.append(con.sense.value)
                rhs.append(r)
        else:
            coefs, r = _scenario_rows(con, nvars, {})
            rows.append(coefs)
            senses.append(con.sense.value)
            rhs.append(r)

    obj = np.zeros(nvars)
    e = ldrm.objective
    assert not e.lin_xi and not e.bilin and not e.lin_y, "lifted objective must be certain"
    for vid, c in e.lin_x.items():
        obj[vid] += c
    lower = np.array([v.lower for v in ldrm.vars])
    upper = np.array([v.upper for v in ldrm.vars])
    lp = make_lp(obj, rows, senses, rhs, lower, upper,
                 maximize=ldrm.sense.value == "max")
    int_cols = [i for i, v in enumerate(ldrm.vars)
                if v.domain in (VarDomain.BINARY, VarDomain.INTEGER)]
    if int_cols:
        sol = solve_milp(lp, int_cols, LpOptions(mip_gap=mip_gap))
    else:
        sol = solve_lp(lp)
    if sol.objective is None:
        return sol.status.name, None
    return sol.status.name, sol.objective + e.constant
