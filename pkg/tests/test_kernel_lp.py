import os
import subprocess
import sys

import numpy as np
import pytest

from robustkit.kernel import backend
from robustkit.kernel.lp import (LpOptions, LpStatus, make_lp, solve_lp,
                                 verify_solution)

from _oracles import brute_lp

INF = np.inf


def test_pinned_two_var():
    # max 3x+2y s.t. x+y<=4, x<=2  ->  10 at (2,2)
    lp = make_lp([3, 2], [[1, 1], [1, 0]], ["<=", "<="], [4, 2],
                 [0, 0], [INF, INF], maximize=True)
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(10.0, abs=1e-9)
    assert sol.x == pytest.approx([2.0, 2.0], abs=1e-9)


def test_two_rows_max():
    lp = make_lp([3, 2], [[1, 1], [1, 3]], ["<=", "<="], [4, 6],
                 [0, 0], [INF, INF], maximize=True)
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(12.0, abs=1e-9)
    rep = verify_solution(lp, sol)
    assert rep.ok(1e-7)
    assert rep.dual_objective == pytest.approx(sol.objective, abs=1e-7)


def test_free_variable_ge_row():
    lp = make_lp([1.0], [[1.0]], [">="], [5.0], [-INF], [INF])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(5.0, abs=1e-9)


def test_unbounded():
    lp = make_lp([1.0], [], [], [], [0.0], [INF], maximize=True)
    sol = solve_lp(lp)
    assert sol.status is LpStatus.UNBOUNDED
    assert sol.objective is None and sol.x is None


def test_infeasible():
    lp = make_lp([1.0], [[1.0], [1.0]], ["<=", ">="], [-1.0, 1.0], [-INF], [INF])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.INFEASIBLE


def test_equality_mixed_bounds():
    # z is free and cheap, so it absorbs the equality:
    # min x+2y+0.5z s.t. x+y+z == 10, x-y >= -2, x in [0,4], y in [0,5]
    lp = make_lp([1.0, 2.0, 0.5], [[1, 1, 1], [1, -1, 0]], ["==", ">="],
                 [10.0, -2.0], [0.0, 0.0, -INF], [4.0, 5.0, INF])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(5.0, abs=1e-9)
    assert verify_solution(lp, sol).ok(1e-7)


def test_no_rows_bounded_box():
    lp = make_lp([1.0, -2.0], [], [], [], [-1.0, -3.0], [2.0, 5.0])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(-11.0, abs=1e-12)
    assert sol.x == pytest.approx([-1.0, 5.0])


def test_fixed_variable():
    lp = make_lp([1.0, 1.0], [[1.0, 1.0]], ["<="], [10.0],
                 [3.0, 0.0], [3.0, INF])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.x[0] == pytest.approx(3.0, abs=1e-12)


def test_zero_objective_any_feasible_point():
    lp = make_lp([0.0, 0.0], [[1, 1]], [">="], [1.0], [0, 0], [2, 2])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(0.0, abs=1e-12)
    assert sum(sol.x) >= 1.0 - 1e-9


def test_redundant_rows_degenerate_vertex():
    lp = make_lp([1, 1], [[1, 0], [1, 0], [0, 1], [1, 1]],
                 ["<="] * 4, [1, 1, 1, 2], [0, 0], [INF, INF], maximize=True)
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective == pytest.approx(2.0, abs=1e-9)


def test_explicit_duals_single_active_row():
    lp = make_lp([3, 2], [[1, 1], [1, 3]], ["<=", "<="], [4, 6],
                 [0, 0], [INF, INF], maximize=True)
    sol = solve_lp(lp)
    # optimum (4, 0): only the first row is active
    assert sol.duals == pytest.approx([3.0, 0.0], abs=1e-9)


def test_random_corpus_matches_enumeration():
    rng = np.random.default_rng(12345)
    checked = 0
    for trial in range(120):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, 5))
        A = np.round(rng.uniform(-3, 3, size=(m, n)), 2)
        b = np.round(rng.uniform(-2, 4, size=m), 2)
        senses = [["<=", ">="][int(rng.integers(0, 2))] for _ in range(m)]
        lo = np.round(rng.uniform(-3, 0, size=n), 2)
        hi = lo + np.round(rng.uniform(0.5, 4, size=n), 2)
        c = np.round(rng.uniform(-2, 2, size=n), 2)
        lp = make_lp(c, A, senses, b, lo, hi, maximize=bool(rng.integers(0, 2)))
        sol = solve_lp(lp)
        feas, best = brute_lp(lp)
        if not feas:
            assert sol.status is LpStatus.INFEASIBLE, trial
            continue
        assert sol.status is LpStatus.OPTIMAL, trial
        assert abs(sol.objective - best) <= 1e-6 * (1 + abs(best)), (trial, sol.objective, best)
        assert verify_solution(lp, sol).ok(1e-6), trial
        checked += 1
    assert checked >= 60


def test_pivot_trace_deterministic():
    lp = make_lp([3, 2], [[1, 1], [1, 3]], ["<=", "<="], [4, 6],
                 [0, 0], [INF, INF], maximize=True)
    opts = LpOptions(track_pivots=True)
    t1 = solve_lp(lp, opts).pivots
    t2 = solve_lp(lp, opts).pivots
    assert t1 and t1 == t2


def test_iteration_limit_reported():
    rng = np.random.default_rng(7)
    A = rng.uniform(-1, 1, size=(12, 8))
    lp = make_lp(rng.uniform(size=8), A, ["<="] * 12, rng.uniform(1, 2, size=12),
                 np.zeros(8), np.full(8, INF), maximize=True)
    sol = solve_lp(lp, LpOptions(max_iters=1))
    assert sol.status is LpStatus.ITER_LIMIT
    assert sol.limit == "iterations"


def test_backends_agree():
    rng = np.random.default_rng(99)
    lps = []
    for _ in range(10):
        n, m = 3, 4
        lps.append(make_lp(rng.uniform(-2, 2, size=n),
                           rng.uniform(-3, 3, size=(m, n)), ["<="] * m,
                           rng.uniform(0.5, 4, size=m),
                           np.zeros(n), np.full(n, 2.0), maximize=True))
    results = {}
    active = backend.name()
    try:
        for name in backend.available():
            backend.use(name)
            results[name] = [solve_lp(lp).objective for lp in lps]
    finally:
        backend.use(active)
    names = list(results)
    assert names, "no backends registered"
    for other in names[1:]:
        assert results[names[0]] == pytest.approx(results[other], abs=1e-9)


def test_env_var_selects_backend():
    code = "from robustkit.kernel import backend; print(backend.name())"
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True,
                         env=dict(os.environ, ROBUSTKIT_KERNEL="python"))
    assert out.stdout.strip() == "python"
