"""Branch and bound on top of the simplex kernel.

Best-bound node selection (FIFO among equal bounds), branching on the most
fractional integer column with ties broken toward the lowest column index,
and an absolute optimality gap.  Everything is deterministic: identical
inputs explore identical trees.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import replace

import numpy as np

from ..errors import KernelError
from .lp import LpOptions, LpSolution, LpStatus, StandardLp, solve_lp


def _most_fractional(x: np.ndarray, int_cols: list[int], int_tol: float) -> int | None:
    best_j = None
    best_dist = math.inf
    for j in int_cols:
        frac = x[j] - math.floor(x[j])
        if min(frac, 1.0 - frac) <= int_tol:
            continue
        dist = abs(frac - 0.5)
        if dist < best_dist:
            best_dist = dist
            best_j = j
    return best_j


def _is_integral(x: np.ndarray, int_cols: list[int], int_tol: float) -> bool:
    return all(abs(x[j] - round(x[j])) <= int_tol for j in int_cols)


def _round_integral(sol: LpSolution, int_cols: list[int]) -> LpSolution:
    x = sol.x.copy()
    for j in int_cols:
        x[j] = round(x[j])
    return replace(sol, x=x, duals=None, reduced_costs=None)


def solve_milp(
    lp: StandardLp, integer_cols, options: LpOptions | None = None
) -> LpSolution:
    """Solve a mixed-integer program; integer columns need finite bounds."""
    opt = options or LpOptions()
    int_cols = sorted({int(j) for j in integer_cols})
    for j in int_cols:
        if not (math.isfinite(lp.lower[j]) and math.isfinite(lp.upper[j])):
            raise KernelError(f"integer column {j} must have finite bounds")
    if not int_cols:
        return solve_lp(lp, opt)

    sgn = -1.0 if lp.maximize else 1.0

    root = solve_lp(lp, opt)
    total_iters = root.iterations
    if root.status is not LpStatus.OPTIMAL:
        return replace(root, nodes=0)

    incumbent: LpSolution | None = None
    incumbent_key = math.inf
    if _is_integral(root.x, int_cols, opt.int_tol):
        best = _round_integral(root, int_cols)
        return replace(best, nodes=0, iterations=total_iters)

    tick = 0
    heap: list[tuple[float, int, np.ndarray, np.ndarray, LpSolution]] = []
    heapq.heappush(heap, (sgn * root.objective, tick, lp.lower.copy(), lp.upper.copy(), root))

    nodes = 0
    limit_hit = False
    while heap:
        key, _, lo, up, sol = heapq.heappop(heap)
        if incumbent is not None and key >= incumbent_key - opt.mip_gap:
            break  # proven within gap
        j = _most_fractional(sol.x, int_cols, opt.int_tol)
        if j is None:
            if key < incumbent_key:
                incumbent, incumbent_key = _round_integral(sol, int_cols), key
            continue
        v = sol.x[j]
        for lo_j, up_j in ((lo[j], math.floor(v)), (math.ceil(v), up[j])):
            if nodes >= opt.node_limit:
                limit_hit = True
                break
            clo, cup = lo.copy(), up.copy()
            clo[j], cup[j] = lo_j, up_j
            if clo[j] > cup[j]:
                continue
            child = solve_lp(replace(lp, lower=clo, upper=cup), opt)
            nodes += 1
            total_iters += child.iterations
            if child.status is LpStatus.INFEASIBLE:
                continue
            if child.status is LpStatus.ITER_LIMIT:
                limit_hit = True
                break
            if child.status is LpStatus.UNBOUNDED:
                raise KernelError("unbounded node below an optimal root relaxation")
            ckey = sgn * child.objective
            if _is_integral(child.x, int_cols, opt.int_tol):
                if ckey < incumbent_key:
                    incumbent, incumbent_key = _round_integral(child, int_cols), ckey
            elif incumbent is None or ckey < incumbent_key - opt.mip_gap:
                tick += 1
                heapq.heappush(heap, (ckey, tick, clo, cup, child))
        if limit_hit:
            break

    if limit_hit:
        if incumbent is not None:
            return replace(
                incumbent,
                status=LpStatus.ITER_LIMIT,
                nodes=nodes,
                iterations=total_iters,
                limit="nodes",
            )
        return LpSolution(
            LpStatus.ITER_LIMIT, None, None, nodes=nodes, iterations=total_iters, limit="nodes"
        )
    if incumbent is None:
        return LpSolution(LpStatus.INFEASIBLE, None, None, nodes=nodes, iterations=total_iters)
    return replace(incumbent, nodes=nodes, iterations=total_iters)


__all__ = ["solve_milp"]
