"""Seeded desk-scale case studies and the set-size sweep harness.

Three families: portfolio selection with uncertain returns, a knapsack
with uncertain item weights, and facility location with uncertain demand
served by adjustable shipments.  Instance data comes from a documented
64-bit linear congruential generator, so the same :class:`CaseSpec`
yields a byte-identical model document on every platform.

The set-size parameter ``alpha`` scales per-coordinate interval radii.
``geometry="polyhedral"`` uses the box of those intervals;
``geometry="ellipsoidal"`` uses the ellipsoid through the box's corners
(covariance ``k * diag(radius^2)``), which contains the box, so worst-case
objectives under the ellipsoid are never better.  ``alpha = 0`` always
yields the singleton box at the nominal point, whatever the geometry.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .base import ObjSense, Sense
from .model import Expr, Model, VarDomain
from .sets import EllipsoidalSet, PolyhedralSet
from .solve import SolveStatus, SolverOptions, solve, solve_nominal

CSV_COLUMNS = [
    "case", "seed", "alpha", "geometry", "solver", "status", "objective",
    "normalized", "cuts_added", "iterations", "transform_ms", "solve_ms",
]

_GEOMETRIES = ("polyhedral", "ellipsoidal")
_DEFAULT_SIZES = {"portfolio": (4, 1), "knapsack": (4, 1), "facility": (3, 2)}


class Lcg:
    """64-bit linear congruential generator with fixed constants.

    state' = (6364136223846793005 * state + 1442695040888963407) mod 2^64;
    uniforms use the top 53 bits of each state.  Small and portable on
    purpose: any implementation of this recurrence reproduces the
    instance data exactly.
    """

    _A = 6364136223846793005
    _C = 1442695040888963407
    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self._state = int(seed) & self._MASK

    def next_u64(self) -> int:
        self._state = (self._state * self._A + self._C) & self._MASK
        return self._state

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0 ** -53
        return lo + (hi - lo) * u


@dataclass(frozen=True)
class CaseSpec:
    """One sweep instance: which case, which set, which data seed.

    ``n`` is assets / items / customers; ``m`` is facilities and ignored
    outside the facility case.
    """

    case: str
    geometry: str = "polyhedral"
    alpha: float = 0.0
    seed: int = 0
    n: int = 4
    m: int = 2


# ---------------------------------------------------------------------------
# uncertainty-set construction


def _box(center: np.ndarray, radius: np.ndarray) -> PolyhedralSet:
    k = len(center)
    mat = np.vstack([np.eye(k), -np.eye(k)])
    rhs = np.concatenate([center + radius, -(center - radius)])
    return PolyhedralSet(mat, rhs)


def _case_set(geometry: str, center: np.ndarray, radius: np.ndarray, alpha: float):
    if geometry not in _GEOMETRIES:
        raise ValueError(f"unknown geometry {geometry!r}; expected one of {_GEOMETRIES}")
    if alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    if alpha == 0.0:
        # degenerate set {nominal}; the ellipsoid would be rank-zero
        return _box(center, np.zeros_like(center))
    if geometry == "polyhedral":
        return _box(center, radius)
    k = len(center)
    return EllipsoidalSet(center, np.diag(k * radius ** 2))


# ---------------------------------------------------------------------------
# generators


def gen_portfolio(n: int = 4, geometry: str = "polyhedral",
                  alpha: float = 0.0, seed: int = 0) -> Model:
    """Allocate one unit over ``n`` assets against worst-case returns.

    Nominal returns are drawn uniformly from [0.5, 1.5); each return may
    deviate by up to ``alpha`` from nominal (interval radius ``alpha`` in
    every coordinate).  max ξᵀx subject to Σx = 1, x ≥ 0.
    """
    if n < 2:
        raise ValueError("portfolio needs at least two assets")
    rng = Lcg(seed)
    nominal = np.array([rng.uniform(0.5, 1.5) for _ in range(n)])
    m = Model(f"portfolio-n{n}-s{seed}")
    xs = [m.add_var(f"x{i}", lower=0.0) for i in range(n)]
    u = m.add_unc_params("r", nominal,
                         _case_set(geometry, nominal, np.full(n, float(alpha)), alpha))
    m.add_constraint(Expr.of(x={vid: 1.0 for vid in xs}), Sense.EQ, 1.0, label="budget")
    m.set_objective(Expr.of(bilin={(vid, uid): 1.0 for vid, uid in zip(xs, u)}),
                    ObjSense.MAX)
    return m


def gen_knapsack(n: int = 4, geometry: str = "polyhedral",
                 alpha: float = 0.0, seed: int = 0) -> Model:
    """Pick items of uncertain weight under a fixed capacity.

    Draw order: nominal weights w̄ᵢ from [1, 5) for all items, then values
    from [1, 10).  Weight i may deviate by up to ``alpha * 0.3 * w̄ᵢ``;
    capacity is half the nominal total weight.  max value subject to
    Σ ξᵢxᵢ ≤ cap, x binary.
    """
    if n < 1:
        raise ValueError("knapsack needs at least one item")
    rng = Lcg(seed)
    weights = np.array([rng.uniform(1.0, 5.0) for _ in range(n)])
    values = [rng.uniform(1.0, 10.0) for _ in range(n)]
    cap = 0.5 * float(weights.sum())
    radius = float(alpha) * 0.3 * weights
    m = Model(f"knapsack-n{n}-s{seed}")
    zs = [m.add_var(f"z{i}", VarDomain.BINARY) for i in range(n)]
    u = m.add_unc_params("w", weights, _case_set(geometry, weights, radius, alpha))
    m.add_constraint(Expr.of(bilin={(vid, uid): 1.0 for vid, uid in zip(zs, u)}),
                     Sense.LE, cap, label="cap")
    m.set_objective(Expr.of(x={vid: val for vid, val in zip(zs, values)}), ObjSense.MAX)
    return m


def gen_facility(m: int = 2, n: int = 3, geometry: str = "polyhedral",
                 alpha: float = 0.0, seed: int = 0) -> Model:
    """Build facilities now, route shipments after demand is revealed.

    Draw order: build costs from [5, 10) per facility, shipping costs from
    [1, 2) per (facility, customer) row-major, nominal demands from [1, 3)
    per customer.  Demand c may deviate by up to ``alpha * 0.4 * d̄_c``.
    Shipments y[f][c] are adjustable on the full demand vector; capacity
    ``(2/m) * Σ(d̄ + 0.4 d̄)`` per built facility keeps instances feasible
    through alpha = 1.  min build + shipping cost, worst case.
    """
    if m < 1 or n < 1:
        raise ValueError("facility needs at least one facility and one customer")
    rng = Lcg(seed)
    build = [rng.uniform(5.0, 10.0) for _ in range(m)]
    ship = [[rng.uniform(1.0, 2.0) for _ in range(n)] for _ in range(m)]
    demand = np.array([rng.uniform(1.0, 3.0) for _ in range(n)])
    rho = 0.4 * demand
    radius = float(alpha) * rho
    cap = (2.0 / m) * float((demand + rho).sum())
    md = Model(f"facility-m{m}-n{n}-s{seed}")
    xs = [md.add_var(f"x{f}", VarDomain.BINARY) for f in range(m)]
    u = md.add_unc_params("d", demand, _case_set(geometry, demand, radius, alpha))
    ys = [[md.add_adjustable(f"y{f}_{c}", deps=u, lower=0.0) for c in range(n)]
          for f in range(m)]
    for c in range(n):
        md.add_constraint(
            Expr.of(y={ys[f][c]: 1.0 for f in range(m)}, xi={u[c]: -1.0}),
            Sense.GE, 0.0, label=f"demand[{c}]")
    for f in range(m):
        md.add_constraint(
            Expr.of(y={ys[f][c]: 1.0 for c in range(n)}, x={xs[f]: -cap}),
            Sense.LE, 0.0, label=f"capacity[{f}]")
    obj_x = {xs[f]: build[f] for f in range(m)}
    obj_y = {ys[f][c]: ship[f][c] for f in range(m) for c in range(n)}
    md.set_objective(Expr.of(x=obj_x, y=obj_y), ObjSense.MIN)
    return md


_GENERATORS = {
    "portfolio": lambda spec: gen_portfolio(spec.n, spec.geometry, spec.alpha, spec.seed),
    "knapsack": lambda spec: gen_knapsack(spec.n, spec.geometry, spec.alpha, spec.seed),
    "facility": lambda spec: gen_facility(spec.m, spec.n, spec.geometry,
                                          spec.alpha, spec.seed),
}


def generate(spec: CaseSpec) -> Model:
    try:
        gen = _GENERATORS[spec.case]
    except KeyError:
        raise ValueError(
            f"unknown case {spec.case!r}; expected one of {sorted(_GENERATORS)}"
        ) from None
    return gen(spec)


def sweep_grid(case: str, geometry: str = "polyhedral", seed: int = 0,
               alphas=None, n: int | None = None, m: int | None = None) -> list[CaseSpec]:
    """Specs for one case over a set-size grid (default: 30 even points on [0, 1])."""
    if alphas is None:
        alphas = [float(a) for a in np.linspace(0.0, 1.0, 30)]
    dn, dm = _DEFAULT_SIZES.get(case, (4, 1))
    return [CaseSpec(case, geometry, float(a), seed,
                     n=dn if n is None else n, m=dm if m is None else m)
            for a in alphas]


# ---------------------------------------------------------------------------
# sweep harness


# cut_tol matches the kernel feasibility tolerance: the scenario loop
# cannot certify violations smaller than the master solves are accurate,
# and asking for less risks an iteration-limit stall on curved sets
_SWEEP_OPTIONS = SolverOptions(cut_tol=1e-7, mip_gap=0.0)


def _run_one(spec: CaseSpec, solver: str, options: SolverOptions) -> dict:
    row = {
        "case": spec.case, "seed": spec.seed, "alpha": spec.alpha,
        "geometry": spec.geometry, "solver": solver, "status": None,
        "objective": None, "normalized": None, "cuts_added": None,
        "iterations": None, "transform_ms": None, "solve_ms": None,
    }
    try:
        model = generate(spec)
        result = solve(model, solver, options)
    except Exception as exc:  # failures become rows, the sweep continues
        row["status"] = f"error:{type(exc).__name__}"
        return row
    row["status"] = result.status.value
    row["cuts_added"] = result.stats.cuts_added
    row["iterations"] = result.stats.iterations
    row["transform_ms"] = 1e3 * result.stats.transform_time
    row["solve_ms"] = 1e3 * result.stats.solve_time
    if result.status is not SolveStatus.OPTIMAL:
        return row
    row["objective"] = result.objective
    nominal = solve_nominal(model, options)
    if nominal.status is SolveStatus.OPTIMAL and nominal.objective not in (None, 0.0):
        row["normalized"] = result.objective / nominal.objective
    return row


def _worker(task) -> dict:
    spec, solver, options = task
    return _run_one(spec, solver, options)


def run_sweep(specs, solver: str = "cuts",
              options: SolverOptions | None = None, jobs: int = 1) -> list[dict]:
    """Solve every spec and report one row each, in input order.

    ``normalized`` is the robust objective over the same instance's
    nominal objective.  The default options close the scenario loop and
    the branch-and-bound gap tighter than the solver defaults so the
    alpha = 0 rows reproduce the nominal value to solver exactness.
    Failures do not stop the sweep; they appear as ``error:...`` rows.
    """
    opts = options if options is not None else _SWEEP_OPTIONS
    specs = list(specs)
    if jobs > 1:
        tasks = [(spec, solver, opts) for spec in specs]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_worker, tasks))
    return [_run_one(spec, solver, opts) for spec in specs]


def write_csv(rows, path) -> None:
    """Write sweep rows to ``path`` (a filename or an open text stream)."""
    if hasattr(path, "write"):
        writer = csv.DictWriter(path, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


__all__ = [
    "CSV_COLUMNS",
    "CaseSpec",
    "Lcg",
    "gen_facility",
    "gen_knapsack",
    "gen_portfolio",
    "generate",
    "run_sweep",
    "sweep_grid",
    "write_csv",
]
