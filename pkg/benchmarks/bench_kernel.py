"""Compare the compiled and pure-Python kernel backends.

Times the same work through both pivot backends: dense random LPs at
three sizes, a binary knapsack through branch and bound, and one full
robust solve (facility case, cutting plane) to show where the kernel
sits inside the pipeline.  Results are wall-clock medians over
``--repeats`` runs; instances are rebuilt per run so neither backend
sees warm state.

Run from the repository root::

    python3 benchmarks/bench_kernel.py
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from robustkit.cases import CaseSpec, generate
from robustkit.kernel import backend
from robustkit.kernel.lp import make_lp, solve_lp
from robustkit.kernel.milp import solve_milp
from robustkit.solve import solve


def _random_lp(rng, rows, cols):
    A = rng.uniform(-3.0, 3.0, (rows, cols))
    b = rng.uniform(1.0, 5.0, rows)          # origin stays feasible
    obj = rng.uniform(-5.0, 5.0, cols)
    return make_lp(obj, A, ["<="] * rows, b, [0.0] * cols, [10.0] * cols,
                   maximize=True)


def _bench_lp(seed, rows, cols):
    def run():
        rng = np.random.default_rng(seed)
        for _ in range(5):
            sol = solve_lp(_random_lp(rng, rows, cols))
            assert sol.status.name == "OPTIMAL"
    return run


def _bench_knapsack(seed, n):
    def run():
        rng = np.random.default_rng(seed)
        w = rng.uniform(1.0, 5.0, n)
        v = rng.uniform(1.0, 10.0, n)
        lp = make_lp(v, w.reshape(1, -1), ["<="], [0.5 * w.sum()],
                     [0.0] * n, [1.0] * n, maximize=True)
        sol = solve_milp(lp, list(range(n)))
        assert sol.status.name == "OPTIMAL"
    return run


def _bench_pipeline():
    def run():
        model = generate(CaseSpec("facility", "polyhedral", 0.6, 0))
        res = solve(model, "cuts")
        assert res.status.value == "optimal"
    return run


BENCHES = [
    ("lp 15x20 (x5)", _bench_lp(1, 15, 20)),
    ("lp 40x60 (x5)", _bench_lp(2, 40, 60)),
    ("lp 80x120 (x5)", _bench_lp(3, 80, 120)),
    ("knapsack b&b n=16", _bench_knapsack(4, 16)),
    ("facility cuts", _bench_pipeline()),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3,
                    help="timed runs per benchmark (median reported)")
    args = ap.parse_args()

    names = backend.available()
    if "cython" not in names:
        print("compiled backend not importable; timing python only")
    saved = backend.name()
    results: dict[str, dict[str, float]] = {}
    try:
        for be in names:
            backend.use(be)
            for label, fn in BENCHES:
                fn()   # warm-up, also validates the run
                times = []
                for _ in range(args.repeats):
                    t0 = time.perf_counter()
                    fn()
                    times.append(1e3 * (time.perf_counter() - t0))
                results.setdefault(label, {})[be] = statistics.median(times)
    finally:
        backend.use(saved)

    width = max(len(label) for label, _ in BENCHES)
    header = f"{'benchmark':<{width}}  " + "".join(f"{be:>12}" for be in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, _ in BENCHES:
        row = f"{label:<{width}}  "
        row += "".join(f"{results[label][be]:>10.2f}ms" for be in names)
        if len(names) == 2:
            a, b = (results[label][n] for n in names)
            row += f"{b / a:>9.2f}x" if names[0] == "cython" else \
                   f"{a / b:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
