"""Command-line driver.

Three subcommands: ``solve`` runs one model end to end, ``sweep`` runs a
case-study grid over set sizes and writes a CSV, ``check`` verifies a
saved decision point against a model.  Exit codes: 0 solved to optimality
(or point feasible), 1 point violated, 2 infeasible, 3 unbounded,
4 iteration limit, 64 usage error, 65 unreadable or invalid input.
``ROBUSTKIT_LOG`` sets the log level (e.g. ``info``, ``debug``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import cases
from .errors import ParseError, RobustKitError
from .jsonio import emit_result, export_counterpart, parse_model
from .solve import SolveStatus, SolverOptions, check_robust_feasibility, solve
from .transform import apply_ldr, build_counterpart, lift_objective, nominal_substitute

log = logging.getLogger("robustkit.cli")

EXIT_USAGE = 64
EXIT_DATA = 65

_STATUS_EXIT = {
    SolveStatus.OPTIMAL: 0,
    SolveStatus.INFEASIBLE: 2,
    SolveStatus.UNBOUNDED: 3,
    SolveStatus.ITER_LIMIT: 4,
}

_GEOMETRY = {"poly": "polyhedral", "ellip": "ellipsoidal"}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the documented usage code is 64
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="robustkit",
                     description="robust linear optimization at desk scale")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ps = sub.add_parser("solve", help="solve one model document")
    ps.add_argument("model", help="path to a model JSON document")
    ps.add_argument("--solver", choices=("reformulate", "cuts", "nominal"),
                    default="reformulate")
    ps.add_argument("--cut-tol", type=float, default=1e-6,
                    help="scenario-violation threshold for the cuts solver")
    ps.add_argument("--max-iter", type=int, default=200)
    ps.add_argument("--conic-tol", type=float, default=1e-6,
                    help="hyperplane-round threshold for ellipsoidal rows")
    ps.add_argument("--mip-gap", type=float, default=1e-6)
    ps.add_argument("--out", help="write the full JSON result here")
    ps.add_argument("--export-counterpart", metavar="PATH",
                    help="write the deterministic counterpart (duality form; "
                         "nominal form when --solver nominal) as JSON")

    pw = sub.add_parser("sweep", help="run a case-study grid over set sizes")
    pw.add_argument("case", choices=("portfolio", "knapsack", "facility"))
    pw.add_argument("--alphas",
                    help="comma-separated set sizes; default: 30 even points on [0, 1]")
    pw.add_argument("--geometry", choices=("poly", "ellip"), default="poly")
    pw.add_argument("--seed", type=int, default=0)
    pw.add_argument("--out", default="sweep.csv")
    pw.add_argument("--jobs", type=int, default=1,
                    help="solve instances in N parallel worker processes")

    pc = sub.add_parser("check", help="verify a decision point against a model")
    pc.add_argument("model", help="path to a model JSON document")
    pc.add_argument("--point", required=True,
                    help='JSON file: {"x": {name: value}, "ldr": {...}} or a '
                         "flat name-to-value object")
    pc.add_argument("--tol", type=float, default=1e-6)
    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _cmd_solve(args) -> int:
    model = parse_model(_read(args.model))
    log.info("parsed %r: %d vars, %d adjustable, %d constraints",
             model.name, len(model.vars), len(model.adjustables),
             len(model.constraints))
    options = SolverOptions(cut_tol=args.cut_tol, conic_tol=args.conic_tol,
                            max_iter=args.max_iter, mip_gap=args.mip_gap)
    result = solve(model, args.solver, options)
    log.info("status %s after %d iterations (%.1f ms transform, %.1f ms solve)",
             result.status.value, result.stats.iterations,
             1e3 * result.stats.transform_time, 1e3 * result.stats.solve_time)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(emit_result(result, "json"))
    if args.export_counterpart:
        if args.solver == "nominal":
            det = nominal_substitute(model)
        else:
            lifted, _ = lift_objective(model)
            prepared, _ = apply_ldr(lifted)
            det = build_counterpart(prepared)
        with open(args.export_counterpart, "w", encoding="utf-8") as fh:
            fh.write(export_counterpart(det))
    sys.stdout.write(emit_result(result, "table"))
    return _STATUS_EXIT[result.status]


def _cmd_sweep(args) -> int:
    if args.alphas:
        try:
            alphas = [float(tok) for tok in args.alphas.split(",") if tok.strip()]
        except ValueError:
            sys.stderr.write(f"robustkit sweep: error: bad --alphas {args.alphas!r}\n")
            return EXIT_USAGE
    else:
        alphas = None
    specs = cases.sweep_grid(args.case, geometry=_GEOMETRY[args.geometry],
                             seed=args.seed, alphas=alphas)
    rows = cases.run_sweep(specs, jobs=args.jobs)
    cases.write_csv(rows, args.out)
    failed = sum(1 for r in rows if r["status"] != "optimal")
    sys.stdout.write(f"{len(rows)} instances -> {args.out}"
                     + (f" ({failed} not optimal)\n" if failed else "\n"))
    return 0


def _cmd_check(args) -> int:
    model = parse_model(_read(args.model))
    try:
        doc = json.loads(_read(args.point))
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("$", "expected an object")
    if "x" in doc:
        for key in doc:
            if key not in ("x", "ldr"):
                raise ParseError(key, "unknown field")
        x, ldr = doc["x"], doc.get("ldr") or {}
    else:
        x, ldr = doc, {}
    report = check_robust_feasibility(model, x, tol=args.tol, ldr=ldr)
    out = {
        "ok": report.ok,
        "max_violation": report.max_violation,
        "rows": {
            label: {"violation": rc.violation, "xi": dict(rc.xi), "ok": rc.ok}
            for label, rc in report.rows.items()
        },
    }
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return 0 if report.ok else 1


def main(argv=None) -> int:
    level = os.environ.get("ROBUSTKIT_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING),
                            format="%(name)s %(levelname)s %(message)s")
    args = _build_parser().parse_args(argv)
    handler = {"solve": _cmd_solve, "sweep": _cmd_sweep, "check": _cmd_check}[args.command]
    try:
        return handler(args)
    except RobustKitError as exc:
        sys.stderr.write(f"robustkit {args.command}: error: {exc}\n")
        return EXIT_DATA
    except OSError as exc:
        sys.stderr.write(f"robustkit {args.command}: error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
