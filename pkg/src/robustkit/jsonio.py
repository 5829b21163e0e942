"""JSON exchange: model documents, result emission, counterpart export.

The document format is versioned (``format_version: "1"``) and strict:
unknown keys are rejected with the offending path, coefficients are sparse
``[index, value]`` / ``[i, j, value]`` entry lists, and every real is
written with full round-trip precision.  Serialization is canonical (fixed
key order, entries sorted by index), so ``serialize_model`` emits
byte-identical text for structurally equal models and
``serialize(parse(serialize(m)))`` reproduces ``serialize(m)`` exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .base import INF, AdjId, ObjSense, Sense
from .errors import ParseError, ValidationError
from .model import AdjustableVar, Expr, Model, VarDomain
from .sets import (
    EllipsoidalSet,
    GaussianConfidenceSet,
    GenericSet,
    PolyhedralSet,
)
from .solve import SolveResult
from .transform import DeterministicModel

FORMAT_VERSION = "1"

_SENSES = {s.value for s in Sense}
_OBJ_SENSES = {s.value for s in ObjSense}
_DOMAINS = set(VarDomain.ALL)


# ---------------------------------------------------------------------------
# strict-walk helpers


def _expect(obj, path: str, kind, what: str):
    if not isinstance(obj, kind) or isinstance(obj, bool) and kind is not bool:
        raise ParseError(path, f"expected {what}")
    return obj


def _expect_dict(obj, path: str, required: tuple, optional: tuple = ()) -> dict:
    _expect(obj, path, dict, "an object")
    for key in obj:
        if key not in required and key not in optional:
            raise ParseError(f"{path}.{key}", "unknown field")
    for key in required:
        if key not in obj:
            raise ParseError(path, f"missing required field {key!r}")
    return obj


def _expect_list(obj, path: str) -> list:
    return _expect(obj, path, list, "an array")


def _expect_str(obj, path: str) -> str:
    return _expect(obj, path, str, "a string")


def _number(obj, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ParseError(path, "expected a number")
    val = float(obj)
    if not math.isfinite(val):
        raise ParseError(path, "expected a finite number")
    return val


def _bound(obj, path: str, default: float) -> float:
    if obj is None:
        return default
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ParseError(path, "expected a number or null")
    return float(obj)


def _index(obj, path: str, limit: int) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ParseError(path, "expected an integer index")
    if not 0 <= obj < limit:
        raise ParseError(path, f"index {obj} out of range [0, {limit})")
    return obj


def _pairs(obj, path: str, limit: int) -> dict[int, float]:
    out: dict[int, float] = {}
    for k, entry in enumerate(_expect_list(obj, path)):
        epath = f"{path}[{k}]"
        entry = _expect_list(entry, epath)
        if len(entry) != 2:
            raise ParseError(epath, "expected an [index, value] pair")
        i = _index(entry[0], f"{epath}[0]", limit)
        if i in out:
            raise ParseError(epath, f"duplicate index {i}")
        out[i] = _number(entry[1], f"{epath}[1]")
    return out


def _triples(obj, path: str, limit_i: int, limit_j: int) -> dict[tuple[int, int], float]:
    out: dict[tuple[int, int], float] = {}
    for k, entry in enumerate(_expect_list(obj, path)):
        epath = f"{path}[{k}]"
        entry = _expect_list(entry, epath)
        if len(entry) != 3:
            raise ParseError(epath, "expected an [i, j, value] triple")
        i = _index(entry[0], f"{epath}[0]", limit_i)
        j = _index(entry[1], f"{epath}[1]", limit_j)
        if (i, j) in out:
            raise ParseError(epath, f"duplicate index pair ({i}, {j})")
        out[(i, j)] = _number(entry[2], f"{epath}[2]")
    return out


def _matrix(obj, path: str) -> list[list[float]]:
    rows = _expect_list(obj, path)
    out = []
    width = None
    for r, row in enumerate(rows):
        row = _expect_list(row, f"{path}[{r}]")
        vals = [_number(v, f"{path}[{r}][{c}]") for c, v in enumerate(row)]
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ParseError(f"{path}[{r}]", "ragged matrix rows")
        out.append(vals)
    return out


def _vector(obj, path: str) -> list[float]:
    return [_number(v, f"{path}[{k}]") for k, v in enumerate(_expect_list(obj, path))]


# ---------------------------------------------------------------------------
# uncertainty-set documents


def _parse_uncset(obj, path: str):
    _expect(obj, path, dict, "an object")
    kind = _expect_str(obj.get("kind"), f"{path}.kind") if "kind" in obj else None
    if kind is None:
        raise ParseError(path, "missing required field 'kind'")
    if kind == "polyhedral":
        _expect_dict(obj, path, ("kind", "mat", "rhs"))
        mat = _matrix(obj["mat"], f"{path}.mat")
        rhs = _vector(obj["rhs"], f"{path}.rhs")
        return PolyhedralSet(np.array(mat, dtype=float).reshape(len(mat), -1),
                             np.array(rhs, dtype=float))
    if kind == "ellipsoidal":
        _expect_dict(obj, path, ("kind", "mean", "cov"))
        return EllipsoidalSet(_vector(obj["mean"], f"{path}.mean"),
                              _matrix(obj["cov"], f"{path}.cov"))
    if kind == "gaussian_confidence":
        _expect_dict(obj, path, ("kind", "mean", "cov", "alpha"))
        return GaussianConfidenceSet(_vector(obj["mean"], f"{path}.mean"),
                                     _matrix(obj["cov"], f"{path}.cov"),
                                     _number(obj["alpha"], f"{path}.alpha"))
    if kind == "generic":
        _expect_dict(obj, path, ("kind", "dim", "constraints"))
        gdim = obj["dim"]
        if isinstance(gdim, bool) or not isinstance(gdim, int) or gdim < 1:
            raise ParseError(f"{path}.dim", "expected a positive integer")
        gs = GenericSet(gdim)
        for k, entry in enumerate(_expect_list(obj["constraints"], f"{path}.constraints")):
            epath = f"{path}.constraints[{k}]"
            _expect_dict(entry, epath, (), ("lin", "quad", "constant", "sense", "rhs"))
            lin = _pairs(entry.get("lin", []), f"{epath}.lin", gdim)
            quad = _triples(entry.get("quad", []), f"{epath}.quad", gdim, gdim)
            sense = entry.get("sense", Sense.LE.value)
            if sense not in _SENSES:
                raise ParseError(f"{epath}.sense", f"unknown sense {sense!r}")
            gs.add_constraint(
                lin=lin or None,
                quad=quad or None,
                constant=_number(entry.get("constant", 0.0), f"{epath}.constant"),
                sense=Sense.parse(sense),
                rhs=_number(entry.get("rhs", 0.0), f"{epath}.rhs"),
            )
        return gs
    raise ParseError(f"{path}.kind", f"unknown uncertainty-set kind {kind!r}")


def _uncset_doc(s) -> dict:
    if isinstance(s, GaussianConfidenceSet):
        return {
            "kind": "gaussian_confidence",
            "mean": [float(v) for v in s.mean],
            "cov": [[float(v) for v in row] for row in s.base_cov],
            "alpha": float(s.alpha),
        }
    if isinstance(s, EllipsoidalSet):
        return {
            "kind": "ellipsoidal",
            "mean": [float(v) for v in s.mean],
            "cov": [[float(v) for v in row] for row in s.cov],
        }
    if isinstance(s, PolyhedralSet):
        return {
            "kind": "polyhedral",
            "mat": [[float(v) for v in row] for row in s.mat],
            "rhs": [float(v) for v in s.rhs],
        }
    if isinstance(s, GenericSet):
        cons = []
        for sc in s.constraints:
            cons.append({
                "lin": [[int(j), float(c)] for j, c in sc.lin],
                "quad": [[int(i), int(j), float(c)] for i, j, c in sc.quad],
                "constant": float(sc.constant),
                "sense": sc.sense.value,
                "rhs": float(sc.rhs),
            })
        return {"kind": "generic", "dim": int(s.dim), "constraints": cons}
    raise ValidationError(f"cannot serialize uncertainty set of type {type(s).__name__}")


# ---------------------------------------------------------------------------
# expressions


_EXPR_FIELDS = ("constant", "lin_x", "lin_xi", "bilin", "lin_y")


def _parse_expr(obj, path: str, nvars: int, nunc: int, nadj: int) -> Expr:
    _expect_dict(obj, path, (), _EXPR_FIELDS)
    return Expr.of(
        constant=_number(obj.get("constant", 0.0), f"{path}.constant"),
        x=_pairs(obj.get("lin_x", []), f"{path}.lin_x", nvars),
        xi=_pairs(obj.get("lin_xi", []), f"{path}.lin_xi", nunc),
        bilin=_triples(obj.get("bilin", []), f"{path}.bilin", nvars, nunc),
        y=_pairs(obj.get("lin_y", []), f"{path}.lin_y", nadj),
    )


def _expr_doc(e: Expr) -> dict:
    return {
        "constant": float(e.constant),
        "lin_x": [[int(i), float(e.lin_x[i])] for i in sorted(e.lin_x)],
        "lin_xi": [[int(j), float(e.lin_xi[j])] for j in sorted(e.lin_xi)],
        "bilin": [[int(i), int(j), float(e.bilin[(i, j)])]
                  for i, j in sorted(e.bilin)],
        "lin_y": [[int(a), float(e.lin_y[a])] for a in sorted(e.lin_y)],
    }


# ---------------------------------------------------------------------------
# model documents


def parse_model(text: str) -> Model:
    """Build a validated :class:`Model` from document text.

    Schema violations raise :class:`ParseError` with the offending path;
    structurally well-formed documents that break model invariants raise
    the corresponding model error (with a path-qualified message where the
    document location is known).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from None
    _expect_dict(doc, "$",
                 ("format_version", "variables", "unc_groups", "constraints",
                  "objective", "sense"),
                 ("name", "adjustables"))
    version = _expect_str(doc["format_version"], "format_version")
    if version != FORMAT_VERSION:
        raise ParseError("format_version",
                         f"unsupported version {version!r} (expected {FORMAT_VERSION!r})")
    name = _expect_str(doc.get("name", "model"), "name")
    model = Model(name)

    for i, entry in enumerate(_expect_list(doc["variables"], "variables")):
        path = f"variables[{i}]"
        _expect_dict(entry, path, ("name",), ("domain", "lower", "upper"))
        domain = entry.get("domain", VarDomain.CONTINUOUS)
        if domain not in _DOMAINS:
            raise ParseError(f"{path}.domain", f"unknown domain {domain!r}")
        if domain == VarDomain.BINARY:
            lower = _bound(entry.get("lower"), f"{path}.lower", 0.0)
            upper = _bound(entry.get("upper"), f"{path}.upper", 1.0)
        else:
            lower = _bound(entry.get("lower"), f"{path}.lower", -INF)
            upper = _bound(entry.get("upper"), f"{path}.upper", INF)
        model.add_var(_expect_str(entry["name"], f"{path}.name"), domain, lower, upper)

    for g, entry in enumerate(_expect_list(doc["unc_groups"], "unc_groups")):
        path = f"unc_groups[{g}]"
        _expect_dict(entry, path, ("name", "nominal", "uncset"))
        nominal = _vector(entry["nominal"], f"{path}.nominal")
        uncset = _parse_uncset(entry["uncset"], f"{path}.uncset")
        if uncset.dim != len(nominal):
            raise ValidationError(
                f"{path}.nominal: length {len(nominal)} does not match "
                f"set dimension {uncset.dim}"
            )
        model.add_unc_params(_expect_str(entry["name"], f"{path}.name"), nominal, uncset)

    nunc = len(model.unc_ids())
    for a, entry in enumerate(_expect_list(doc.get("adjustables", []), "adjustables")):
        path = f"adjustables[{a}]"
        _expect_dict(entry, path, ("name", "deps"), ("lower", "upper"))
        deps = [_index(d, f"{path}.deps[{k}]", nunc)
                for k, d in enumerate(_expect_list(entry["deps"], f"{path}.deps"))]
        aname = _expect_str(entry["name"], f"{path}.name")
        lower = _bound(entry.get("lower"), f"{path}.lower", -INF)
        upper = _bound(entry.get("upper"), f"{path}.upper", INF)
        if deps:
            model.add_adjustable(aname, deps=deps, lower=lower, upper=upper)
        else:
            # dependency-free adjustables are legal in documents
            model.adjustables.append(AdjustableVar(
                AdjId(len(model.adjustables)), model._claim_name(aname),
                (), lower, upper))

    nvars = len(model.vars)
    nadj = len(model.adjustables)
    for c, entry in enumerate(_expect_list(doc["constraints"], "constraints")):
        path = f"constraints[{c}]"
        _expect_dict(entry, path, ("sense", "rhs"),
                     ("label", "constant", "lin_x", "lin_xi", "bilin", "lin_y"))
        sense = _expect_str(entry["sense"], f"{path}.sense")
        if sense not in _SENSES:
            raise ParseError(f"{path}.sense", f"unknown sense {sense!r}")
        label = entry.get("label")
        if label is not None:
            label = _expect_str(label, f"{path}.label")
        body = {k: entry[k] for k in _EXPR_FIELDS if k in entry}
        expr = _parse_expr(body, path, nvars, nunc, nadj)
        model.add_constraint(expr, Sense.parse(sense),
                             _number(entry["rhs"], f"{path}.rhs"), label=label)

    _expect_dict(doc["objective"], "objective", (),
                 ("constant", "lin_x", "lin_xi", "bilin", "lin_y"))
    sense = _expect_str(doc["sense"], "sense")
    if sense not in _OBJ_SENSES:
        raise ParseError("sense", f"unknown objective sense {sense!r}")
    model.set_objective(_parse_expr(doc["objective"], "objective", nvars, nunc, nadj),
                        ObjSense.parse(sense))
    model.validate()
    return model


def _model_doc(model: Model) -> dict:
    variables = []
    for v in model.vars:
        variables.append({
            "name": v.name,
            "domain": v.domain,
            "lower": None if v.lower == -INF else float(v.lower),
            "upper": None if v.upper == INF else float(v.upper),
        })
    groups = []
    for g in model.groups:
        groups.append({
            "name": g.name,
            "nominal": [float(v) for v in g.nominal],
            "uncset": _uncset_doc(g.uncset),
        })
    adjustables = []
    for a in model.adjustables:
        adjustables.append({
            "name": a.name,
            "deps": [int(d) for d in a.deps],
            "lower": None if a.lower == -INF else float(a.lower),
            "upper": None if a.upper == INF else float(a.upper),
        })
    constraints = []
    for con in model.constraints:
        entry = {"label": con.label, "sense": con.sense.value, "rhs": float(con.rhs)}
        entry.update(_expr_doc(con.expr))
        constraints.append(entry)
    return {
        "format_version": FORMAT_VERSION,
        "name": model.name,
        "variables": variables,
        "unc_groups": groups,
        "adjustables": adjustables,
        "constraints": constraints,
        "objective": _expr_doc(model.objective),
        "sense": model.sense.value,
    }


def serialize_model(model: Model) -> str:
    return json.dumps(_model_doc(model), indent=2) + "\n"


# ---------------------------------------------------------------------------
# results


def _result_doc(result: SolveResult) -> dict:
    stats = result.stats
    worst = {
        label: {
            "violation": check.violation,
            "xi": dict(check.xi),
            "ok": check.ok,
        }
        for label, check in result.worst_case.items()
    }
    return {
        "status": result.status.value,
        "objective": result.objective,
        "x": dict(result.x),
        "ldr": {name: {"const": rule["const"], "slopes": dict(rule["slopes"])}
                for name, rule in result.ldr.items()},
        "max_violation": result.max_violation,
        "worst_case": worst,
        "stats": {
            "solver": stats.solver,
            "backend": stats.backend,
            "iterations": stats.iterations,
            "cuts_added": stats.cuts_added,
            "master_solves": stats.master_solves,
            "separation_solves": stats.separation_solves,
            "master_objective": stats.master_objective,
            "master_objective_trace": list(stats.master_objective_trace),
            "pivots": stats.pivots,
            "nodes": stats.nodes,
            "transform_time": stats.transform_time,
            "solve_time": stats.solve_time,
            "limit": stats.limit,
        },
    }


def emit_result(result: SolveResult, format: str = "json") -> str:
    """Render a solve result as machine JSON or a fixed-width summary."""
    if format == "json":
        return json.dumps(_result_doc(result), indent=2) + "\n"
    if format == "table":
        obj = "-" if result.objective is None else repr(result.objective)
        header = f"{'status':<12}{'objective':<24}{'iterations':>10}"
        row = f"{result.status.value:<12}{obj:<24}{result.stats.iterations:>10}"
        return header + "\n" + row + "\n"
    raise ValueError(f"unknown result format {format!r}")


# ---------------------------------------------------------------------------
# deterministic-model export


def export_counterpart(det: DeterministicModel) -> str:
    """Deterministic-model JSON with provenance back to source rows."""
    rowprov = det.provenance.get("rows", {})
    colprov = det.provenance.get("columns", {})
    columns = []
    for col in det.columns:
        entry = {
            "name": col.name,
            "domain": col.kind,
            "lower": None if col.lower == -INF else float(col.lower),
            "upper": None if col.upper == INF else float(col.upper),
        }
        if col.name in colprov:
            entry["source"] = colprov[col.name]
        columns.append(entry)
    rows = []
    for row in det.rows:
        entry = {
            "label": row.label,
            "sense": row.sense.value,
            "rhs": float(row.rhs),
            "coefficients": [[name, float(row.coefs[name])]
                             for name in sorted(row.coefs)],
        }
        if row.label in rowprov:
            entry["source"] = rowprov[row.label]
        rows.append(entry)
    conic = []
    for cr in det.conic_rows:
        entry = {
            "label": cr.label,
            "mean": [float(v) for v in cr.mean],
            "cov": [[float(v) for v in r] for r in cr.cov],
            "a_const": [float(v) for v in cr.a_const],
            "a_lin": {name: [float(v) for v in cr.a_lin[name]]
                      for name in sorted(cr.a_lin)},
            "f_const": float(cr.f_const),
            "f_lin": {name: float(cr.f_lin[name]) for name in sorted(cr.f_lin)},
        }
        if cr.label in rowprov:
            entry["source"] = rowprov[cr.label]
        conic.append(entry)
    doc = {
        "kind": det.provenance.get("kind", "deterministic"),
        "maximize": det.maximize,
        "objective": {
            "constant": float(det.obj_const),
            "coefficients": [[name, float(det.obj[name])] for name in sorted(det.obj)],
        },
        "columns": columns,
        "rows": rows,
        "conic_rows": conic,
    }
    return json.dumps(doc, indent=2) + "\n"


__all__ = [
    "FORMAT_VERSION",
    "emit_result",
    "export_counterpart",
    "parse_model",
    "serialize_model",
]
