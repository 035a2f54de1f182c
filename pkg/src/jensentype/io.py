"""JSON shape/function files and report serialization."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from . import zoo
from .functions import ConvexFunc, from_dict
from .shapes import Ball, Cone, HalfSpace, Parallelotope, Polytope, polytope_from_halfspaces, polytope_from_vertices


class InputError(ValueError):
    """Malformed shape or function input; the message names the field."""


def _field(d: dict, name: str, where: str):
    try:
        return d[name]
    except (KeyError, TypeError):
        raise InputError(f"{where}: missing field {name!r}") from None


def _array(value, name: str, where: str, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{where}: field {name!r} is not numeric") from None
    if arr.ndim != ndim:
        raise InputError(f"{where}: field {name!r} must be a {ndim}-d array")
    return arr


def shape_from_dict(d: dict):
    where = "shape"
    kind = _field(d, "kind", where)
    if kind == "polytope":
        return polytope_from_vertices(_array(_field(d, "vertices", where), "vertices", where, 2))
    if kind == "halfspaces":
        normals = _array(_field(d, "normals", where), "normals", where, 2)
        offsets = _array(_field(d, "offsets", where), "offsets", where, 1)
        if len(normals) != len(offsets):
            raise InputError(f"{where}: fields 'normals' and 'offsets' differ in length")
        return polytope_from_halfspaces([HalfSpace.from_raw(a, c) for a, c in zip(normals, offsets)])
    if kind == "parallelotope":
        return Parallelotope(_array(_field(d, "origin", where), "origin", where, 1),
                             _array(_field(d, "edges", where), "edges", where, 2))
    if kind == "ball":
        return Ball(int(_field(d, "dim", where)), _array(_field(d, "center", where), "center", where, 1),
                    float(_field(d, "radius", where)))
    if kind == "cone":
        return Cone(_array(_field(d, "baseVertices", where), "baseVertices", where, 2),
                    _array(_field(d, "apex", where), "apex", where, 1))
    if kind == "zoo":
        return zoo.zoo_shape(str(_field(d, "name", where)))
    raise InputError(f"{where}: unknown kind {kind!r}")


def shape_to_dict(shape) -> dict:
    if isinstance(shape, Polytope):
        return {"kind": "polytope", "vertices": shape.vertices.tolist()}
    if isinstance(shape, Parallelotope):
        return {"kind": "parallelotope", "origin": shape.origin.tolist(), "edges": shape.edges.tolist()}
    if isinstance(shape, Ball):
        return {"kind": "ball", "dim": shape.dim, "center": shape.center.tolist(), "radius": shape.radius}
    if isinstance(shape, Cone):
        return {"kind": "cone", "baseVertices": shape.base_vertices.tolist(), "apex": shape.apex.tolist()}
    raise TypeError(f"not a shape: {type(shape).__name__}")


def load_shape(spec: str):
    """``zoo:<name>``, a path to a JSON shape file, or inline JSON."""
    if spec.startswith("zoo:"):
        return zoo.zoo_shape(spec[4:])
    text = spec if spec.lstrip().startswith("{") else Path(spec).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"shape: invalid JSON ({exc})") from None
    return shape_from_dict(data)


def functions_from_list(items) -> list[ConvexFunc]:
    if not isinstance(items, list):
        raise InputError("functions: expected a JSON array")
    out = []
    for i, item in enumerate(items):
        try:
            out.append(from_dict(item))
        except KeyError as exc:
            raise InputError(f"functions[{i}]: missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise InputError(f"functions[{i}]: {exc}") from None
    return out


def load_functions(path: str) -> list[ConvexFunc]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"functions: invalid JSON ({exc})") from None
    return functions_from_list(data)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_default)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not serializable: {type(o).__name__}")


CSV_FIELDS = ["shape", "function", "bodyMean", "boundaryMean", "gap", "errorBound", "verdict"]


def report_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_FIELDS)
    for desc, g in report.results:
        w.writerow([report.shape, desc,
                    repr(g.body_mean.value) if g.body_mean else "",
                    repr(g.boundary_mean.value) if g.boundary_mean else "",
                    repr(g.gap), repr(g.gap_error_bound), g.verdict])
    return buf.getvalue()
