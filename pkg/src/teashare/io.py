"""JSON reading and writing for graphs, weights, instances and move files.

Rationals are always written as lowest-terms strings. On input, weights may be
strings ("300", "1/3", "0.125") or JSON numbers; JSON decimals are read
through ``Decimal`` so "0.1" means exactly 1/10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .dynamics import SharingMove, Weights
from .graph import Graph, GraphError
from .rational import format_rational, to_rational


class InputError(ValueError):
    """Malformed file contents (bad JSON, wrong shape, unknown vertex, bad rational)."""


@dataclass
class Instance:
    graph: Graph
    weights: Weights
    target: str | None = None
    source: str | None = None


def loads(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def load_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dumps(obj: Any) -> str:
    """Deterministic JSON: Fractions become rational strings, key order is preserved."""
    return json.dumps(_plain(obj), indent=2, ensure_ascii=False)


def _plain(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Weights):
        return {k: format_rational(x) for k, x in obj.items()}
    if isinstance(obj, SharingMove):
        return list(obj.vertices)
    if isinstance(obj, dict):
        return {str(k): _plain(x) for k, x in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def _rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int, Decimal)):
        raise InputError(f"{where}: expected a rational string, got {x!r}")
    try:
        return to_rational(x)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def _names(x, where: str) -> list[str]:
    if not isinstance(x, list) or not all(isinstance(n, str) for n in x):
        raise InputError(f"{where}: expected an array of vertex names")
    return x


def graph_from_json(obj) -> Graph:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise InputError('graph must be an object with "vertices" and "edges"')
    vertices = _names(obj["vertices"], "vertices")
    edges = obj.get("edges", [])
    if not isinstance(edges, list):
        raise InputError("edges must be an array")
    pairs = []
    for i, e in enumerate(edges):
        e = _names(e, f"edge {i}")
        if len(e) != 2:
            raise InputError(f"edge {i}: expected 2 endpoints, got {len(e)}")
        pairs.append(e)
    try:
        return Graph(vertices, pairs)
    except GraphError as exc:
        raise InputError(str(exc)) from exc


def graph_to_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edge_list()]}


def weights_from_json(g: Graph, obj, *, signed: bool = False) -> Weights:
    if not isinstance(obj, dict):
        raise InputError("weights must be an object mapping vertex to rational")
    vals = {k: _rational(x, f"weight of {k!r}") for k, x in obj.items()}
    try:
        return Weights.from_mapping(g, vals, signed=signed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def weights_to_json(w: Weights) -> dict:
    return {k: format_rational(x) for k, x in w.items()}


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict) or "graph" not in obj or "weights" not in obj:
        raise InputError('instance must be an object with "graph" and "weights"')
    g = graph_from_json(obj["graph"])
    w = weights_from_json(g, obj["weights"])
    ends = {}
    for key in ("target", "source"):
        name = obj.get(key)
        if name is not None and (not isinstance(name, str) or name not in g):
            raise InputError(f"{key} {name!r} is not a vertex")
        ends[key] = name
    return Instance(g, w, **ends)


def instance_to_json(inst: Instance) -> dict:
    out = {"graph": graph_to_json(inst.graph), "weights": weights_to_json(inst.weights)}
    if inst.target is not None:
        out["target"] = inst.target
    if inst.source is not None:
        out["source"] = inst.source
    return out


def load_instance(path) -> Instance:
    return instance_from_json(load_json(path))


def moves_from_json(obj) -> list[list[str]]:
    """Raw vertex lists; validity against a graph is checked when the moves are applied."""
    if not isinstance(obj, list):
        raise InputError("a move file is an array of moves")
    return [_names(m, f"move {i}") for i, m in enumerate(obj)]


def moves_to_json(seq: Iterable) -> list[list[str]]:
    return [list(m.vertices) if isinstance(m, SharingMove) else list(m) for m in seq]


def is_quasi_file(obj) -> bool:
    return isinstance(obj, list) and bool(obj) and all(isinstance(m, dict) for m in obj)


def quasi_from_json(obj) -> list[tuple[str, str, Fraction]]:
    if not isinstance(obj, list):
        raise InputError("a quasi move file is an array of {edge, s} objects")
    out = []
    for i, m in enumerate(obj):
        if not isinstance(m, dict) or "edge" not in m or "s" not in m:
            raise InputError(f'quasi move {i}: expected {{"edge": [x, y], "s": "p/q"}}')
        e = _names(m["edge"], f"quasi move {i} edge")
        if len(e) != 2:
            raise InputError(f"quasi move {i}: an edge has 2 endpoints")
        out.append((e[0], e[1], _rational(m["s"], f"quasi move {i} amount")))
    return out


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture file, e.g. ``fixture_path("nested_tree.json")``."""
    path = Path(__file__).with_name("fixtures") / name
    if not path.is_file():
        raise InputError(f"no fixture named {name!r}")
    return path


def load_fixture(name: str) -> Instance:
    return load_instance(fixture_path(name))
