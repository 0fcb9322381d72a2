"""Versioned JSON documents for graphs and certificates."""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from . import __version__
from .coloring import ColoringRule, Rule, TableRule, rule_name
from .construct import Edge, Graph, edge_key
from .model import Node, VariantConfig, WeightTriple

GRAPH_SCHEMA_VERSION = 1
GRAPH_KIND = "pathforest-graph"


class DocumentError(ValueError):
    """A graph or certificate document is malformed; ``where`` locates the problem."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def dumps(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Replace ``path`` with ``text`` so readers never see a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def graph_to_dict(
    graph: Graph,
    table: Mapping[Node, WeightTriple],
    rule: Rule = ColoringRule.TARGET_DIFF,
    uncovered: list[Node] | tuple[Node, ...] = (),
) -> dict:
    doc = {
        "schema_version": GRAPH_SCHEMA_VERSION,
        "kind": GRAPH_KIND,
        "tool_version": __version__,
        "d": graph.d,
        "variant": graph.variant.label,
        "rule": rule_name(rule),
        "vertices": [[n.i, n.j] for n in graph.vertices],
        "edges": [
            {
                "endpoints": [[a.i, a.j], [b.i, b.j]],
                "targets": [[t.i, t.j] for t in edge.targets],
            }
            for edge in graph.edges
            for a, b in [edge.endpoints]
        ],
        "uncovered": [[t.i, t.j] for t in uncovered],
        # Decimal strings: weights grow like 5**d and exceed 64-bit range quickly.
        "weights": [
            {"node": [n.i, n.j], "m": [str(table[n][m]) for m in range(3)]}
            for n in sorted(table)
        ],
    }
    if isinstance(rule, TableRule):
        doc["rule_table"] = rule.to_dict()
    return doc


def write_graph(graph, table, rule=ColoringRule.TARGET_DIFF, uncovered=()) -> str:
    return dumps(graph_to_dict(graph, table, rule, uncovered))


def _node(value: Any, d: int, where: str) -> Node:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, int) and not isinstance(x, bool) for x in value)
    ):
        raise DocumentError(where, f"expected a node [i, j], got {value!r}")
    i, j = value
    if not (1 <= i <= d and 1 <= j <= d):
        raise DocumentError(where, f"node ({i},{j}) is outside 1..{d}")
    return Node(i, j)


def _field(doc: Mapping, key: str, kind: type, where: str = "$") -> Any:
    if key not in doc:
        raise DocumentError(where, f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise DocumentError(f"{where}.{key}", f"expected {kind.__name__}")
    return value


def graph_from_dict(doc: Any) -> tuple[Graph, dict[Node, WeightTriple], dict]:
    """Parse and validate a graph document. Returns ``(graph, weights, metadata)``."""
    if not isinstance(doc, dict):
        raise DocumentError("$", "document must be a JSON object")
    version = _field(doc, "schema_version", int)
    if version != GRAPH_SCHEMA_VERSION:
        raise DocumentError("$.schema_version", f"unsupported version {version}")
    if doc.get("kind") != GRAPH_KIND:
        raise DocumentError("$.kind", f"expected {GRAPH_KIND!r}")
    d = _field(doc, "d", int)
    if d < 1:
        raise DocumentError("$.d", "dimension must be >= 1")
    try:
        variant = VariantConfig.parse(_field(doc, "variant", str))
    except ValueError as exc:
        raise DocumentError("$.variant", str(exc)) from None

    vertices = [_node(v, d, f"$.vertices[{k}]") for k, v in enumerate(_field(doc, "vertices", list))]
    vertex_set = set(vertices)
    if len(vertex_set) != len(vertices):
        raise DocumentError("$.vertices", "duplicate vertex")

    edges = []
    seen = set()
    for k, raw in enumerate(_field(doc, "edges", list)):
        where = f"$.edges[{k}]"
        if not isinstance(raw, dict):
            raise DocumentError(where, "expected an object")
        ends = _field(raw, "endpoints", list, where)
        if len(ends) != 2:
            raise DocumentError(f"{where}.endpoints", "expected two endpoints")
        a, b = (_node(e, d, f"{where}.endpoints[{x}]") for x, e in enumerate(ends))
        for x, n in enumerate((a, b)):
            if n not in vertex_set:
                raise DocumentError(f"{where}.endpoints[{x}]", f"{n} is not a vertex")
        key = edge_key(a, b)
        if key in seen:
            raise DocumentError(where, f"duplicate edge {a} -- {b}")
        seen.add(key)
        targets = tuple(
            _node(t, d, f"{where}.targets[{x}]")
            for x, t in enumerate(_field(raw, "targets", list, where))
        )
        edges.append(Edge(key, targets))
    edges.sort()

    table: dict[Node, WeightTriple] = {}
    for k, raw in enumerate(_field(doc, "weights", list)):
        where = f"$.weights[{k}]"
        if not isinstance(raw, dict):
            raise DocumentError(where, "expected an object")
        n = _node(_field(raw, "node", list, where), d, f"{where}.node")
        values = _field(raw, "m", list, where)
        if len(values) != 3:
            raise DocumentError(f"{where}.m", "expected three values")
        try:
            triple = WeightTriple(*(int(v) for v in values))
        except (TypeError, ValueError):
            raise DocumentError(f"{where}.m", "weights must be decimal integers") from None
        if min(triple) < 0:
            raise DocumentError(f"{where}.m", "weights must be nonnegative")
        table[n] = triple
    if set(table) != vertex_set:
        missing = sorted(vertex_set - set(table))
        extra = sorted(set(table) - vertex_set)
        raise DocumentError("$.weights", f"must cover exactly the vertices (missing {missing}, extra {extra})")

    graph = Graph(d, variant, tuple(sorted(vertices)), tuple(edges))
    uncovered = [
        _node(t, d, f"$.uncovered[{k}]") for k, t in enumerate(doc.get("uncovered", []))
    ]
    meta = {
        "tool_version": doc.get("tool_version"),
        "rule": doc.get("rule", ColoringRule.TARGET_DIFF.value),
        "rule_table": doc.get("rule_table"),
        "uncovered": uncovered,
    }
    return graph, table, meta


def read_graph(text: str) -> tuple[Graph, dict[Node, WeightTriple], dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return graph_from_dict(doc)


def rule_from_meta(meta: Mapping) -> Rule:
    if meta.get("rule_table"):
        return TableRule.from_dict(meta["rule_table"])
    return ColoringRule(meta["rule"])
