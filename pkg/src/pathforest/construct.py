"""Two-path entries, the graph they induce, and the weight table."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import NamedTuple

from .model import (
    MidRule,
    Node,
    VariantConfig,
    VariantKind,
    WeightTriple,
    check_dim,
    grid,
    index_sets,
    sign_half,
)

EdgeKey = tuple[Node, Node]


def edge_key(a: Node, b: Node) -> EdgeKey:
    """Canonical form of the unordered pair ``{a, b}``."""
    return (a, b) if a <= b else (b, a)


class PathEntry(NamedTuple):
    """Target ``(i, l)`` reached through the two-step path ``(i, j) -- (j, l)``."""

    target: Node
    mid: int

    @property
    def endpoints(self) -> EdgeKey:
        return edge_key(Node(self.target.i, self.mid), Node(self.mid, self.target.j))


class Edge(NamedTuple):
    endpoints: EdgeKey
    targets: tuple[Node, ...]


@dataclass(frozen=True)
class Graph:
    """Vertex set plus deduplicated edges, each carrying the targets it serves."""

    d: int
    variant: VariantConfig
    vertices: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def entries(self) -> list[PathEntry]:
        """Recover the target-indexed entries from the edge records."""
        out = []
        for edge in self.edges:
            a, b = edge.endpoints
            for t in edge.targets:
                # Shared coordinate of the two endpoints is the midpoint.
                mid = a.j if (a.i, b.j) == t else b.j
                out.append(PathEntry(t, mid))
        out.sort()
        return out

    def degrees(self) -> dict[Node, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for edge in self.edges:
            a, b = edge.endpoints
            deg[a] += 1
            deg[b] += 1
        return deg


def _ceil_mid(i: int, l: int) -> int:
    return (i + l + 1) // 2 + (i == l)


def mid_for_target(target: Node, d: int, variant: VariantConfig) -> int | None:
    """Midpoint chosen for ``target``, or ``None`` if the path leaves the vertex set.

    The floor exception applies only to the two targets with ``{i, l} = {d-1, d}``.
    """
    check_dim(d)
    i, l = target
    if not (1 <= i <= d and 1 <= l <= d) or (i == d and l == d):
        raise ValueError(f"{target} is not a target for d={d}")
    floor_exception = variant.kind is VariantKind.CORRECTED or (
        variant.kind is VariantKind.ALTERNATIVE
        and variant.alt_mid_rule is MidRule.KEEP_FLOOR_EXCEPTION
    )
    if floor_exception and {i, l} == {d - 1, d}:
        j = (i + l) // 2
    else:
        j = _ceil_mid(i, l)
    skip = variant.excluded_vertex(d)
    if j > d or (i, j) == skip or (j, l) == skip:
        return None
    return j


def build_paths(d: int, variant: VariantConfig) -> tuple[list[PathEntry], list[Node]]:
    """One entry per servable target plus the list of targets left uncovered.

    Same rule as :func:`mid_for_target`, unrolled over all targets.
    """
    _, targets = index_sets(d, variant)
    floor_exception = variant.kind is VariantKind.CORRECTED or (
        variant.kind is VariantKind.ALTERNATIVE
        and variant.alt_mid_rule is MidRule.KEEP_FLOOR_EXCEPTION
    )
    skip = variant.excluded_vertex(d)
    entries: list[PathEntry] = []
    uncovered: list[Node] = []
    for t in targets:
        i, l = t
        if floor_exception and i + l == 2 * d - 1 and abs(i - l) == 1:
            j = d - 1
        else:
            j = (i + l + 1) // 2 + (i == l)
        if j > d or (i, j) == skip or (j, l) == skip:
            uncovered.append(t)
        else:
            entries.append(PathEntry(t, j))
    return entries, uncovered


def build_graph(
    entries: Iterable[PathEntry], vertices: Iterable[Node], *, d: int, variant: VariantConfig
) -> Graph:
    vertex_tuple = tuple(sorted(vertices))
    present = set(vertex_tuple)
    cells = grid(d)
    # Edge keys are ints a_id * n + b_id with a_id < b_id; their order matches (a, b) order.
    n = d * d
    served: dict[int, list[Node]] = {}
    for t, j in entries:
        a_id = (t[0] - 1) * d + j - 1
        b_id = (j - 1) * d + t[1] - 1
        if not (0 <= a_id < n and 0 <= b_id < n):
            raise ValueError(f"path for target {t} leaves the grid")
        key = a_id * n + b_id if a_id < b_id else b_id * n + a_id
        if key in served:
            served[key].append(t)
        else:
            served[key] = [t]
    edges = []
    for key in sorted(served):
        a, b = cells[key // n], cells[key % n]
        if a not in present or b not in present:
            raise ValueError(f"edge ({a}, {b}) has an endpoint outside the vertex set")
        ts = served[key]
        edges.append(Edge((a, b), tuple(ts) if len(ts) == 1 else tuple(sorted(ts))))
    return Graph(d, variant, vertex_tuple, tuple(edges))


def construct(d: int, variant: VariantConfig) -> tuple[Graph, list[Node]]:
    """Build the graph for ``(d, variant)``; also returns uncovered targets."""
    vertices, _ = index_sets(d, variant)
    entries, uncovered = build_paths(d, variant)
    return build_graph(entries, vertices, d=d, variant=variant), uncovered


def base_weight(node: Node) -> WeightTriple:
    diff = node.i - node.j
    k = abs(diff)
    s = sign_half(diff)
    w = [0, 0, 0]
    w[diff % 3] = 5 ** (k + 1)
    w[(diff - s) % 3] = 3 * 5**k
    # The remaining residue (diff + s) stays zero.
    return WeightTriple(*w)


def overrides(d: int) -> dict[Node, WeightTriple]:
    """Redefined triples for the corrected construction (needs ``d >= 2``)."""
    if d < 2:
        return {}
    return {
        Node(d - 1, d - 1): WeightTriple(m0=15, m1=0, m2=15),
        Node(d - 1, d): WeightTriple(m0=25, m1=0, m2=20),
        Node(d, d - 1): WeightTriple(m0=3, m1=25, m2=0),
    }


def weights(d: int, variant: VariantConfig) -> dict[Node, WeightTriple]:
    """Weight table over the variant's vertex set."""
    vertices, _ = index_sets(d, variant)
    table = {n: base_weight(n) for n in vertices}
    if variant.kind is VariantKind.CORRECTED:
        table.update(overrides(d))
    return table


def scale_weights(table: Mapping[Node, WeightTriple], factor: int) -> dict[Node, WeightTriple]:
    if factor < 1:
        raise ValueError("scale factor must be a positive integer")
    return {n: w.scaled(factor) for n, w in table.items()}
