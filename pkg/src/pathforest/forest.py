"""Acyclicity checking with a disjoint-set structure."""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Sequence
from typing import TypeVar

V = TypeVar("V", bound=Hashable)


class DisjointSet:
    """Union-find over arbitrary hashable items, union by size with path halving."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        self.size: dict = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        if x not in parent:
            self.add(x)
            return x
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        """Merge the sets of ``a`` and ``b``; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def count(self) -> int:
        return sum(1 for x, p in self.parent.items() if x == p)


def _tree_path(adj: dict, src, dst) -> list[tuple]:
    """Edges along the unique path from ``src`` to ``dst`` in a forest."""
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            break
        for v in adj.get(u, ()):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    path = []
    v = dst
    while prev[v] is not None:
        u = prev[v]
        path.append((u, v))
        v = u
    path.reverse()
    return path


def find_cycle(edges: Iterable[tuple[V, V]]) -> list[tuple[V, V]] | None:
    """First cycle closed while adding ``edges`` in order, as a closed walk.

    Returns ``None`` for a forest. A repeated edge or a self-loop counts as a cycle.
    """
    # Inlined union-find: this runs over every color class of every swept d.
    parent: dict = {}
    adj: dict = {}
    for a, b in edges:
        ra = parent.setdefault(a, a)
        while parent[ra] != ra:
            parent[ra] = parent[parent[ra]]
            ra = parent[ra]
        rb = parent.setdefault(b, b)
        while parent[rb] != rb:
            parent[rb] = parent[parent[rb]]
            rb = parent[rb]
        if ra == rb:
            if a == b:
                return [(a, b)]
            # The walk starts at b, returns to a along the tree, then closes with (a, b).
            return _tree_path(adj, b, a) + [(a, b)]
        parent[ra] = rb
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return None


def is_forest(vertices: Iterable[V], edges: Sequence[tuple[V, V]]) -> tuple[bool, list | None]:
    """``(True, None)`` for an acyclic edge list, else ``(False, cycle)``."""
    vertex_set = set(vertices)
    for a, b in edges:
        if a not in vertex_set or b not in vertex_set:
            raise ValueError(f"edge ({a}, {b}) leaves the vertex set")
    cycle = find_cycle(edges)
    return cycle is None, cycle
