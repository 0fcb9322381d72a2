"""Coverage, monochromatic-forest and degree checks, diffs, sweeps and certificates."""

from __future__ import annotations

import gc
import os
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass

from . import __version__
from .coloring import ColoringRule, Rule, TableRule, color_of_edge, rule_name
from .construct import EdgeKey, Graph, PathEntry, build_paths, construct, scale_weights, weights
from .forest import DisjointSet, find_cycle
from .model import Color, Node, VariantConfig, WeightTriple, check_dim

SCHEMA_VERSION = 1
MAX_DEGREE = 3
WORKERS_ENV = "PATHFOREST_WORKERS"


class ResourceExhausted(RuntimeError):
    """A sweep ran out of memory or workers; not a property failure."""


def _node(n: Node) -> list[int]:
    return [n.i, n.j]


@dataclass(frozen=True)
class ColorSubgraphReport:
    color: Color
    edge_count: int
    is_forest: bool
    max_degree: int
    components: int
    cycle_witness: tuple[EdgeKey, ...] | None = None
    degree_witness: tuple[Node, int] | None = None

    @property
    def ok(self) -> bool:
        return self.is_forest and self.max_degree <= MAX_DEGREE

    def to_dict(self) -> dict:
        return {
            "color": int(self.color),
            "name": self.color.display,
            "edge_count": self.edge_count,
            "is_forest": self.is_forest,
            "max_degree": self.max_degree,
            "components": self.components,
            "cycle_witness": None
            if self.cycle_witness is None
            else [[_node(a), _node(b)] for a, b in self.cycle_witness],
            "degree_witness": None
            if self.degree_witness is None
            else {"node": _node(self.degree_witness[0]), "degree": self.degree_witness[1]},
        }


@dataclass(frozen=True)
class VerificationReport:
    d: int
    variant: VariantConfig
    rule: str
    coverage_uncovered: tuple[Node, ...]
    per_color: tuple[ColorSubgraphReport, ColorSubgraphReport, ColorSubgraphReport]
    vertex_count: int
    edge_count: int

    @property
    def passed(self) -> bool:
        return not self.coverage_uncovered and all(c.ok for c in self.per_color)

    @property
    def max_color_degree(self) -> int:
        return max(c.max_degree for c in self.per_color)

    def witness(self) -> dict | None:
        """First falsification found: uncovered targets, then cycles, then degrees."""
        if self.coverage_uncovered:
            return {
                "d": self.d,
                "kind": "coverage",
                "uncovered": [_node(n) for n in self.coverage_uncovered],
            }
        for c in self.per_color:
            if not c.is_forest:
                return {"d": self.d, "kind": "cycle", **_pick(c.to_dict(), "color", "name", "cycle_witness")}
        for c in self.per_color:
            if c.max_degree > MAX_DEGREE:
                return {"d": self.d, "kind": "degree", **_pick(c.to_dict(), "color", "name", "degree_witness")}
        return None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "variant": self.variant.label,
            "rule": self.rule,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "coverage_uncovered": [_node(n) for n in self.coverage_uncovered],
            "per_color": [c.to_dict() for c in self.per_color],
            "pass": self.passed,
        }


def _pick(doc: dict, *keys: str) -> dict:
    return {k: doc[k] for k in keys}


@dataclass(frozen=True)
class VariantDiff:
    added: tuple[PathEntry, ...]
    removed: tuple[PathEntry, ...]

    def to_dict(self) -> dict:
        def entry(e: PathEntry) -> dict:
            a, b = e.endpoints
            return {"target": _node(e.target), "mid": e.mid, "endpoints": [_node(a), _node(b)]}

        return {"added": [entry(e) for e in self.added], "removed": [entry(e) for e in self.removed]}


def color_classes(
    graph: Graph, rule: Rule, table: Mapping[Node, WeightTriple] | None = None
) -> tuple[list[EdgeKey], list[EdgeKey], list[EdgeKey]]:
    """Edges of each color ``m = 0, 1, 2``, in canonical edge order."""
    if table is None and rule.needs_weights:
        table = weights(graph.d, graph.variant)
    classes: tuple[list[EdgeKey], ...] = ([], [], [])
    if rule is ColoringRule.TARGET_DIFF:
        # Fast path for the default rule; same result as color_of_edge.
        for endpoints, targets in graph.edges:
            if not targets:
                raise ValueError(f"edge {endpoints} has no target to color by")
            for m in {(t.i - t.j) % 3 for t in targets}:
                classes[m].append(endpoints)
        return classes
    for edge in graph.edges:
        for m in color_of_edge(edge, rule, table):
            classes[m].append(edge.endpoints)
    return classes


def color_subgraph(
    graph: Graph, rule: Rule, table: Mapping[Node, WeightTriple] | None, m: int
) -> list[EdgeKey]:
    return color_classes(graph, rule, table)[m]


def analyze_subgraph(color: Color, edges: Sequence[EdgeKey]) -> ColorSubgraphReport:
    degree: dict[Node, int] = {}
    for a, b in edges:
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    cycle = find_cycle(edges)
    if cycle is None:
        components = len(degree) - len(edges)
    else:
        dsu = DisjointSet(degree)
        for a, b in edges:
            dsu.union(a, b)
        components = dsu.count()
    max_degree = max(degree.values(), default=0)
    degree_witness = None
    if max_degree > MAX_DEGREE:
        node = min(n for n, k in degree.items() if k == max_degree)
        degree_witness = (node, max_degree)
    return ColorSubgraphReport(
        color=color,
        edge_count=len(edges),
        is_forest=cycle is None,
        max_degree=max_degree,
        components=components,
        cycle_witness=None if cycle is None else tuple(cycle),
        degree_witness=degree_witness,
    )


def verify_graph(
    graph: Graph,
    uncovered: Sequence[Node],
    rule: Rule = ColoringRule.TARGET_DIFF,
    table: Mapping[Node, WeightTriple] | None = None,
) -> VerificationReport:
    classes = color_classes(graph, rule, table)
    per_color = tuple(analyze_subgraph(Color(m), classes[m]) for m in range(3))
    return VerificationReport(
        d=graph.d,
        variant=graph.variant,
        rule=rule_name(rule),
        coverage_uncovered=tuple(uncovered),
        per_color=per_color,
        vertex_count=len(graph.vertices),
        edge_count=len(graph.edges),
    )


def verify_construction(
    d: int,
    variant: VariantConfig,
    rule: Rule = ColoringRule.TARGET_DIFF,
    table: Mapping[Node, WeightTriple] | None = None,
    weight_scale: int = 1,
) -> VerificationReport:
    """Build, color and check one construction.

    ``table`` replaces the computed weights; ``weight_scale`` multiplies them.
    Neither can change a verdict unless the supports change.
    """
    graph, uncovered = construct(d, variant)
    if weight_scale != 1:
        table = scale_weights(table if table is not None else weights(d, variant), weight_scale)
    return verify_graph(graph, uncovered, rule, table)


def diff_variants(d: int, a: VariantConfig, b: VariantConfig) -> VariantDiff:
    """Entries present in ``b`` but not ``a`` (added) and vice versa (removed)."""
    check_dim(d)
    old = set(build_paths(d, a)[0])
    new = set(build_paths(d, b)[0])
    return VariantDiff(added=tuple(sorted(new - old)), removed=tuple(sorted(old - new)))


def _verify_one(args: tuple[int, VariantConfig, Rule, int]) -> VerificationReport:
    # Construction allocates only acyclic tuples; generational GC passes are pure overhead.
    enabled = gc.isenabled()
    gc.disable()
    try:
        d, variant, rule, scale = args
        return verify_construction(d, variant, rule, weight_scale=scale)
    finally:
        if enabled:
            gc.enable()


def worker_count(requested: int | None = None) -> int:
    if requested is None:
        requested = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, requested)


def sweep_reports(
    d_lo: int,
    d_hi: int,
    variant: VariantConfig,
    rule: Rule,
    workers: int | None = None,
    weight_scale: int = 1,
) -> list[VerificationReport]:
    check_dim(d_lo)
    if d_hi < d_lo:
        raise ValueError(f"empty range {d_lo}..{d_hi}")
    jobs = [(d, variant, rule, weight_scale) for d in range(d_lo, d_hi + 1)]
    n = worker_count(workers)
    try:
        if n == 1:
            return [_verify_one(job) for job in jobs]
        with ProcessPoolExecutor(max_workers=n) as pool:
            # map() yields in submission order, so results stay ascending in d.
            return list(pool.map(_verify_one, jobs, chunksize=4))
    except (MemoryError, BrokenProcessPool) as exc:
        raise ResourceExhausted(f"sweep {d_lo}..{d_hi} aborted: {exc!r}") from exc


def sweep(
    d_lo: int,
    d_hi: int,
    variant: VariantConfig,
    rule: Rule = ColoringRule.TARGET_DIFF,
    *,
    workers: int | None = None,
    explore_on_failure: bool = True,
    weight_scale: int = 1,
) -> dict:
    """Certificate for every ``d`` in ``d_lo..d_hi`` (inclusive)."""
    reports = sweep_reports(d_lo, d_hi, variant, rule, workers, weight_scale)
    failing = [r for r in reports if not r.passed]
    cert = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "d_range": [d_lo, d_hi],
        "variant": variant.label,
        "rule": rule_name(rule),
        "reports": [r.to_dict() for r in reports],
        "overall_pass": not failing,
        "failing_d": [r.d for r in failing],
        "first_witness": failing[0].witness() if failing else None,
        "rule_exploration": None,
    }
    if isinstance(rule, TableRule):
        cert["rule_table"] = rule.to_dict()
    if failing and explore_on_failure:
        cert["rule_exploration"] = rule_exploration(d_lo, d_hi, variant, workers=workers)
    return cert


def rule_exploration(
    d_lo: int, d_hi: int, variant: VariantConfig, *, workers: int | None = None
) -> dict:
    """Sweep under every built-in rule and summarize which ones hold."""
    summary = {}
    for rule in ColoringRule:
        cert = sweep(d_lo, d_hi, variant, rule, workers=workers, explore_on_failure=False)
        summary[rule.value] = {
            "overall_pass": cert["overall_pass"],
            "failing_d": cert["failing_d"],
            "first_witness": cert["first_witness"],
        }
    return {
        "d_range": [d_lo, d_hi],
        "variant": variant.label,
        "passing_rules": [name for name, s in summary.items() if s["overall_pass"]],
        "rules": summary,
    }
