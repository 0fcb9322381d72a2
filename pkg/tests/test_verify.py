import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from oracles import dfs_is_forest, walk_is_closed_cycle
from pathforest import verify as verify_mod
from pathforest.coloring import ColoringRule
from pathforest.construct import PathEntry, construct, scale_weights, weights
from pathforest.model import ALTERNATIVE, ALTERNATIVE_KEEP_FLOOR, CORRECTED, ORIGINAL, VARIANTS, Node
from pathforest.verify import (
    ResourceExhausted,
    analyze_subgraph,
    color_classes,
    color_subgraph,
    diff_variants,
    rule_exploration,
    sweep,
    verify_construction,
    verify_graph,
)

N = Node
TD = ColoringRule.TARGET_DIFF


def test_color_subgraph_d3():
    g, _ = construct(3, CORRECTED)
    assert color_subgraph(g, TD, None, 0) == [(N(1, 2), N(2, 1)), (N(2, 3), N(3, 2))]
    assert sorted(color_subgraph(g, TD, None, 2)) == sorted(
        [(N(1, 2), N(2, 2)), (N(2, 2), N(2, 3)), (N(2, 1), N(3, 2))]
    )


def test_color_subgraph_d1():
    g, _ = construct(1, CORRECTED)
    assert all(color_subgraph(g, TD, None, m) == [] for m in range(3))


def test_verify_d3():
    r = verify_construction(3, CORRECTED)
    assert r.passed
    assert r.max_color_degree == 2
    assert r.witness() is None


@pytest.mark.parametrize("variant", VARIANTS)
def test_verify_d1_vacuous(variant):
    r = verify_construction(1, variant)
    assert r.passed and r.edge_count == 0 and r.vertex_count == 0


def test_verify_d6_and_corner_degrees():
    r = verify_construction(6, CORRECTED)
    assert r.passed
    g, _ = construct(6, CORRECTED)
    classes = color_classes(g, TD)
    corner = N(5, 5)
    deg = {m: sum(corner in e for e in classes[m]) for m in range(3)}
    assert deg == {0: 0, 1: 2, 2: 2}
    # Whole-graph degree at the corner is 4; the bound holds per color only.
    assert g.degrees()[corner] == 4


@pytest.mark.parametrize("d", range(3, 51))
def test_original_fails_coverage(d):
    r = verify_construction(d, ORIGINAL)
    assert not r.passed
    assert r.coverage_uncovered == (N(d - 1, d), N(d, d - 1))
    assert r.witness()["kind"] == "coverage"


def test_keep_floor_alternative_fails_only_at_d2():
    assert verify_construction(2, ALTERNATIVE_KEEP_FLOOR).coverage_uncovered == (N(1, 2), N(2, 1))
    assert all(verify_construction(d, ALTERNATIVE_KEEP_FLOOR).passed for d in range(3, 30))


def test_diff_d6():
    diff = diff_variants(6, ORIGINAL, CORRECTED)
    assert diff.added == (PathEntry(N(5, 6), 5), PathEntry(N(6, 5), 5))
    assert {frozenset(e.endpoints) for e in diff.added} == {
        frozenset({N(6, 5), N(5, 5)}),
        frozenset({N(5, 5), N(5, 6)}),
    }
    assert diff.removed == ()


@pytest.mark.parametrize("a", VARIANTS)
@pytest.mark.parametrize("b", VARIANTS)
def test_diff_d1(a, b):
    diff = diff_variants(1, a, b)
    assert diff.added == diff.removed == ()


def test_diff_d2():
    diff = diff_variants(2, ORIGINAL, CORRECTED)
    assert {(e.target, frozenset(e.endpoints)) for e in diff.added} == {
        (N(2, 1), frozenset({N(2, 1), N(1, 1)})),
        (N(1, 2), frozenset({N(1, 1), N(1, 2)})),
    }
    assert diff.removed == ()


@pytest.mark.parametrize("d", range(2, 65))
def test_diff_original_to_corrected(d):
    diff = diff_variants(d, ORIGINAL, CORRECTED)
    assert [e.target for e in diff.added] == [N(d - 1, d), N(d, d - 1)]
    assert diff.removed == ()


def test_diff_reverse_is_removal():
    diff = diff_variants(6, CORRECTED, ORIGINAL)
    assert diff.added == () and len(diff.removed) == 2


def test_sweep_corrected_1_12():
    cert = sweep(1, 12, CORRECTED)
    assert cert["overall_pass"]
    assert [r["d"] for r in cert["reports"]] == list(range(1, 13))
    assert cert["first_witness"] is None and cert["rule_exploration"] is None


def test_sweep_original_2_10():
    cert = sweep(2, 10, ORIGINAL)
    assert not cert["overall_pass"]
    assert cert["failing_d"] == list(range(2, 11))
    assert cert["first_witness"] == {"d": 2, "kind": "coverage", "uncovered": [[1, 2], [2, 1]]}
    assert cert["rule_exploration"] is not None


@pytest.mark.parametrize("variant", VARIANTS)
def test_sweep_single_vacuous(variant):
    cert = sweep(1, 1, variant)
    assert cert["overall_pass"] and len(cert["reports"]) == 1


def test_sweep_rejects_bad_range():
    with pytest.raises(ValueError):
        sweep(0, 3, CORRECTED)
    with pytest.raises(ValueError):
        sweep(5, 3, CORRECTED)


def test_sweep_is_deterministic_and_worker_independent():
    a = json.dumps(sweep(1, 15, CORRECTED))
    b = json.dumps(sweep(1, 15, CORRECTED))
    c = json.dumps(sweep(1, 15, CORRECTED, workers=2))
    assert a == b == c


def test_sweep_resource_exhaustion_is_distinct(monkeypatch):
    def boom(*args, **kwargs):
        raise MemoryError

    monkeypatch.setattr(verify_mod, "verify_construction", boom)
    with pytest.raises(ResourceExhausted):
        sweep(1, 3, CORRECTED)


def test_rule_exploration_corrected_1_6():
    summary = rule_exploration(1, 6, CORRECTED)
    assert "target-diff" in summary["passing_rules"]
    assert not summary["rules"]["shared-support"]["overall_pass"]
    assert 6 in summary["rules"]["shared-support"]["failing_d"]
    # The corner shares residue 0 with all four of its neighbors.
    g, _ = construct(6, CORRECTED)
    red = color_classes(g, ColoringRule.SHARED_SUPPORT)[0]
    assert sum(N(5, 5) in e for e in red) == 4
    report = verify_construction(6, CORRECTED, ColoringRule.SHARED_SUPPORT)
    assert report.per_color[0].max_degree == 4
    assert report.per_color[0].degree_witness is not None


def test_rule_exploration_trivial_and_alternative():
    assert rule_exploration(1, 1, CORRECTED)["passing_rules"] == [r.value for r in ColoringRule]
    assert "target-diff" in rule_exploration(1, 6, ALTERNATIVE)["passing_rules"]


def test_cycle_and_degree_witnesses_are_concrete():
    r = verify_construction(6, CORRECTED, ColoringRule.SHARED_SUPPORT)
    g, _ = construct(6, CORRECTED)
    classes = color_classes(g, ColoringRule.SHARED_SUPPORT)
    for c in r.per_color:
        if not c.is_forest:
            assert walk_is_closed_cycle(list(c.cycle_witness), classes[c.color])
        if c.degree_witness:
            node, k = c.degree_witness
            assert sum(node in e for e in classes[c.color]) == k > 3


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("rule", list(ColoringRule))
@pytest.mark.parametrize("d", [2, 3, 5, 8, 13])
def test_report_fields_match_networkx(d, variant, rule):
    g, uncovered = construct(d, variant)
    r = verify_graph(g, uncovered, rule)
    classes = color_classes(g, rule)
    for c in r.per_color:
        edges = classes[c.color]
        h = nx.Graph(edges)
        assert c.edge_count == len(edges)
        assert c.is_forest == dfs_is_forest(edges) == (c.cycle_witness is None)
        assert c.components == nx.number_connected_components(h)
        assert c.max_degree == max((k for _, k in h.degree()), default=0)
        if c.is_forest:
            assert c.components == h.number_of_nodes() - c.edge_count
    assert r.passed == (not uncovered and all(c.is_forest and c.max_degree <= 3 for c in r.per_color))


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 40), variant=st.sampled_from(VARIANTS))
def test_target_diff_partitions_edges(d, variant):
    g, _ = construct(d, variant)
    classes = color_classes(g, TD)
    flat = [e for cls in classes for e in cls]
    assert sorted(flat) == sorted(e.endpoints for e in g.edges)
    assert len(flat) == len(set(flat))


@settings(max_examples=30, deadline=None)
@given(d=st.integers(1, 30), factor=st.integers(2, 10**9), rule=st.sampled_from(list(ColoringRule)))
def test_scaling_leaves_reports_unchanged(d, factor, rule):
    g, uncovered = construct(d, CORRECTED)
    w = weights(d, CORRECTED)
    plain = verify_graph(g, uncovered, rule, w)
    scaled = verify_graph(g, uncovered, rule, scale_weights(w, factor))
    assert plain == scaled


def test_analyze_subgraph_empty():
    from pathforest.model import Color

    r = analyze_subgraph(Color.RED, [])
    assert (r.edge_count, r.is_forest, r.max_degree, r.components) == (0, True, 0, 0)


@pytest.mark.parametrize(
    "name, lo, hi, variant",
    [("cert_corrected-s1_1-4.json", 1, 4, CORRECTED), ("cert_original_2-3.json", 2, 3, ORIGINAL)],
)
def test_certificate_golden(name, lo, hi, variant):
    from conftest import GOLDEN
    from pathforest.interchange import dumps

    assert dumps(sweep(lo, hi, variant)) == (GOLDEN / name).read_text()
