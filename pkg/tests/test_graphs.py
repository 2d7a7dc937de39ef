from __future__ import annotations

import pytest

from jacstab import (MarkedDualGraph, NodeTypeLabel, PreconditionError,
                     ValidationError, admissible_labels, boundary_degree,
                     node_type, stabilize_forgetting, subcurve_invariants)
from jacstab.graphs import designated_side, proper_subcurves

from conftest import bridge_g3, chain_111, marked_chain, theta


# -- validation --------------------------------------------------------------

def test_validate_two_vertex_genus_2():
    g = MarkedDualGraph.build([("a", 1), ("b", 1)], [("a", "b")])
    assert g.genus == 2


def test_validate_rejects_unstable_point():
    with pytest.raises(ValidationError, match="unstable"):
        MarkedDualGraph.build([("a", 0)], [])


def test_validate_theta_is_stable():
    g = theta()
    assert g.genus == 2
    assert all(g.vertex_stability_margin(v) == 1 for v in g.vertex_ids)


def test_validate_rejects_disconnected():
    with pytest.raises(ValidationError, match="disconnected"):
        MarkedDualGraph.build([("a", 1), ("b", 1)], [],
                              markings={"1": "a", "2": "b"})


def test_validate_rejects_empty_graph():
    with pytest.raises(ValidationError, match="disconnected"):
        MarkedDualGraph.build([], [])


def test_validate_rejects_duplicate_marking():
    with pytest.raises(ValidationError, match="duplicate"):
        MarkedDualGraph(vertices=(("a", 1),), edges=(),
                        markings=(("1", "a"), ("1", "a"))).validate()


def test_validate_reports_every_violation():
    graph = MarkedDualGraph(vertices=(("a", -1), ("a", 2)), edges=(("a", "zz"),))
    with pytest.raises(ValidationError) as info:
        graph.validate()
    message = str(info.value)
    assert "duplicate vertex ids" in message
    assert "negative genus" in message
    assert "unknown vertex" in message


# -- subcurve invariants ------------------------------------------------------

def test_subcurve_bridge():
    inv = subcurve_invariants(bridge_g3(), {"v1"})
    assert (inv.k, inv.w, inv.genus) == (1, 1, 1)


def test_subcurve_theta():
    inv = subcurve_invariants(theta(), {"v1"})
    assert (inv.k, inv.w, inv.genus) == (3, 1, 0)


def test_subcurve_disconnected_additive():
    inv = subcurve_invariants(chain_111(), {"v1", "v3"})
    assert inv.k == 2
    assert inv.w == 2
    assert len(inv.components) == 2


def test_subcurve_rejects_improper():
    with pytest.raises(ValidationError):
        subcurve_invariants(theta(), set())
    with pytest.raises(ValidationError):
        subcurve_invariants(theta(), {"v1", "v2"})


def test_subcurve_complement_identities(small_corpora):
    for _, _, graphs in small_corpora:
        for graph in graphs:
            two_g = 2 * graph.genus - 2
            ids = set(graph.vertex_ids)
            for Y in proper_subcurves(graph, connected_only=False):
                a = subcurve_invariants(graph, Y)
                b = subcurve_invariants(graph, ids - Y)
                assert a.k == b.k
                assert a.w + b.w == two_g
                # additivity over components (no edge joins two components
                # of the same subset, so k splits exactly)
                parts = [subcurve_invariants(graph, c) for c in a.components]
                assert sum(p.k for p in parts) == a.k
                assert sum(p.w for p in parts) == a.w
                for p in parts:
                    assert p.w == 2 * p.genus - 2 + p.k


# -- node types ---------------------------------------------------------------

def test_node_type_theta_nonseparating():
    assert node_type(theta(), 0) is None
    assert node_type(theta(), 2) is None


def test_node_type_marked_bridge():
    g = MarkedDualGraph.build([("v1", 1), ("v2", 1)], [("v1", "v2")],
                              markings={"1": "v1", "2": "v2"})
    label = node_type(g, 0)
    assert label == NodeTypeLabel.of(1, ["1"])
    assert designated_side(g, 0) == frozenset({"v1"})


def test_node_type_smaller_genus_side():
    label = node_type(chain_111(), 1)  # edge v2-v3
    assert label == NodeTypeLabel.of(1, [])
    assert designated_side(chain_111(), 1) == frozenset({"v3"})


def test_node_type_unknown_edge():
    with pytest.raises(ValidationError, match="unknown edge"):
        node_type(theta(), 5)


def test_node_type_self_symmetric_has_no_side():
    g = MarkedDualGraph.build([("a", 1), ("b", 1)], [("a", "b")])
    assert node_type(g, 0) == NodeTypeLabel.of(1, [])
    assert designated_side(g, 0) is None


def test_admissible_labels_exclude_unstable_and_symmetric():
    # genus 2, no markings: only the (1, {}) split would be admissible but
    # it is self-symmetric, so nothing remains
    assert admissible_labels(2, []) == ()
    # genus 3, no markings: exactly (1, {})
    assert admissible_labels(3, []) == (NodeTypeLabel.of(1, []),)
    # genus 2 with two markings: (0,{1,2}), (1,{1}), (1,{1,2})
    assert admissible_labels(2, ["1", "2"]) == (
        NodeTypeLabel.of(0, ["1", "2"]),
        NodeTypeLabel.of(1, ["1"]),
        NodeTypeLabel.of(1, ["1", "2"]),
    )


# -- boundary degrees ----------------------------------------------------------

def test_boundary_degree_single_node():
    label = NodeTypeLabel.of(1, [])
    g = bridge_g3()
    assert boundary_degree(g, {"v1"}, label) == 1
    assert boundary_degree(g, {"v2"}, label) == -1


def test_boundary_degree_chain_both_edges():
    # chain of three genus-1 vertices, no markings, total genus 3:
    # both edges are separating of type (1, {}); middle vertex sits on the
    # large side of each.
    g = chain_111()
    label = NodeTypeLabel.of(1, [])
    degrees = {v: boundary_degree(g, {v}, label) for v in g.vertex_ids}
    assert degrees == {"v1": 1, "v2": -2, "v3": 1}
    assert sum(degrees.values()) == 0


def test_boundary_degree_absent_type_is_zero():
    g = bridge_g3()
    # genus 3 admits only (1, {}) among separating types on this graph;
    # a different admissible label never occurs as an edge type
    label = NodeTypeLabel.of(1, [])
    g2 = MarkedDualGraph.build([("v1", 1), ("v2", 2)], [("v1", "v2")] * 2)
    # two parallel edges: no separating nodes at all
    assert boundary_degree(g2, {"v1"}, label) == 0
    assert boundary_degree(g, {"v1", "v2"} - {"v2"}, label) == 1


def test_boundary_degree_rejects_inadmissible():
    with pytest.raises(ValidationError, match="inadmissible"):
        boundary_degree(theta(), {"v1"}, NodeTypeLabel.of(1, []))  # self-symmetric for g=2


def test_boundary_degree_total_zero(small_corpora):
    for genus, labels, graphs in small_corpora:
        for graph in graphs:
            for label in admissible_labels(genus, labels):
                total = sum(boundary_degree(graph, {v}, label)
                            for v in graph.vertex_ids)
                assert total == 0


# -- forgetting a marking -------------------------------------------------------

def test_stabilize_case_a():
    g = marked_chain()
    out, vmap, report = stabilize_forgetting(g, "x")
    assert report.case == "a"
    assert vmap["v0"] is None
    assert out.vertex_ids == ("v1", "v2")
    assert out.edges[report.new_edge_index] == ("v1", "v2")
    assert out.genus == g.genus


def test_stabilize_case_a_loop():
    g = MarkedDualGraph.build(
        [("u", 1), ("v0", 0)], [("u", "v0"), ("u", "v0")],
        markings={"x": "v0"})
    out, vmap, report = stabilize_forgetting(g, "x")
    assert report.case == "a"
    assert out.edges == (("u", "u"),)
    assert out.genus == g.genus == 2


def test_stabilize_case_b():
    g = MarkedDualGraph.build([("v1", 2), ("v0", 0)], [("v1", "v0")],
                              markings={"x": "v0", "1": "v0"})
    out, vmap, report = stabilize_forgetting(g, "x")
    assert report.case == "b"
    assert report.transferred_marking == "1"
    assert vmap["v0"] == "v1"
    assert out.marking_map["1"] == "v1"
    assert out.genus == g.genus


def test_stabilize_no_contraction():
    g = MarkedDualGraph.build([("v1", 1)], [], markings={"x": "v1", "1": "v1"})
    out, vmap, report = stabilize_forgetting(g, "x")
    assert report.case is None
    assert out.marking_labels == ("1",)


def test_stabilize_rejects_missing_marking():
    with pytest.raises(ValidationError):
        stabilize_forgetting(theta(), "x")


def test_stabilize_rejects_unstable_target():
    g = MarkedDualGraph.build([("v1", 1)], [], markings={"x": "v1"})
    with pytest.raises(PreconditionError):
        stabilize_forgetting(g, "x")


def test_stabilize_preserves_genus_and_stability(small_corpora):
    for genus, labels, graphs in small_corpora:
        if not labels or 2 * genus - 2 + len(labels) - 1 <= 0:
            continue
        for graph in graphs:
            for mark in labels:
                out, _, _ = stabilize_forgetting(graph, mark)
                assert out.genus == graph.genus
                out.validate()
