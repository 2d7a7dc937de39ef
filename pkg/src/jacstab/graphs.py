"""Marked dual graphs of nodal curves and their combinatorial invariants.

A dual graph carries one vertex per irreducible component (weighted by its
geometric genus), one edge per node (loops and parallel edges allowed) and
one labelled leg per marked point.  Everything downstream works off a small
set of invariants computed here:

* subcurve counts k (nodes joining a vertex set to its complement) and
  w (degree of the dualizing sheaf, ``2g_v - 2 + valence`` summed, loops
  counting twice in the valence);
* oriented types of separating nodes, each naming the canonical side by
  its genus and marking set, and the signed degree such a node type puts
  on a subcurve;
* the one-step contraction performed when a marked point is forgotten and
  the vertex carrying it stops being stable.

All values are immutable; every function is pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import PreconditionError, ValidationError


def label_sort_key(label: str) -> tuple:
    """Sort key for marking labels: numeric labels first, numerically."""
    try:
        return (0, int(label), "")
    except (TypeError, ValueError):
        return (1, 0, str(label))


@dataclass(frozen=True)
class MarkedDualGraph:
    """Dual graph of a marked nodal curve.

    ``vertices`` is an ordered tuple of ``(vertex id, genus)`` pairs; the
    tuple order fixes the vertex order used everywhere (degree vectors,
    weight profiles, serialized output).  ``edges`` is a tuple of unordered
    id pairs; an edge's identity is its index in this tuple, which is what
    multigraphs need.  ``markings`` maps distinct labels to vertices.
    """

    vertices: tuple[tuple[str, int], ...]
    edges: tuple[tuple[str, str], ...]
    markings: tuple[tuple[str, str], ...] = ()
    base_vertex: str | None = None
    require_stable: bool = True

    @classmethod
    def build(cls, vertices, edges, markings=None, base_vertex=None,
              require_stable=True) -> "MarkedDualGraph":
        """Convenience constructor from plain dicts/lists; validates."""
        vs = tuple((str(v), int(g)) for v, g in vertices)
        order = {v: i for i, (v, _) in enumerate(vs)}
        es = []
        for u, v in edges:
            u, v = str(u), str(v)
            if u in order and v in order and order[v] < order[u]:
                u, v = v, u
            es.append((u, v))
        if markings is None:
            mk = ()
        else:
            items = markings.items() if isinstance(markings, dict) else markings
            mk = tuple(sorted(((str(l), str(v)) for l, v in items),
                              key=lambda p: label_sort_key(p[0])))
        graph = cls(vertices=vs, edges=tuple(es), markings=mk,
                    base_vertex=None if base_vertex is None else str(base_vertex),
                    require_stable=require_stable)
        return graph.validate()

    # -- basic lookups -------------------------------------------------

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, (v, _) in enumerate(self.vertices)}

    @cached_property
    def genus_map(self) -> dict[str, int]:
        return {v: g for v, g in self.vertices}

    @cached_property
    def marking_map(self) -> dict[str, str]:
        return dict(self.markings)

    @cached_property
    def marking_labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.markings)

    @cached_property
    def markings_by_vertex(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertex_ids}
        for label, v in self.markings:
            out.setdefault(v, []).append(label)
        return {v: tuple(ls) for v, ls in out.items()}

    @cached_property
    def valence_map(self) -> dict[str, int]:
        """Valence with loops counted twice."""
        val = {v: 0 for v in self.vertex_ids}
        for u, v in self.edges:
            val[u] = val.get(u, 0) + 1
            val[v] = val.get(v, 0) + 1
        return val

    def edges_at(self, vertex: str) -> tuple[int, ...]:
        return tuple(i for i, (u, v) in enumerate(self.edges)
                     if u == vertex or v == vertex)

    @property
    def genus(self) -> int:
        """Arithmetic genus: sum of vertex genera + edges - vertices + 1."""
        return sum(g for _, g in self.vertices) + len(self.edges) - len(self.vertices) + 1

    def w_of(self, vertex: str) -> int:
        """Degree of the dualizing sheaf on one component."""
        return 2 * self.genus_map[vertex] - 2 + self.valence_map[vertex]

    def vertex_stability_margin(self, vertex: str) -> int:
        return (2 * self.genus_map[vertex] - 2 + self.valence_map[vertex]
                + len(self.markings_by_vertex.get(vertex, ())))

    # -- connectivity ---------------------------------------------------

    def _components(self, subset: frozenset[str],
                    skip_edges: frozenset[int] = frozenset()) -> tuple[frozenset[str], ...]:
        """Connected components of the subgraph induced on ``subset``."""
        adj: dict[str, set[str]] = {v: set() for v in subset}
        for i, (u, v) in enumerate(self.edges):
            if i in skip_edges or u == v:
                continue
            if u in subset and v in subset:
                adj[u].add(v)
                adj[v].add(u)
        seen: set[str] = set()
        comps = []
        for start in self.vertex_ids:
            if start not in subset or start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                w = stack.pop()
                if w in comp:
                    continue
                comp.add(w)
                stack.extend(adj[w] - comp)
            seen |= comp
            comps.append(frozenset(comp))
        return tuple(comps)

    def is_connected(self, skip_edges: frozenset[int] = frozenset()) -> bool:
        if not self.vertices:
            return False
        return len(self._components(frozenset(self.vertex_ids), skip_edges)) == 1

    # -- validation -----------------------------------------------------

    def validate(self) -> "MarkedDualGraph":
        """Return self iff every invariant holds; report all violations."""
        problems: list[str] = []
        ids = [v for v, _ in self.vertices]
        if not ids:
            problems.append("disconnected: graph has no vertices")
        if len(set(ids)) != len(ids):
            problems.append("duplicate vertex ids")
        known = set(ids)
        for v, g in self.vertices:
            if g < 0:
                problems.append(f"vertex {v} has negative genus {g}")
        for i, (u, v) in enumerate(self.edges):
            if u not in known or v not in known:
                problems.append(f"edge {i} references unknown vertex")
        labels = [l for l, _ in self.markings]
        if len(set(labels)) != len(labels):
            problems.append("duplicate marking label")
        for l, v in self.markings:
            if v not in known:
                problems.append(f"marking {l} placed on unknown vertex {v}")
        if self.base_vertex is not None and self.base_vertex not in known:
            problems.append(f"base vertex {self.base_vertex} is not a vertex")
        if ids and not set(u for e in self.edges for u in e) - known and not self.is_connected():
            problems.append("disconnected graph")
        if ids and self.genus < 0:
            problems.append(f"total genus {self.genus} is negative")
        if self.require_stable and not problems:
            for v in self.vertex_ids:
                m = self.vertex_stability_margin(v)
                if m <= 0:
                    problems.append(
                        f"unstable vertex {v}: 2g-2+valence+markings = {m} <= 0")
        if problems:
            raise ValidationError("; ".join(problems))
        return self

    # -- derived graphs --------------------------------------------------

    def replace(self, **changes) -> "MarkedDualGraph":
        data = {
            "vertices": self.vertices,
            "edges": self.edges,
            "markings": self.markings,
            "base_vertex": self.base_vertex,
            "require_stable": self.require_stable,
        }
        data.update(changes)
        return MarkedDualGraph(**data)


@dataclass(frozen=True)
class SubcurveInvariants:
    """Boundary count, dualizing degree, genus and components of a subcurve."""

    k: int
    w: int
    genus: int
    components: tuple[frozenset[str], ...]


@dataclass(frozen=True, order=True)
class NodeTypeLabel:
    """Oriented type of a separating node.

    Names the canonical side of the node by its genus and the sorted tuple
    of marking labels it carries.  The label of the complementary side is
    ``(g - side_genus, complement markings)``.
    """

    side_genus: int
    side_markings: tuple[str, ...]

    @classmethod
    def of(cls, genus: int, markings) -> "NodeTypeLabel":
        return cls(int(genus),
                   tuple(sorted((str(m) for m in markings), key=label_sort_key)))


def check_subcurve(graph: MarkedDualGraph, vertex_set) -> frozenset[str]:
    Y = frozenset(str(v) for v in vertex_set)
    if not Y:
        raise ValidationError("empty subcurve")
    known = set(graph.vertex_ids)
    if not Y <= known:
        raise ValidationError(f"subcurve references unknown vertices: {sorted(Y - known)}")
    if Y == known:
        raise ValidationError("subcurve must be proper (not all vertices)")
    return Y


def subcurve_k(graph: MarkedDualGraph, Y: frozenset[str]) -> int:
    """Number of nodes joining Y to its complement.  Loops never count."""
    return sum(1 for u, v in graph.edges if (u in Y) != (v in Y))


def subcurve_w(graph: MarkedDualGraph, Y: frozenset[str]) -> int:
    return sum(graph.w_of(v) for v in Y)


def subcurve_genus(graph: MarkedDualGraph, Y: frozenset[str]) -> int:
    interior = sum(1 for u, v in graph.edges if u in Y and v in Y)
    return sum(graph.genus_map[v] for v in Y) + interior - len(Y) + 1


def subcurve_invariants(graph: MarkedDualGraph, vertex_set) -> SubcurveInvariants:
    """k, w, genus and connected components of a proper subcurve."""
    Y = check_subcurve(graph, vertex_set)
    comps = graph._components(Y)
    return SubcurveInvariants(
        k=subcurve_k(graph, Y),
        w=subcurve_w(graph, Y),
        genus=subcurve_genus(graph, Y),
        components=tuple(sorted(comps, key=lambda c: sorted(c))),
    )


def subcurve_sort_key(Y) -> tuple:
    return (len(Y), tuple(sorted(Y)))


def proper_subcurves(graph: MarkedDualGraph, connected_only: bool = True
                     ) -> tuple[frozenset[str], ...]:
    """All proper nonempty vertex subsets, canonically ordered.

    With ``connected_only`` the list is restricted to subsets inducing a
    connected subgraph, which is enough for every stability question
    (degrees, weights and cut counts are all additive over components).
    """
    ids = graph.vertex_ids
    out = []
    for r in range(1, len(ids)):
        for combo in itertools.combinations(ids, r):
            Y = frozenset(combo)
            if connected_only and len(graph._components(Y)) != 1:
                continue
            out.append(Y)
    return tuple(sorted(out, key=subcurve_sort_key))


# -- separating nodes and their types ------------------------------------


def _edge_sides(graph: MarkedDualGraph, edge_index: int
                ) -> tuple[frozenset[str], frozenset[str]] | None:
    """Vertex sets of the two sides after cutting one edge, or None."""
    u, v = graph.edges[edge_index]
    if u == v:
        return None
    comps = graph._components(frozenset(graph.vertex_ids),
                              skip_edges=frozenset([edge_index]))
    if len(comps) == 1:
        return None
    side_u = next(c for c in comps if u in c)
    side_v = next(c for c in comps if v in c)
    return side_u, side_v


def _side_label(graph: MarkedDualGraph, side: frozenset[str]) -> NodeTypeLabel:
    marks = [l for l, v in graph.markings if v in side]
    return NodeTypeLabel.of(subcurve_genus(graph, side), marks)


def node_type(graph: MarkedDualGraph, edge_index: int) -> NodeTypeLabel | None:
    """Canonical type of a separating node, or None for a non-separating one.

    The canonical side contains the smallest marking label when there are
    markings, and is the strictly smaller-genus side otherwise.  In the
    self-symmetric case (no markings, both sides of genus g/2) the label
    value (g/2, ()) is still well defined and returned, but it carries no
    orientation and is rejected as a coefficient index elsewhere.
    """
    if not 0 <= edge_index < len(graph.edges):
        raise ValidationError(f"unknown edge index {edge_index}")
    sides = _edge_sides(graph, edge_index)
    if sides is None:
        return None
    designated = designated_side(graph, edge_index)
    if designated is None:
        return _side_label(graph, sides[0])
    return _side_label(graph, designated)


def designated_side(graph: MarkedDualGraph, edge_index: int) -> frozenset[str] | None:
    """Canonical side of a separating edge; None if non-separating or
    self-symmetric (no orientation)."""
    sides = _edge_sides(graph, edge_index)
    if sides is None:
        return None
    side_a, side_b = sides
    if graph.markings:
        smallest = min(graph.marking_labels, key=label_sort_key)
        vertex = graph.marking_map[smallest]
        return side_a if vertex in side_a else side_b
    ga = subcurve_genus(graph, side_a)
    gb = subcurve_genus(graph, side_b)
    if ga < gb:
        return side_a
    if gb < ga:
        return side_b
    return None


def edge_type_table(graph: MarkedDualGraph
                    ) -> tuple[tuple[NodeTypeLabel, frozenset[str] | None] | None, ...]:
    """Per edge: (canonical label, designated side) or None if non-separating."""
    table = []
    for i in range(len(graph.edges)):
        sides = _edge_sides(graph, i)
        if sides is None:
            table.append(None)
            continue
        side = designated_side(graph, i)
        label = _side_label(graph, side if side is not None else sides[0])
        table.append((label, side))
    return tuple(table)


def is_self_symmetric(label: NodeTypeLabel, genus: int, marking_labels) -> bool:
    return not tuple(marking_labels) and not label.side_markings \
        and 2 * label.side_genus == genus


def admissible_labels(genus: int, marking_labels) -> tuple[NodeTypeLabel, ...]:
    """All canonical separating-node labels admissible for (g, A).

    Both sides must support a stable pointed configuration once the node is
    added as an extra point: side genus >= 1 or at least two of its points
    (markings plus the node) beyond the node, i.e. b >= 1 or |B| >= 2, and
    symmetrically for the complement.  The self-symmetric label is excluded.
    """
    labels_a = tuple(sorted((str(m) for m in marking_labels), key=label_sort_key))
    out = []
    smallest = min(labels_a, key=label_sort_key) if labels_a else None
    for b in range(0, genus + 1):
        for size in range(0, len(labels_a) + 1):
            for B in itertools.combinations(labels_a, size):
                comp = tuple(l for l in labels_a if l not in B)
                if not (b >= 1 or len(B) >= 2):
                    continue
                if not (genus - b >= 1 or len(comp) >= 2):
                    continue
                if labels_a:
                    if smallest not in B:
                        continue
                else:
                    if not b < genus - b:
                        continue
                out.append(NodeTypeLabel.of(b, B))
    return tuple(sorted(out))


def boundary_degree(graph: MarkedDualGraph, vertex_set, label: NodeTypeLabel) -> int:
    """Signed degree that a separating-node type puts on a subcurve.

    Component-wise: each vertex incident to a separating node of the given
    type contributes +1 when it lies on the canonical side, -1 otherwise.
    Summed over every vertex of the graph the result is 0.
    """
    if label not in admissible_labels(graph.genus, graph.marking_labels):
        raise ValidationError(f"inadmissible node type label {label}")
    Y = frozenset(str(v) for v in vertex_set)
    known = set(graph.vertex_ids)
    if not Y or not Y <= known:
        raise ValidationError("invalid subcurve for boundary degree")
    table = edge_type_table(graph)
    total = 0
    for i, entry in enumerate(table):
        if entry is None:
            continue
        edge_label, side = entry
        if edge_label != label or side is None:
            continue
        u, v = graph.edges[i]
        for endpoint in (u, v):
            if endpoint in Y:
                total += 1 if endpoint in side else -1
    return total


# -- forgetting a marked point --------------------------------------------


@dataclass(frozen=True)
class ContractionReport:
    """What happened when a marking was forgotten.

    ``case`` is "a" (two-edge rational vertex fused into one new edge),
    "b" (rational tail deleted, its second marking transferred), or None.
    ``edge_map`` maps surviving old edge indices to new ones;
    ``fused_ends`` records, for case (a), which old edge led to which
    surviving endpoint of the new edge.
    """

    case: str | None
    removed_vertex: str | None = None
    removed_edges: tuple[int, ...] = ()
    new_edge_index: int | None = None
    transferred_marking: str | None = None
    edge_map: tuple[tuple[int, int], ...] = ()
    fused_ends: tuple[tuple[int, str], ...] = ()


def stabilize_forgetting(graph: MarkedDualGraph, marking: str
                         ) -> tuple[MarkedDualGraph, dict[str, str | None], ContractionReport]:
    """Forget one marking and contract the at most one unstable vertex.

    Returns the stabilized graph, a vertex map (the contracted vertex maps
    to None in case (a) -- its image is the new node -- and to its
    attachment vertex in case (b)), and a contraction report.
    """
    graph.validate()
    marking = str(marking)
    if marking not in graph.marking_map:
        raise ValidationError(f"marking {marking} not present")
    rest = [(l, v) for l, v in graph.markings if l != marking]
    if 2 * graph.genus - 2 + len(rest) <= 0:
        raise PreconditionError(
            f"forgetting {marking} leaves 2g-2+n = {2 * graph.genus - 2 + len(rest)} <= 0")
    v0 = graph.marking_map[marking]
    identity_map: dict[str, str | None] = {v: v for v in graph.vertex_ids}

    margin = (2 * graph.genus_map[v0] - 2 + graph.valence_map[v0]
              + sum(1 for l, v in rest if v == v0))
    stripped = graph.replace(markings=tuple(rest),
                             base_vertex=graph.base_vertex)
    if margin > 0:
        return stripped.validate(), identity_map, ContractionReport(
            case=None, edge_map=tuple((i, i) for i in range(len(graph.edges))))

    g0 = graph.genus_map[v0]
    incident = graph.edges_at(v0)
    other_marks = [l for l, v in rest if v == v0]

    if g0 == 0 and graph.valence_map[v0] == 2 and not other_marks:
        # case (a): fuse the two edge ends into one new edge
        e1, e2 = incident if len(incident) == 2 else (incident[0], incident[0])
        if e1 == e2:
            raise PreconditionError(
                f"vertex {v0} carries a loop; cannot stabilize")  # unreachable on connected stable input
        end1 = next(w for w in graph.edges[e1] if w != v0) \
            if graph.edges[e1][0] != graph.edges[e1][1] else v0
        end2 = next(w for w in graph.edges[e2] if w != v0) \
            if graph.edges[e2][0] != graph.edges[e2][1] else v0
        removed = (e1, e2)
        new_vertices = tuple(p for p in graph.vertices if p[0] != v0)
        survivors = [i for i in range(len(graph.edges)) if i not in removed]
        new_edges = [graph.edges[i] for i in survivors]
        new_edge_index = len(new_edges)
        lo, hi = sorted((end1, end2))
        new_edges.append((lo, hi))
        edge_map = tuple((old, new) for new, old in enumerate(survivors))
        vmap = dict(identity_map)
        vmap[v0] = None
        new_graph = MarkedDualGraph(
            vertices=new_vertices, edges=tuple(new_edges),
            markings=tuple(rest),
            base_vertex=graph.base_vertex if graph.base_vertex != v0 else None,
            require_stable=graph.require_stable).validate()
        report = ContractionReport(
            case="a", removed_vertex=v0, removed_edges=removed,
            new_edge_index=new_edge_index, edge_map=edge_map,
            fused_ends=((e1, end1), (e2, end2)))
        return new_graph, vmap, report

    if g0 == 0 and graph.valence_map[v0] == 1 and len(other_marks) == 1:
        # case (b): delete the tail, transfer its marking to the attachment
        e1 = incident[0]
        attach = next(w for w in graph.edges[e1] if w != v0)
        transferred = other_marks[0]
        new_vertices = tuple(p for p in graph.vertices if p[0] != v0)
        survivors = [i for i in range(len(graph.edges)) if i != e1]
        new_edges = tuple(graph.edges[i] for i in survivors)
        edge_map = tuple((old, new) for new, old in enumerate(survivors))
        new_markings = tuple(sorted(
            [(l, v) for l, v in rest if l != transferred] + [(transferred, attach)],
            key=lambda p: label_sort_key(p[0])))
        vmap = dict(identity_map)
        vmap[v0] = attach
        new_graph = MarkedDualGraph(
            vertices=new_vertices, edges=new_edges, markings=new_markings,
            base_vertex=graph.base_vertex if graph.base_vertex != v0 else attach,
            require_stable=graph.require_stable).validate()
        report = ContractionReport(
            case="b", removed_vertex=v0, removed_edges=(e1,),
            transferred_marking=transferred, edge_map=edge_map)
        return new_graph, vmap, report

    raise PreconditionError(
        f"vertex {v0} became unstable in an unexpected way (genus {g0}, "
        f"valence {graph.valence_map[v0]}, markings {other_marks})")
