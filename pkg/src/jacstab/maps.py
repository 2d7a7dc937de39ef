"""Clutching, point-forgetting, Abel-Jacobi sections and the phi-table
translation, with polarization transport.

Clutching glues two marked points into a node: within one graph it adds a
non-free edge and raises genus and total degree by one; across two graphs
it joins them by a free edge, twisting the first sheaf by +1 at the glued
vertex, so total degree becomes d1 + d2 + 1.  Coefficient recipes transport
when the glued markings carry coefficient s (and no boundary coefficients
are present; node types mutate under gluing).

Forgetting a marking contracts at most one two-edge or one-edge rational
vertex v0.  The sheaf transport follows the sections of the local model
around v0: with t = deg(v0) + #(non-free incident edges),

    t = +1  ->  new edge non-free, other degrees unchanged;
    t =  0, both edges free          ->  new edge free, unchanged;
    t =  0, one incident edge non-free (deg(v0) = -1)
            ->  new edge non-free, the endpoint reached through the FREE
                edge loses one degree;
    t = -1  (deg(v0) = -1, both free)
            ->  new edge non-free, both endpoints lose one degree
                (a fused loop loses two).

Degrees deg(v0) < -1 are rejected: the pushforward would not preserve the
total degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import PreconditionError, ValidationError
from .graphs import (ContractionReport, MarkedDualGraph, NodeTypeLabel,
                     admissible_labels, label_sort_key, stabilize_forgetting)
from .polarization import (CanonicalPolarization, ExplicitPolarization,
                           compile_polarization)
from .sheaves import SheafType, require_simple, twist
from .stability import StabilityVerdict, check


# -- clutching --------------------------------------------------------------


def clutch_irr(graph: MarkedDualGraph, x: str, y: str, sheaf: SheafType
               ) -> tuple[MarkedDualGraph, SheafType]:
    """Glue markings x and y of one graph into a new non-free node."""
    graph.validate()
    require_simple(graph, sheaf)
    x, y = str(x), str(y)
    for mark in (x, y):
        if mark not in graph.marking_map:
            raise ValidationError(f"marking {mark} not present")
    if x == y:
        raise ValidationError("clutching needs two distinct markings")
    vx, vy = graph.marking_map[x], graph.marking_map[y]
    lo, hi = sorted((vx, vy), key=graph.vertex_index.get)
    new_edges = graph.edges + ((lo, hi),)
    new_markings = tuple(p for p in graph.markings if p[0] not in (x, y))
    new_graph = graph.replace(edges=new_edges, markings=new_markings).validate()
    new_sheaf = SheafType(
        nonfree_edges=sheaf.nonfree_edges | {len(graph.edges)},
        degrees=sheaf.degrees)
    return new_graph, require_simple(new_graph, new_sheaf)


def clutch_irr_polarization(pol: ExplicitPolarization, x: str, y: str
                            ) -> ExplicitPolarization:
    """Transport a recipe through one-graph clutching: drop a_x and a_y.

    Requires a_x = a_y = s and no boundary coefficients.
    """
    x, y = str(x), str(y)
    if pol.alpha:
        raise PreconditionError(
            "clutching transport requires alpha = 0 (node types mutate)")
    for mark in (x, y):
        if pol.a_map.get(mark) != pol.s:
            raise PreconditionError(
                f"clutching transport needs a_{mark} = s = {pol.s}, "
                f"got {pol.a_map.get(mark)}")
    return ExplicitPolarization.build(
        s=pol.s, r=pol.r,
        a={l: c for l, c in pol.a if l not in (x, y)})


def clutch_sep(graph1: MarkedDualGraph, x: str, sheaf1: SheafType,
               graph2: MarkedDualGraph, y: str, sheaf2: SheafType
               ) -> tuple[MarkedDualGraph, SheafType]:
    """Join two graphs by a free edge at markings x and y.

    Vertices are renamed with "1:"/"2:" prefixes; edge indices keep the
    first graph's order, then the second's, then the new free edge.  The
    first sheaf is twisted by +1 at the vertex carrying x.
    """
    graph1.validate()
    graph2.validate()
    require_simple(graph1, sheaf1)
    require_simple(graph2, sheaf2)
    x, y = str(x), str(y)
    if x not in graph1.marking_map:
        raise ValidationError(f"marking {x} not present in the first graph")
    if y not in graph2.marking_map:
        raise ValidationError(f"marking {y} not present in the second graph")
    keep1 = [l for l, _ in graph1.markings if l != x]
    keep2 = [l for l, _ in graph2.markings if l != y]
    if set(keep1) & set(keep2):
        raise ValidationError(
            f"marking labels collide: {sorted(set(keep1) & set(keep2))}")

    def re1(v: str) -> str:
        return f"1:{v}"

    def re2(v: str) -> str:
        return f"2:{v}"

    vertices = tuple((re1(v), g) for v, g in graph1.vertices) \
        + tuple((re2(v), g) for v, g in graph2.vertices)
    vx, vy = re1(graph1.marking_map[x]), re2(graph2.marking_map[y])
    edges = tuple((re1(u), re1(v)) for u, v in graph1.edges) \
        + tuple((re2(u), re2(v)) for u, v in graph2.edges) \
        + ((vx, vy),)
    markings = tuple(sorted(
        [(l, re1(v)) for l, v in graph1.markings if l != x]
        + [(l, re2(v)) for l, v in graph2.markings if l != y],
        key=lambda p: label_sort_key(p[0])))
    new_graph = MarkedDualGraph(vertices=vertices, edges=edges,
                                markings=markings).validate()

    twisted = twist(sheaf1, {graph1.marking_map[x]: 1})
    degrees = {re1(v): d for v, d in twisted.degrees}
    degrees.update({re2(v): d for v, d in sheaf2.degrees})
    shift = len(graph1.edges)
    nonfree = frozenset(sheaf1.nonfree_edges) \
        | frozenset(e + shift for e in sheaf2.nonfree_edges)
    new_sheaf = SheafType(nonfree_edges=nonfree,
                          degrees=tuple((v, degrees[v]) for v, _ in vertices))
    return new_graph, require_simple(new_graph, new_sheaf)


def clutch_sep_polarization(pol1: ExplicitPolarization, x: str,
                            pol2: ExplicitPolarization, y: str
                            ) -> ExplicitPolarization:
    """Merge two recipes through two-graph clutching: drop a_x and a_y."""
    x, y = str(x), str(y)
    if pol1.alpha or pol2.alpha:
        raise PreconditionError(
            "clutching transport requires alpha = 0 (node types mutate)")
    if pol1.s != pol2.s or pol1.r != pol2.r:
        raise PreconditionError("both recipes must share s and r")
    if pol1.a_map.get(x) != pol1.s:
        raise PreconditionError(f"clutching transport needs a_{x} = s")
    if pol2.a_map.get(y) != pol2.s:
        raise PreconditionError(f"clutching transport needs a_{y} = s")
    merged = {l: c for l, c in pol1.a if l != x}
    for l, c in pol2.a:
        if l == y:
            continue
        if l in merged:
            raise PreconditionError(f"marking coefficient {l} defined twice")
        merged[l] = c
    return ExplicitPolarization.build(s=pol1.s, r=pol1.r, a=merged)


# -- forgetful morphisms -----------------------------------------------------


def check_star(pol, graph: MarkedDualGraph, x: str) -> bool:
    """Whether the recipe puts weight 0 on the contraction candidate.

    Vacuously true when forgetting x contracts nothing.  Otherwise requires
    a_x = 0 and compiled weight exactly 0 on the vertex to be contracted.
    """
    graph.validate()
    x = str(x)
    if x not in graph.marking_map:
        raise ValidationError(f"marking {x} not present")
    _, _, report = stabilize_forgetting(graph, x)
    if report.case is None:
        return True
    if isinstance(pol, ExplicitPolarization) and pol.a_map.get(x, Fraction(0)) != 0:
        return False
    if isinstance(pol, CanonicalPolarization) and pol.a_map.get(x, Fraction(0)) != 0:
        return False
    profile = compile_polarization(pol, graph)
    return profile.q_map[report.removed_vertex] == 0


def forget_point(graph: MarkedDualGraph, x: str, sheaf: SheafType
                 ) -> tuple[MarkedDualGraph, SheafType, ContractionReport]:
    """Forget a marking and push the sheaf type to the stabilized graph.

    The input must be simple.  The output need not be: when the fused node
    comes out non-free and separates the stabilized graph, the pushforward
    is decomposable (this happens only for strictly semistable inputs, with
    the equality subcurves meeting the contracted vertex).
    """
    require_simple(graph, sheaf)
    new_graph, _, report = stabilize_forgetting(graph, str(x))
    degree_map = sheaf.degree_map

    if report.case is None:
        new_sheaf = SheafType(nonfree_edges=sheaf.nonfree_edges,
                              degrees=sheaf.degrees)
        return new_graph, new_sheaf, report

    edge_map = dict(report.edge_map)
    v0 = report.removed_vertex

    if report.case == "b":
        (e1,) = report.removed_edges
        if e1 in sheaf.nonfree_edges:
            raise PreconditionError(
                "tail edge is non-free; sheaf would not be simple")
        if degree_map[v0] != 0:
            raise PreconditionError(
                f"tail vertex must carry degree 0, got {degree_map[v0]}")
        nonfree = frozenset(edge_map[e] for e in sheaf.nonfree_edges)
        degrees = tuple((v, d) for v, d in sheaf.degrees if v != v0)
        new_sheaf = SheafType(nonfree_edges=nonfree, degrees=degrees)
        return new_graph, new_sheaf, report

    # case (a)
    e1, e2 = report.removed_edges
    delta = degree_map[v0]
    in_s = [e for e in (e1, e2) if e in sheaf.nonfree_edges]
    if len(in_s) == 2:
        raise PreconditionError(
            "both incident edges non-free; sheaf would not be simple")
    t = delta + len(in_s)
    if delta < -1 or not -1 <= t <= 1:
        raise PreconditionError(
            f"contracted vertex not admissible for pushforward: "
            f"deg = {delta}, d({{v0}}) = {t}")

    adjust: dict[str, int] = {}
    ends = dict(report.fused_ends)
    if t == 1:
        new_nonfree = True
    elif t == 0 and not in_s:
        new_nonfree = False
    elif t == 0:
        # one non-free incident edge, deg(v0) = -1: the free-edge endpoint
        # loses the degree that cannot extend across the contracted chain
        new_nonfree = True
        free_edge = e2 if in_s[0] == e1 else e1
        far = ends[free_edge]
        adjust[far] = adjust.get(far, 0) - 1
    else:  # t == -1, both edges free
        new_nonfree = True
        for e in (e1, e2):
            far = ends[e]
            adjust[far] = adjust.get(far, 0) - 1

    nonfree = frozenset(edge_map[e] for e in sheaf.nonfree_edges
                        if e not in (e1, e2))
    if new_nonfree:
        nonfree |= {report.new_edge_index}
    degrees = tuple((v, d + adjust.get(v, 0))
                    for v, d in sheaf.degrees if v != v0)
    new_sheaf = SheafType(nonfree_edges=nonfree, degrees=degrees)
    assert new_sheaf.total_degree == sheaf.total_degree
    return new_graph, new_sheaf, report


def forget_polarization(pol: ExplicitPolarization, x: str, *,
                        genus: int | None = None,
                        marking_labels=None) -> ExplicitPolarization:
    """Drop the (zero) coefficient of a forgotten marking.

    Contracting the marked component turns every separating node of type
    (b, B + {x}) into one of type (b, B), so a downstairs coefficient pulls
    back to EQUAL coefficients on the pair {(b, B), (b, B + {x})} upstairs.
    Boundary coefficients therefore transport only when they respect that
    pairing; node types that vanish under the contraction (their downstairs
    partner is inadmissible) must carry coefficient 0.  Needs the (genus,
    markings) context; x must not be the smallest label, or the canonical
    orientation of every label would flip.
    """
    x = str(x)
    if pol.a_map.get(x, Fraction(0)) != 0:
        raise PreconditionError(f"forgetting {x} needs a_{x} = 0, got {pol.a_map[x]}")
    new_alpha: dict[NodeTypeLabel, Fraction] = {}
    if pol.alpha:
        if genus is None or marking_labels is None:
            raise PreconditionError(
                "forgetting with boundary coefficients needs genus and markings")
        labels = tuple(str(l) for l in marking_labels)
        if x == min(labels, key=label_sort_key):
            raise PreconditionError(
                f"cannot transport boundary coefficients: {x} is the "
                f"smallest label, so canonical sides would flip")
        remaining = tuple(l for l in labels if l != x)
        upstairs = set(admissible_labels(genus, labels))
        values = dict(pol.alpha)
        for label in values:
            if label not in upstairs:
                raise PreconditionError(f"alpha label {label} is not admissible")
        paired: set[NodeTypeLabel] = set()
        for label in admissible_labels(genus, remaining):
            with_x = NodeTypeLabel.of(label.side_genus,
                                      label.side_markings + (x,))
            paired |= {label, with_x}
            plain_c = values.get(label, Fraction(0))
            with_x_c = values.get(with_x, Fraction(0))
            if plain_c != with_x_c:
                raise PreconditionError(
                    f"boundary coefficients must agree on the pair "
                    f"{label} / {with_x}: got {plain_c} and {with_x_c}")
            if plain_c:
                new_alpha[label] = plain_c
        for label, coefficient in values.items():
            if label not in paired and coefficient != 0:
                raise PreconditionError(
                    f"node type {label} vanishes under the contraction; "
                    f"its coefficient must be 0, got {coefficient}")
    return ExplicitPolarization.build(
        s=pol.s, r=pol.r,
        a={l: c for l, c in pol.a if l != x},
        alpha=new_alpha)


# -- sections and phi translation -------------------------------------------


def abel_jacobi(graph: MarkedDualGraph, dtuple: dict[str, int]
                ) -> tuple[ExplicitPolarization, SheafType, StabilityVerdict]:
    """Section recipe from integer weights on the markings.

    Produces the recipe (s=-1, a_i=2*d_i, r=2), the line-bundle type with
    degree sum of the d_i at each vertex, and its verdict (always stable:
    every subcurve has deg_Y = q_Y with margin k_Y/2 > 0).
    """
    graph.validate()
    if not graph.markings:
        raise PreconditionError("Abel-Jacobi sections need at least one marking")
    weights = {str(l): int(c) for l, c in dtuple.items()}
    unknown = set(weights) - set(graph.marking_labels)
    if unknown:
        raise ValidationError(f"weights for unknown markings: {sorted(unknown)}")
    pol = ExplicitPolarization.build(
        s=-1, r=2,
        a={l: 2 * weights.get(l, 0) for l in graph.marking_labels})
    degrees = {v: sum(weights.get(l, 0)
                      for l in graph.markings_by_vertex.get(v, ()))
               for v in graph.vertex_ids}
    sheaf = SheafType.build(graph, degrees)
    profile = compile_polarization(pol, graph)
    verdict = check(graph, profile, sheaf)
    return pol, sheaf, verdict


@dataclass(frozen=True)
class PhiTable:
    """Rational vertex weight per separating-node type, target degree g-1."""

    values: tuple[tuple[NodeTypeLabel, Fraction], ...]

    @classmethod
    def build(cls, values) -> "PhiTable":
        items = tuple(sorted(
            (label, Fraction(c)) for label, c in dict(values).items()))
        return cls(values=items)

    @cached_property
    def value_map(self) -> dict[NodeTypeLabel, Fraction]:
        return dict(self.values)


def kp_translate(phi: PhiTable, genus: int, marking_labels
                 ) -> ExplicitPolarization:
    """Boundary-coefficient recipe matching a phi table on two-vertex graphs.

    For each admissible canonical label: alpha = phi - side_genus + 1/2.
    Compiled on the two-component one-node graph of that type, the weight
    of the labelled side equals phi exactly.
    """
    labels_a = tuple(sorted({str(l) for l in marking_labels}, key=label_sort_key))
    if not labels_a:
        raise PreconditionError("phi translation needs a nonempty marking set")
    alpha: dict[NodeTypeLabel, Fraction] = {}
    for label in admissible_labels(genus, labels_a):
        value = phi.value_map.get(label)
        if value is None:
            raise ValidationError(f"phi table missing admissible label {label}")
        alpha[label] = value - label.side_genus + Fraction(1, 2)
    return ExplicitPolarization.build(s=0, r=1, a={l: 0 for l in labels_a},
                                      alpha=alpha)


def two_component_graph(genus: int, marking_labels, label: NodeTypeLabel
                        ) -> MarkedDualGraph:
    """The two-vertex one-edge graph of the given separating-node type.

    Vertex "side" carries the label's genus and markings, "rest" their
    complements.
    """
    labels_a = tuple(sorted({str(l) for l in marking_labels}, key=label_sort_key))
    if label not in admissible_labels(genus, labels_a):
        raise ValidationError(f"label {label} not admissible for genus {genus}")
    side_marks = set(label.side_markings)
    markings = {l: ("side" if l in side_marks else "rest") for l in labels_a}
    return MarkedDualGraph.build(
        vertices=[("side", label.side_genus), ("rest", genus - label.side_genus)],
        edges=[("side", "rest")],
        markings=markings)
