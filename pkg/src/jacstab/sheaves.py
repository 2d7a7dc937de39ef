"""Rank-1 torsion-free sheaf types on a dual graph.

A sheaf type is the pair (S, multidegree): S is the set of nodes where the
sheaf fails to be locally free, the multidegree lives on the partial
normalization at S.  Total degree is the multidegree sum plus |S| (each
non-free node raises chi of the structure sheaf by one on the partial
normalization).  Simplicity is the combinatorial shadow of having only
scalar endomorphisms: deleting S must not disconnect the graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, ValidationError
from .graphs import MarkedDualGraph, check_subcurve


@dataclass(frozen=True)
class SheafType:
    """(non-free edge set, vertex multidegree), degrees in vertex order."""

    nonfree_edges: frozenset[int]
    degrees: tuple[tuple[str, int], ...]

    @classmethod
    def build(cls, graph: MarkedDualGraph, degrees, nonfree_edges=()) -> "SheafType":
        deg = dict(degrees) if not isinstance(degrees, dict) else degrees
        sheaf = cls(nonfree_edges=frozenset(int(e) for e in nonfree_edges),
                    degrees=tuple((v, int(deg[v])) for v in graph.vertex_ids))
        return validate_sheaf(graph, sheaf)

    @property
    def degree_map(self) -> dict[str, int]:
        return dict(self.degrees)

    @property
    def total_degree(self) -> int:
        return sum(d for _, d in self.degrees) + len(self.nonfree_edges)


def validate_sheaf(graph: MarkedDualGraph, sheaf: SheafType) -> SheafType:
    if [v for v, _ in sheaf.degrees] != list(graph.vertex_ids):
        raise ValidationError("sheaf degrees must cover the graph vertices in order")
    for e in sheaf.nonfree_edges:
        if not 0 <= e < len(graph.edges):
            raise ValidationError(f"non-free edge index {e} out of range")
    return sheaf


def total_degree(sheaf: SheafType) -> int:
    return sheaf.total_degree


def is_simple(graph: MarkedDualGraph, sheaf: SheafType) -> bool:
    """A sheaf type is simple iff the graph minus its non-free nodes stays
    connected (equivalently no subcurve has every crossing node in S)."""
    return graph.is_connected(skip_edges=frozenset(sheaf.nonfree_edges))


def require_simple(graph: MarkedDualGraph, sheaf: SheafType) -> SheafType:
    validate_sheaf(graph, sheaf)
    if not is_simple(graph, sheaf):
        raise PreconditionError(
            f"sheaf type is not simple: removing non-free nodes "
            f"{sorted(sheaf.nonfree_edges)} disconnects the graph")
    return sheaf


def deg_subcurve(graph: MarkedDualGraph, sheaf: SheafType, vertex_set) -> int:
    """Degree of the maximal torsion-free quotient on a subcurve.

    Non-free nodes interior to the subcurve (loops included) contribute +1;
    crossing non-free nodes contribute nothing.
    """
    Y = check_subcurve(graph, vertex_set)
    deg = sum(d for v, d in sheaf.degrees if v in Y)
    interior = sum(1 for e in sheaf.nonfree_edges
                   if graph.edges[e][0] in Y and graph.edges[e][1] in Y)
    return deg + interior


def d_of(graph: MarkedDualGraph, sheaf: SheafType, vertex_set) -> int:
    """Subcurve degree plus the number of crossing non-free nodes."""
    Y = check_subcurve(graph, vertex_set)
    crossing = sum(1 for e in sheaf.nonfree_edges
                   if (graph.edges[e][0] in Y) != (graph.edges[e][1] in Y))
    return deg_subcurve(graph, sheaf, Y) + crossing


def twist(sheaf: SheafType, bundle: dict[str, int]) -> SheafType:
    """Tensor with a line bundle of the given multidegree."""
    return SheafType(
        nonfree_edges=sheaf.nonfree_edges,
        degrees=tuple((v, d + int(bundle.get(v, 0))) for v, d in sheaf.degrees))
