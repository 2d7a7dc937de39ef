"""Decide and enumerate (semi/quasi)stable sheaf types for a profile.

A sheaf type of total degree d is semistable for a profile when

    deg_Y >= q_Y - k_Y/2        for every proper subcurve Y,

stable when all inequalities are strict, and quasistable at a base vertex
when it is semistable with strict inequality whenever the base lies in Y.
Degrees, weights and cut counts are additive over connected components, so
checking connected subcurves suffices; the all-subsets variant is kept as
an oracle.  Enumeration scans a per-vertex degree box derived from the
singleton subcurves and their complements, then filters by the full check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
import math

from .errors import PreconditionError, ValidationError
from .graphs import MarkedDualGraph, proper_subcurves, subcurve_k
from .polarization import QProfile, is_general
from .sheaves import SheafType, deg_subcurve, require_simple

MODES = ("semistable", "stable", "quasistable")


@dataclass(frozen=True)
class StabilityVerdict:
    """stable / strictly_semistable / unstable, plus a witness subcurve.

    The witness is the first violated subcurve (unstable) or the first
    equality subcurve (strictly semistable) in canonical order.
    """

    status: str
    quasistable_at_base: bool | None = None
    witness: tuple[str, ...] | None = None


def _require_profile(graph: MarkedDualGraph, profile: QProfile) -> None:
    if profile.graph != graph:
        raise ValidationError("profile belongs to a different graph")


def check(graph: MarkedDualGraph, profile: QProfile, sheaf: SheafType,
          base_vertex: str | None = None, all_subsets: bool = False
          ) -> StabilityVerdict:
    """Stability verdict of one sheaf type."""
    _require_profile(graph, profile)
    require_simple(graph, sheaf)
    if sheaf.total_degree != profile.d:
        raise PreconditionError(
            f"degree mismatch: sheaf has total degree {sheaf.total_degree}, "
            f"profile expects {profile.d}")
    base = base_vertex if base_vertex is not None else graph.base_vertex
    if base is not None and base not in graph.vertex_index:
        raise ValidationError(f"base vertex {base} is not a vertex")

    first_equality: frozenset[str] | None = None
    quasi: bool | None = True if base is not None else None
    for Y in proper_subcurves(graph, connected_only=not all_subsets):
        slack = deg_subcurve(graph, sheaf, Y) - profile.q_of(Y) \
            + Fraction(subcurve_k(graph, Y), 2)
        if slack < 0:
            return StabilityVerdict(
                status="unstable",
                quasistable_at_base=False if base is not None else None,
                witness=tuple(sorted(Y)))
        if slack == 0:
            if first_equality is None:
                first_equality = Y
            if base is not None and base in Y:
                quasi = False
    if first_equality is None:
        return StabilityVerdict(status="stable", quasistable_at_base=quasi)
    return StabilityVerdict(status="strictly_semistable",
                            quasistable_at_base=quasi,
                            witness=tuple(sorted(first_equality)))


def _nonfree_candidates(graph: MarkedDualGraph) -> list[frozenset[int]]:
    """Edge subsets whose removal keeps the graph connected."""
    m = len(graph.edges)
    out = []
    for r in range(m + 1):
        for combo in itertools.combinations(range(m), r):
            S = frozenset(combo)
            if graph.is_connected(skip_edges=S):
                out.append(S)
    return out


def _degree_box(graph: MarkedDualGraph, profile: QProfile,
                S: frozenset[int]) -> list[tuple[int, int]] | None:
    """Per-vertex semistable bounds from {v} and its complement."""
    bounds = []
    for v in graph.vertex_ids:
        nonloop = sum(1 for i, (a, b) in enumerate(graph.edges)
                      if (a == v) != (b == v))
        loops_s = sum(1 for i in S
                      if graph.edges[i][0] == graph.edges[i][1] == v)
        cross_s = sum(1 for i in S
                      if (graph.edges[i][0] == v) != (graph.edges[i][1] == v))
        q_v = profile.q_map[v]
        lo = math.ceil(q_v - Fraction(nonloop, 2)) - loops_s
        hi = math.floor(q_v + Fraction(nonloop, 2)) - loops_s - cross_s
        if lo > hi:
            return None
        bounds.append((lo, hi))
    return bounds


def _degree_vectors(bounds: list[tuple[int, int]], total: int):
    """Integer vectors in the box with the prescribed sum."""
    n = len(bounds)
    suffix_lo = [0] * (n + 1)
    suffix_hi = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_lo[i] = suffix_lo[i + 1] + bounds[i][0]
        suffix_hi[i] = suffix_hi[i + 1] + bounds[i][1]

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == n:
            if remaining == 0:
                yield prefix
            return
        lo, hi = bounds[i]
        lo = max(lo, remaining - suffix_hi[i + 1])
        hi = min(hi, remaining - suffix_lo[i + 1])
        for value in range(lo, hi + 1):
            yield from rec(i + 1, remaining - value, prefix + (value,))

    yield from rec(0, total, ())


def enumerate_sheaves(graph: MarkedDualGraph, profile: QProfile, mode: str,
                      base_vertex: str | None = None,
                      include_nonfree: bool = False) -> list[SheafType]:
    """All sheaf types passing ``check`` in the requested mode.

    Deterministic order: lexicographic in (sorted non-free edge indices,
    degree vector in vertex order).
    """
    _require_profile(graph, profile)
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}; expected one of {MODES}")
    base = base_vertex if base_vertex is not None else graph.base_vertex
    if mode == "quasistable" and base is None:
        raise PreconditionError("quasistable enumeration needs a base vertex")
    if base is not None and base not in graph.vertex_index:
        raise ValidationError(f"base vertex {base} is not a vertex")

    subcurves = proper_subcurves(graph, connected_only=True)
    precomputed = [(Y, profile.q_of(Y) - Fraction(subcurve_k(graph, Y), 2))
                   for Y in subcurves]

    results = []
    candidates = _nonfree_candidates(graph) if include_nonfree else [frozenset()]
    ids = graph.vertex_ids
    for S in candidates:
        bounds = _degree_box(graph, profile, S)
        if bounds is None:
            continue
        interior = {Y: sum(1 for e in S
                           if graph.edges[e][0] in Y and graph.edges[e][1] in Y)
                    for Y, _ in precomputed}
        for vector in _degree_vectors(bounds, profile.d - len(S)):
            ok = True
            strict = True
            quasi = True
            for Y, bound in precomputed:
                deg = sum(vector[i] for i, v in enumerate(ids) if v in Y) \
                    + interior[Y]
                slack = deg - bound
                if slack < 0:
                    ok = False
                    break
                if slack == 0:
                    strict = False
                    if base is not None and base in Y:
                        quasi = False
            if not ok:
                continue
            if mode == "stable" and not strict:
                continue
            if mode == "quasistable" and not quasi:
                continue
            results.append(SheafType(nonfree_edges=S,
                                     degrees=tuple(zip(ids, vector))))
    results.sort(key=lambda s: (tuple(sorted(s.nonfree_edges)),
                                tuple(d for _, d in s.degrees)))
    return results


def count_components(graph: MarkedDualGraph, profile: QProfile,
                     base_vertex: str | None = None) -> int:
    """Number of quasistable line-bundle types at the base vertex.

    Requires a general profile; for those the count matches the number of
    spanning trees of the graph.
    """
    general, witnesses = is_general(graph, profile)
    if not general:
        raise PreconditionError(
            f"profile is not general (integral at {sorted(map(sorted, witnesses))})")
    return len(enumerate_sheaves(graph, profile, "quasistable",
                                 base_vertex=base_vertex, include_nonfree=False))
