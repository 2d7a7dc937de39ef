"""Polarization recipes and their per-graph compilation to vertex weights.

A recipe assigns every graph of fixed genus and marking set a rational
weight q_v per vertex with sum equal to the target degree d.  The explicit
recipe combines a multiple of the dualizing degree, per-marking constants
and signed boundary coefficients indexed by separating-node types:

    q_v = (s*w_v + sum of a_i over markings on v
                 + sum of alpha * boundary_degree({v}, label)) / r + w_v / 2

The canonical recipe of degree d with weights a is the special case
s = d-g+1, a_i -> a_i*(d-g+1), r = 2g-2+sum(a), alpha = 0, reproducing the
classical basic inequality.  A profile is general when no proper subcurve
is "integral" (q_Z - k_Z/2 integer on every connected piece of the subcurve
and of its complement); general profiles are exactly those whose semistable
and stable sheaf types coincide.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import PreconditionError, ValidationError
from .graphs import (MarkedDualGraph, NodeTypeLabel, admissible_labels,
                     check_subcurve, edge_type_table, label_sort_key,
                     subcurve_k, subcurve_sort_key)


@dataclass(frozen=True)
class ExplicitPolarization:
    """Family-level coefficient recipe (s, a_i, alpha_(b,B), r)."""

    s: Fraction
    r: Fraction
    a: tuple[tuple[str, Fraction], ...] = ()
    alpha: tuple[tuple[NodeTypeLabel, Fraction], ...] = ()

    @classmethod
    def build(cls, s, r, a=None, alpha=None) -> "ExplicitPolarization":
        r = Fraction(r)
        if r <= 0:
            raise ValidationError(f"rank coefficient r must be positive, got {r}")
        a_items = tuple(sorted(
            ((str(l), Fraction(c)) for l, c in (dict(a or {})).items()),
            key=lambda p: label_sort_key(p[0])))
        alpha_items = tuple(sorted(
            ((lab, Fraction(c)) for lab, c in (dict(alpha or {})).items())))
        return cls(s=Fraction(s), r=r, a=a_items, alpha=alpha_items)

    @cached_property
    def a_map(self) -> dict[str, Fraction]:
        return dict(self.a)

    @cached_property
    def alpha_map(self) -> dict[NodeTypeLabel, Fraction]:
        return dict(self.alpha)

    def target_degree(self, genus: int) -> Fraction:
        return (self.s * (2 * genus - 2) + sum(self.a_map.values())) / self.r + genus - 1


@dataclass(frozen=True)
class CanonicalPolarization:
    """Degree-d canonical recipe with marking weights a (basic inequality)."""

    d: int
    a: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def build(cls, d, a=None) -> "CanonicalPolarization":
        a_items = tuple(sorted(
            ((str(l), Fraction(c)) for l, c in (dict(a or {})).items()),
            key=lambda p: label_sort_key(p[0])))
        return cls(d=int(d), a=a_items)

    @cached_property
    def a_map(self) -> dict[str, Fraction]:
        return dict(self.a)

    def as_explicit(self, genus: int) -> ExplicitPolarization:
        weight_total = 2 * genus - 2 + sum(self.a_map.values())
        if weight_total <= 0:
            raise ValidationError(
                f"canonical recipe needs 2g-2+sum(a) > 0, got {weight_total}")
        lead = Fraction(self.d - genus + 1)
        return ExplicitPolarization.build(
            s=lead, r=weight_total,
            a={l: lead * c for l, c in self.a},
            alpha={})


@dataclass(frozen=True)
class QProfile:
    """Compiled rational vertex weights for one graph; sum(q) = d."""

    graph: MarkedDualGraph
    q: tuple[tuple[str, Fraction], ...]
    d: int

    @cached_property
    def q_map(self) -> dict[str, Fraction]:
        return dict(self.q)

    def q_of(self, vertex_set) -> Fraction:
        Y = frozenset(str(v) for v in vertex_set)
        return sum((f for v, f in self.q if v in Y), Fraction(0))


def make_profile(graph: MarkedDualGraph, q: dict[str, Fraction], d: int) -> QProfile:
    if set(q) != set(graph.vertex_ids):
        raise ValidationError("profile weights must be keyed by the vertex ids")
    qs = tuple((v, Fraction(q[v])) for v in graph.vertex_ids)
    total = sum((f for _, f in qs), Fraction(0))
    if total != d:
        raise ValidationError(f"profile weights sum to {total}, expected d = {d}")
    return QProfile(graph=graph, q=qs, d=int(d))


def compile_polarization(pol, graph: MarkedDualGraph) -> QProfile:
    """Compile a recipe into the rational vertex weights of one graph."""
    graph.validate()
    if isinstance(pol, QProfile):
        if pol.graph != graph:
            raise ValidationError("profile was compiled for a different graph")
        return pol
    if isinstance(pol, CanonicalPolarization):
        pol = pol.as_explicit(graph.genus)
    if not isinstance(pol, ExplicitPolarization):
        raise ValidationError(f"unsupported polarization object {type(pol).__name__}")

    g = graph.genus
    d_frac = pol.target_degree(g)
    if d_frac.denominator != 1:
        raise ValidationError(
            f"target degree {d_frac} is not an integer for genus {g}")
    d = int(d_frac)

    labels = set(admissible_labels(g, graph.marking_labels))
    for label, _ in pol.alpha:
        if label not in labels:
            raise ValidationError(
                f"alpha label {label} is not admissible for genus {g}, "
                f"markings {list(graph.marking_labels)}")

    alpha = pol.alpha_map
    table = edge_type_table(graph) if alpha else ()
    marks_at = graph.markings_by_vertex
    a_map = pol.a_map
    for label in a_map:
        if label not in graph.marking_map:
            raise ValidationError(f"marking coefficient for unknown label {label}")

    q: dict[str, Fraction] = {}
    for v in graph.vertex_ids:
        w_v = graph.w_of(v)
        numerator = pol.s * w_v
        for mark in marks_at.get(v, ()):
            numerator += a_map.get(mark, Fraction(0))
        if alpha:
            for i, entry in enumerate(table):
                if entry is None:
                    continue
                edge_label, side = entry
                coeff = alpha.get(edge_label)
                if coeff is None or side is None:
                    continue
                u1, u2 = graph.edges[i]
                for endpoint in (u1, u2):
                    if endpoint == v:
                        numerator += coeff if v in side else -coeff
        q[v] = numerator / pol.r + Fraction(w_v, 2)

    profile = make_profile(graph, q, d)
    return profile


def q_subcurve(profile: QProfile, graph: MarkedDualGraph, vertex_set) -> Fraction:
    Y = check_subcurve(graph, vertex_set)
    return profile.q_of(Y)


def is_general(graph: MarkedDualGraph, profile: QProfile
               ) -> tuple[bool, tuple[frozenset[str], ...]]:
    """Generality test with witnesses.

    A proper subcurve Y is integral when q_Z - k_Z/2 is an integer for
    every connected component Z of Y and of its complement; the profile is
    general when no Y is integral.  Witnesses are the integral subcurves,
    one canonical representative per complementary pair.
    """
    ids = graph.vertex_ids
    n = len(ids)
    witnesses: set[frozenset[str]] = set()
    piece_ok: dict[frozenset[str], bool] = {}

    def integral_piece(Z: frozenset[str]) -> bool:
        cached = piece_ok.get(Z)
        if cached is None:
            value = profile.q_of(Z) - Fraction(subcurve_k(graph, Z), 2)
            cached = value.denominator == 1
            piece_ok[Z] = cached
        return cached

    for r in range(1, n):
        for combo in itertools.combinations(ids, r):
            Y = frozenset(combo)
            Yc = frozenset(ids) - Y
            pieces = graph._components(Y) + graph._components(Yc)
            if all(integral_piece(Z) for Z in pieces):
                witnesses.add(min((Y, Yc), key=subcurve_sort_key))
    ordered = tuple(sorted(witnesses, key=subcurve_sort_key))
    return (not ordered, ordered)


def twist_profile(profile: QProfile, bundle: dict[str, int]) -> QProfile:
    """Shift the weights by an integer line-bundle multidegree."""
    shift = {str(v): int(c) for v, c in bundle.items()}
    q = {v: f + shift.get(v, 0) for v, f in profile.q}
    return make_profile(profile.graph, q, profile.d + sum(shift.values()))


def perturb_general(graph: MarkedDualGraph, profile: QProfile,
                    seed: int) -> QProfile:
    """Nudge a profile off every integrality wall, deterministically.

    Identity on already-general profiles.  Offsets sum to zero so d is
    unchanged, and each vertex moves by less than 1/(2L) where L is the
    least common multiple of the weight denominators (and 2).  The walls
    are finitely many rational hyperplanes, so the seeded retry terminates.
    """
    general, _ = is_general(graph, profile)
    if general:
        return profile
    ids = graph.vertex_ids
    n = len(ids)
    if n == 1:
        return profile  # no proper subcurves; unreachable via is_general
    lcm = 2
    for _, f in profile.q:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    rng = random.Random(seed)
    for attempt in range(1, 10001):
        scale = 2 * lcm * (n + 1) * attempt
        offsets = [rng.randint(-attempt, attempt) for _ in range(n - 1)]
        offsets.append(-sum(offsets))
        q = {v: f + Fraction(t, scale)
             for (v, f), t in zip(profile.q, offsets)}
        candidate = make_profile(graph, q, profile.d)
        general, _ = is_general(graph, candidate)
        if general:
            return candidate
    raise PreconditionError("perturbation failed to leave the walls")  # pragma: no cover
