"""JSON document formats: graphs, polarizations, sheaves, phi tables.

Rationals travel as reduced fraction strings ("3", "-1/5"); no floating
point is accepted anywhere.  Edges are identified by their index in the
"edges" array, which multigraphs need.  Serialization emits keys in a
fixed order so output is byte-identical across runs and platforms.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ValidationError
from .graphs import MarkedDualGraph, NodeTypeLabel, label_sort_key
from .maps import PhiTable
from .polarization import (CanonicalPolarization, ExplicitPolarization,
                           QProfile, compile_polarization, make_profile)
from .sheaves import SheafType, validate_sheaf


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValidationError("floating point is not accepted; use p/q strings")
    if not isinstance(value, str):
        raise ValidationError(f"expected a rational string, got {value!r}")
    text = value.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            d = int(den)
            if d == 0:
                raise ValidationError(f"zero denominator in {value!r}")
            return Fraction(int(num), d)
        return Fraction(int(text))
    except ValueError as exc:
        raise ValidationError(f"malformed rational {value!r}") from exc


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _reject_floats(value):
    raise ValidationError("floating point is not accepted; use p/q strings")


def loads_document(text: str) -> dict:
    return json.loads(text, parse_float=_reject_floats)


def _require_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    return value


# -- graphs ------------------------------------------------------------------


def parse_graph_document(doc: dict) -> MarkedDualGraph:
    if not isinstance(doc, dict):
        raise ValidationError("graph document must be a JSON object")
    vertices = doc.get("vertices")
    if not isinstance(vertices, list):
        raise ValidationError('graph document needs a "vertices" array')
    vs = []
    for entry in vertices:
        if not isinstance(entry, dict) or "id" not in entry or "genus" not in entry:
            raise ValidationError('each vertex needs "id" and "genus"')
        vs.append((str(entry["id"]), _require_int(entry["genus"], "genus")))
    edges = doc.get("edges", [])
    if not isinstance(edges, list):
        raise ValidationError('"edges" must be an array of id pairs')
    es = []
    for entry in edges:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ValidationError(f"edge {entry!r} must be a pair of vertex ids")
        es.append((str(entry[0]), str(entry[1])))
    markings = doc.get("markings", {})
    if not isinstance(markings, dict):
        raise ValidationError('"markings" must map labels to vertex ids')
    graph = MarkedDualGraph.build(
        vertices=vs, edges=es,
        markings={str(l): str(v) for l, v in markings.items()},
        base_vertex=doc.get("base_vertex"))
    expected = doc.get("expected_genus")
    if expected is not None and graph.genus != _require_int(expected, "expected_genus"):
        raise ValidationError(
            f"expected_genus {expected} does not match computed genus {graph.genus}")
    return graph


def graph_document(graph: MarkedDualGraph) -> dict:
    doc = {
        "vertices": [{"id": v, "genus": g} for v, g in graph.vertices],
        "edges": [[u, v] for u, v in graph.edges],
        "markings": {l: v for l, v in graph.markings},
    }
    if graph.base_vertex is not None:
        doc["base_vertex"] = graph.base_vertex
    doc["expected_genus"] = graph.genus
    return doc


# -- node type labels --------------------------------------------------------


def parse_label(entry: dict) -> NodeTypeLabel:
    if not isinstance(entry, dict) or "b" not in entry or "B" not in entry:
        raise ValidationError('node type entries need "b" and "B"')
    if not isinstance(entry["B"], list):
        raise ValidationError('"B" must be an array of marking labels')
    return NodeTypeLabel.of(_require_int(entry["b"], "b"),
                            [str(l) for l in entry["B"]])


def label_document(label: NodeTypeLabel) -> dict:
    return {"b": label.side_genus, "B": list(label.side_markings)}


# -- polarizations -----------------------------------------------------------


def parse_polarization_document(doc: dict, graph: MarkedDualGraph | None = None):
    """Returns an ExplicitPolarization, CanonicalPolarization or QProfile.

    Profile documents need the graph they are keyed against.
    """
    if not isinstance(doc, dict):
        raise ValidationError("polarization document must be a JSON object")
    kind = doc.get("kind")
    if kind == "explicit":
        a = {str(l): parse_rational(c) for l, c in doc.get("a", {}).items()}
        alpha = {}
        for entry in doc.get("alpha", []):
            label = parse_label(entry)
            if label in alpha:
                raise ValidationError(f"duplicate alpha label {label}")
            alpha[label] = parse_rational(entry.get("value"))
        return ExplicitPolarization.build(
            s=parse_rational(doc.get("s", "0")),
            r=parse_rational(doc.get("r", "1")),
            a=a, alpha=alpha)
    if kind == "canonical":
        return CanonicalPolarization.build(
            d=_require_int(doc.get("d"), "d"),
            a={str(l): parse_rational(c) for l, c in doc.get("a", {}).items()})
    if kind == "profile":
        if graph is None:
            raise ValidationError("profile documents need a graph")
        q = {str(v): parse_rational(c) for v, c in doc.get("q", {}).items()}
        return make_profile(graph, q, _require_int(doc.get("d"), "d"))
    raise ValidationError(f'unknown polarization kind {kind!r}')


def polarization_document(pol) -> dict:
    if isinstance(pol, ExplicitPolarization):
        return {
            "kind": "explicit",
            "s": format_rational(pol.s),
            "r": format_rational(pol.r),
            "a": {l: format_rational(c) for l, c in pol.a},
            "alpha": [dict(label_document(label), value=format_rational(c))
                      for label, c in pol.alpha],
        }
    if isinstance(pol, CanonicalPolarization):
        return {
            "kind": "canonical",
            "d": pol.d,
            "a": {l: format_rational(c) for l, c in pol.a},
        }
    if isinstance(pol, QProfile):
        return profile_document(pol)
    raise ValidationError(f"cannot serialize {type(pol).__name__}")


def profile_document(profile: QProfile) -> dict:
    return {
        "kind": "profile",
        "q": {v: format_rational(f) for v, f in profile.q},
        "d": profile.d,
    }


def resolve_profile(pol, graph: MarkedDualGraph) -> QProfile:
    return compile_polarization(pol, graph)


# -- sheaves ------------------------------------------------------------------


def parse_sheaf_document(doc: dict, graph: MarkedDualGraph) -> SheafType:
    if not isinstance(doc, dict):
        raise ValidationError("sheaf document must be a JSON object")
    degrees_doc = doc.get("degrees")
    if not isinstance(degrees_doc, dict):
        raise ValidationError('sheaf document needs a "degrees" object')
    degrees = {str(v): _require_int(d, f"degree of {v}")
               for v, d in degrees_doc.items()}
    missing = set(graph.vertex_ids) - set(degrees)
    extra = set(degrees) - set(graph.vertex_ids)
    if missing or extra:
        raise ValidationError(
            f"sheaf degrees mismatch: missing {sorted(missing)}, unknown {sorted(extra)}")
    nonfree = doc.get("nonfree", [])
    if not isinstance(nonfree, list):
        raise ValidationError('"nonfree" must be an array of edge indices')
    sheaf = SheafType(
        nonfree_edges=frozenset(_require_int(e, "edge index") for e in nonfree),
        degrees=tuple((v, degrees[v]) for v in graph.vertex_ids))
    return validate_sheaf(graph, sheaf)


def sheaf_document(sheaf: SheafType) -> dict:
    return {
        "nonfree": sorted(sheaf.nonfree_edges),
        "degrees": {v: d for v, d in sheaf.degrees},
    }


# -- phi tables ----------------------------------------------------------------


def parse_phi_document(doc: dict) -> tuple[PhiTable, int, tuple[str, ...]]:
    if not isinstance(doc, dict):
        raise ValidationError("phi document must be a JSON object")
    genus = _require_int(doc.get("genus"), "genus")
    markings = doc.get("markings")
    if not isinstance(markings, list) or not markings:
        raise ValidationError('phi document needs a nonempty "markings" array')
    entries = doc.get("phi")
    if not isinstance(entries, list):
        raise ValidationError('phi document needs a "phi" array')
    values = {}
    for entry in entries:
        label = parse_label(entry)
        if label in values:
            raise ValidationError(f"duplicate phi label {label}")
        values[label] = parse_rational(entry.get("value"))
    labels = tuple(sorted((str(l) for l in markings), key=label_sort_key))
    return PhiTable.build(values), genus, labels
