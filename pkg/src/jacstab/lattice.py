"""Exact integer linear algebra on graph Laplacians.

Used as independent oracles: the number of spanning trees (any cofactor of
the Laplacian, computed fraction-free) predicts how many multidegree
classes a fixed total degree splits into, and membership of a difference
vector in the integer column span of the Laplacian decides multidegree
equivalence.  Loops are excluded throughout; they contribute neither to
spanning trees nor to multidegree moves.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PreconditionError, ValidationError
from .graphs import MarkedDualGraph


def laplacian(graph: MarkedDualGraph) -> list[list[int]]:
    """Loop-free Laplacian: diagonal = non-loop valence, off-diagonal =
    minus edge multiplicity.  Rows and columns follow the vertex order."""
    n = len(graph.vertices)
    index = graph.vertex_index
    L = [[0] * n for _ in range(n)]
    for u, v in graph.edges:
        if u == v:
            continue
        i, j = index[u], index[v]
        L[i][j] -= 1
        L[j][i] -= 1
        L[i][i] += 1
        L[j][j] += 1
    return L


def _det_bareiss(matrix: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot_row = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if pivot_row is None:
                return 0
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def complexity(graph: MarkedDualGraph) -> int:
    """Number of spanning trees, via a cofactor of the Laplacian."""
    graph.validate()
    if not graph.is_connected():
        raise ValidationError("complexity requires a connected graph")
    L = laplacian(graph)
    reduced = [row[:-1] for row in L[:-1]]
    value = _det_bareiss(reduced)
    assert value > 0, "matrix-tree count must be positive on a connected graph"
    return value


def _solve_rational(matrix: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Solve a square nonsingular integer system exactly over Q."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col]
        a[col] = [x / inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def multidegrees_equivalent(graph: MarkedDualGraph,
                            d1: dict[str, int], d2: dict[str, int]) -> bool:
    """Whether two multidegrees differ by an integer Laplacian move.

    Decided by an exact integral solve: on a connected graph the rational
    kernel of the Laplacian is spanned by the all-ones vector, so the
    difference lies in the integer column span iff the unique solution
    with last coordinate 0 is integral.
    """
    graph.validate()
    ids = graph.vertex_ids
    if set(d1) != set(ids) or set(d2) != set(ids):
        raise ValidationError("multidegree vectors must be keyed by the vertex ids")
    if sum(d1.values()) != sum(d2.values()):
        raise PreconditionError(
            f"total degrees differ: {sum(d1.values())} vs {sum(d2.values())}")
    n = len(ids)
    if n == 1:
        return True
    diff = [int(d1[v]) - int(d2[v]) for v in ids]
    L = laplacian(graph)
    reduced = [row[:-1] for row in L[:-1]]
    solution = _solve_rational(reduced, diff[:-1])
    if solution is None:
        raise ValidationError("graph is disconnected")
    if any(x.denominator != 1 for x in solution):
        return False
    # Consistency of the dropped row is automatic (all row sums are zero),
    # but check it anyway.
    last = sum(L[n - 1][j] * solution[j] for j in range(n - 1))
    return last == diff[n - 1]
