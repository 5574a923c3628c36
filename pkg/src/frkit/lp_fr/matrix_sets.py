"""Polyhedra attached to binary matrices and bounds on their MSD.

For ``M in {0,1}^{p x q}`` the variables are indexed by the set ``E`` of ones
of ``M`` in row-major order; there is one homogeneous constraint per row
(summing that row's variables) and one per column.
"""
from ..errors import NotApplicable
from ..kernel.rational import RationalMatrix
from .model import LinearSet


def ones_index(M) -> list:
    return [(i, j) for i, row in enumerate(M) for j, v in enumerate(row) if v]


def matrix_linear_set(M) -> tuple:
    """Return ``(L, E)``: the row/column-sum set of ``M`` and its index list
    (0-based pairs)."""
    M = [[int(v) for v in row] for row in M]
    if any(v not in (0, 1) for row in M for v in row):
        raise ValueError("matrix must be binary")
    p = len(M)
    q = len(M[0]) if p else 0
    E = ones_index(M)
    rows = [[int(i == r) for (i, _) in E] for r in range(p)]
    rows += [[int(j == c) for (_, j) in E] for c in range(q)]
    A = RationalMatrix.from_rows(rows, cols=len(E))
    return LinearSet(A, (0,) * (p + q)), E


def all_ones(p: int, q: int) -> LinearSet:
    return matrix_linear_set([[1] * q for _ in range(p)])[0]


def block_matrix(columns, dup: int) -> list:
    """``[v_1 ... v_1 | v_2 ... v_2 | ...]`` with ``dup`` copies of each."""
    cols = [list(v) for v in columns]
    p = len(cols[0])
    return [[v[i] for v in cols for _ in range(dup)] for i in range(p)]


def msd_upper_bound_blocks(columns, dup: int) -> int:
    """Upper bound on the MSD of the polyhedron of :func:`block_matrix`.

    With every block column nonzero the blocks are all-ones matrices padded
    with zero rows, and the bound is the sum of their exact values
    ``|v_j| + dup - 1``. With at most three ones per column and some zero
    column, each nonzero block contributes at most ``dup + 2`` and at most
    ``len(columns) - 1`` blocks are nonzero.
    """
    cols = [[int(x) for x in v] for v in columns]
    if not cols:
        raise ValueError("need at least one column")
    if dup < 1:
        raise ValueError("dup must be positive")
    weights = [sum(v) for v in cols]
    if all(weights):
        return sum(w + dup - 1 for w in weights)
    if all(w <= 3 for w in weights):
        return (dup + 2) * (len(cols) - 1)
    raise NotApplicable("a zero column is present and some column has more than three ones")
