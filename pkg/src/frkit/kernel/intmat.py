"""Fraction-free integer pivoting.

A tableau is kept as an integer array ``T`` together with a positive common
denominator ``D``; the represented rational tableau is ``T / D``. Pivoting on
``(r, s)`` uses the Bareiss/Edmonds update

    T'[i, j] = (T[i, j] * T[r, s] - T[i, s] * T[r, j]) / D      (i != r)

whose division is always exact, so entries stay integers that are minors of
the input. Arrays start as int64 and are widened to Python ints (object
dtype) once magnitudes could overflow.
"""
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .rational import as_rational, integer_scaling

# 2 * amax**2 must stay below 2**63
_INT64_SAFE = 1 << 30


def widen_if_needed(T: np.ndarray) -> np.ndarray:
    if T.dtype == object or T.size == 0:
        return T
    if int(np.abs(T).max()) > _INT64_SAFE:
        return T.astype(object)
    return T


def narrow(T: np.ndarray) -> np.ndarray:
    """Back to int64 when an object array has small entries."""
    if T.dtype == object and T.size and int(np.abs(T).max()) <= _INT64_SAFE:
        return T.astype(np.int64)
    if T.dtype == object and T.size == 0:
        return T.astype(np.int64)
    return T


def to_int_array(rows) -> np.ndarray:
    """Integer matrix from nested Python ints, choosing int64 when safe."""
    arr = np.array(rows, dtype=object)
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64)
    if int(np.abs(arr).max()) <= _INT64_SAFE:
        return arr.astype(np.int64)
    return arr


def pivot(T: np.ndarray, r: int, s: int, D):
    """Pivot in place semantics (returns the new array and denominator)."""
    T = widen_if_needed(T)
    piv = T[r, s]
    if piv == 0:
        raise ZeroDivisionError("zero pivot")
    row = T[r, :].copy()
    col = T[:, s].copy()
    new = T * piv
    new -= np.outer(col, row)
    if D != 1:
        new //= D
    new[r, :] = row
    if piv < 0:
        new = -new
        piv = -piv
    if T.dtype != object:
        piv = int(piv)
    return new, piv


def scale_rows_to_int(rows: Sequence[Sequence]) -> list:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for r in rows:
        r = [as_rational(x) for x in r]
        k = integer_scaling(r)
        out.append([int(x * k) for x in r])
    return out


def _int_matrix(rows, ncols):
    if isinstance(rows, np.ndarray) and rows.dtype != float:
        T = widen_if_needed(rows.copy())
        return T.reshape(rows.shape[0], ncols if ncols is not None else rows.shape[1])
    int_rows = scale_rows_to_int(rows)
    if ncols is None:
        ncols = len(int_rows[0]) if int_rows else 0
    T = to_int_array(int_rows) if int_rows else np.zeros((0, ncols), dtype=np.int64)
    return T.reshape(len(int_rows), ncols)


def gauss_jordan(rows, ncols: int | None = None):
    """Reduce a rational matrix (or an integer numpy array). Returns
    ``(T, D, pivots)`` where ``pivots`` lists ``(row, col)`` pairs; pivot rows
    come first in ``T``."""
    T = _int_matrix(rows, ncols)
    ncols = T.shape[1]
    D = 1
    pivots = []
    r = 0
    nrows = T.shape[0]
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(T[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            T[[r, k], :] = T[[k, r], :]
        T, D = pivot(T, r, c, D)
        pivots.append((r, c))
        r += 1
    return T, D, pivots


def rank(rows, ncols: int | None = None) -> int:
    if len(rows) == 0:
        return 0
    return len(gauss_jordan(rows, ncols)[2])


def nullspace_array(rows, ncols: int) -> np.ndarray:
    """Integer basis of ``{x : M x = 0}`` as the columns of an array, each
    column primitive."""
    if len(rows) == 0:
        return np.eye(ncols, dtype=np.int64)
    T, D, pivots = gauss_jordan(rows, ncols)
    prow = [r for r, _ in pivots]
    pcol = [c for _, c in pivots]
    free = np.setdiff1d(np.arange(ncols), pcol)
    dtype = object if T.dtype == object or not isinstance(D, (int, np.integer)) \
        or abs(int(D)) > _INT64_SAFE else np.int64
    X = np.zeros((ncols, free.size), dtype=dtype)
    if free.size == 0:
        return X.astype(np.int64)
    X[free, np.arange(free.size)] = int(D)
    if pcol:
        X[pcol, :] = -T[np.ix_(prow, free)]
    if X.dtype == object:
        for k in range(free.size):
            g = 0
            for v in X[:, k]:
                g = gcd(g, int(v))
            if g > 1:
                X[:, k] = X[:, k] // g
        return narrow(X)
    g = np.gcd.reduce(X, axis=0)
    g[g == 0] = 1
    return X // g


def nullspace(rows, ncols: int) -> list:
    """Integer basis (primitive vectors) of ``{x : M x = 0}``."""
    X = nullspace_array(rows, ncols)
    return [[int(v) for v in X[:, k]] for k in range(X.shape[1])]


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int):
    """One exact solution of ``M x = rhs`` as Fractions, or None."""
    if len(rows) == 0:
        return tuple(Fraction(0) for _ in range(ncols))
    aug = [list(r) + [as_rational(b)] for r, b in zip(rows, rhs)]
    T, D, pivots = gauss_jordan(aug, ncols + 1)
    if any(c == ncols for _, c in pivots):
        return None
    x = [Fraction(0)] * ncols
    for r, c in pivots:
        x[c] = Fraction(int(T[r, ncols]), int(D))
    return tuple(x)


def int_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact integer product, in int64 when no overflow is possible."""
    if X.shape[1] == 0:
        return np.zeros((X.shape[0], Y.shape[1]), dtype=np.int64)
    if X.dtype != object and Y.dtype != object and X.size and Y.size:
        bound = int(np.abs(X).max()) * int(np.abs(Y).max()) * X.shape[1]
        if bound < (1 << 62):
            return X @ Y
    return narrow(np.dot(X.astype(object), Y.astype(object)))
