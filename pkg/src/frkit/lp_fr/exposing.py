"""Exposing vectors for ``L`` at faces of the nonnegative orthant.

``L^perp = {A^T y : b^T y = 0}``. We parametrize ``y = B z`` with ``B`` an
integer basis of ``{y : b^T y = 0}``, so that ``w_i = (A^T B z)_i``. Each row
of ``G = A^T B`` is rescaled by a positive integer; this keeps signs and zero
patterns (all that matters for the searches below) and makes every LP integral.
The exact ``w`` is always recomputed from ``y`` afterwards.

Minimality of an exposed set ``T`` is decided by a rank test: ``T`` is
inclusion-minimal iff the vectors of ``L^perp`` whose restriction to the face
support lives inside ``T`` form (after restriction) a line. If that space has
dimension two or more, moving from ``w`` along any non-parallel direction until
a coordinate hits zero gives an exposing vector with a smaller exposed set; if
it is a line, every candidate is a multiple of ``w``.
"""
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..kernel.intmat import int_matmul, narrow, nullspace, nullspace_array, rank, to_int_array
from ..kernel.rational import integer_scaling
from ..kernel.simplex import Optimal, solve_standard
from .model import LinearSet, LpExposingVector, OrthantFace


class PerpParam:
    """Integer parametrization of ``L^perp`` for one linear set."""

    def __init__(self, L: LinearSet):
        self.L = L
        m, n = L.m, L.n
        if any(L.b):
            B = nullspace([list(L.b)], m)
        else:
            B = [[int(i == j) for i in range(m)] for j in range(m)]
        # columns of B are the basis vectors
        self.B = to_int_array(B).reshape(len(B), m).T if B else np.zeros((m, 0), dtype=np.int64)
        rows = []
        for i in range(n):
            col = L.A.column(i)
            k = integer_scaling(col)
            rows.append([int(a * k) for a in col])
        At = to_int_array(rows).reshape(n, m) if n else np.zeros((0, m), dtype=np.int64)
        self.G = int_matmul(At, self.B)

    @property
    def r(self) -> int:
        return self.G.shape[1]

    def vector(self, z: Sequence) -> LpExposingVector:
        """Exact ``(y, w)`` for the parameter ``z``."""
        zi = _as_column(z)
        y = tuple(Fraction(int(v)) for v in int_matmul(self.B, zi)[:, 0])
        if not isinstance(z, np.ndarray):
            k = integer_scaling([Fraction(v) for v in z])
            y = tuple(v / k for v in y)
        return LpExposingVector(y, self.L.A.rmatvec(y))

    def signs(self, z: Sequence, idx: Sequence[int]) -> list:
        """Signs of ``w_i`` (i in idx) for the parameter ``z``."""
        idx = list(idx)
        if not idx:
            return []
        v = int_matmul(self.G[idx, :], _as_column(z))[:, 0]
        return [int(x > 0) - int(x < 0) for x in v]


def _as_column(z) -> np.ndarray:
    """``z`` as an integer column. Rational input is scaled by a positive
    integer, which keeps every sign."""
    if isinstance(z, np.ndarray):
        return z.reshape(-1, 1)
    zq = [Fraction(v) for v in z]
    k = integer_scaling(zq)
    return to_int_array([[int(v * k)] for v in zq]).reshape(len(zq), 1)


def cone_point(H: np.ndarray, target=None):
    """Find ``z`` with ``H z >= 0`` maximizing ``sum_{i in target} (H z)_i``
    subject to that sum being at most 1. Returns a positive integer multiple
    of the optimal ``z`` (an integer array) when the optimum is positive, else
    None. ``target`` defaults to all rows."""
    k, r = H.shape
    if k == 0 or r == 0:
        return None
    H = narrow(H.astype(object)) if H.dtype == object else H
    mask = np.zeros(k, dtype=bool)
    if target is None:
        mask[:] = True
    else:
        mask[list(target)] = True
    if not mask.any():
        return None
    csum = H[mask].sum(axis=0)
    C = 2 * r + k + 1
    dtype = object if H.dtype == object else np.int64
    A = np.zeros((k + 1, C), dtype=dtype)
    A[:k, :r] = -H
    A[:k, r:2 * r] = H
    A[np.arange(k), 2 * r + np.arange(k)] = 1
    A[k, :r] = csum
    A[k, r:2 * r] = -csum
    A[k, -1] = 1
    b = [0] * k + [1]
    c = [0] * (2 * r) + [int(x) for x in mask] + [0]
    res = solve_standard(A, b, c)
    if not isinstance(res, Optimal) or res.value <= 0:
        return None
    x = res.point
    # positive integer multiple of the optimal point
    k = integer_scaling(x)
    z = [int((x[j] - x[r + j]) * k) for j in range(r)]
    return to_int_array(z)


class _Restricted:
    """Exposing vectors whose exposed set lies in ``T`` (face support ``P``)."""

    def __init__(self, par: PerpParam, P: Sequence[int], T: Sequence[int]):
        self.par = par
        Tset = set(T)
        self.T = [i for i in P if i in Tset]
        off = [i for i in P if i not in Tset]
        r = par.r
        self.Z = nullspace_array(par.G[off, :], r) if off else np.eye(r, dtype=np.int64)
        self.H = int_matmul(par.G[self.T, :], self.Z) if self.T else \
            np.zeros((0, self.Z.shape[1]), dtype=np.int64)

    def dim(self) -> int:
        if self.H.size == 0:
            return 0
        return rank(self.H)

    def lift(self, zz: np.ndarray) -> np.ndarray:
        """Parameter ``z`` of ``L^perp`` from restricted coordinates."""
        return int_matmul(self.Z, _as_column(zz))[:, 0]

    def drop(self, j: int):
        """An exposing vector with exposed set inside ``T \\ {j}``, as a
        parameter ``z``, or None."""
        pos = self.T.index(j)
        row = self.H[pos:pos + 1, :]
        ncols = self.H.shape[1]
        S = nullspace_array(row, ncols)
        if S.shape[1] == 0:
            return None
        keep = [t for t in range(len(self.T)) if t != pos]
        H2 = int_matmul(self.H[keep, :], S)
        zz = cone_point(H2)
        if zz is None:
            return None
        return self.lift(int_matmul(S, _as_column(zz))[:, 0])


def _ordered_support(F: OrthantFace, order) -> list:
    if order is None:
        return list(F.support)
    zs = F.zero_set
    return [i for i in order if i not in zs]


def _exposed(par: PerpParam, z, P) -> list:
    sg = par.signs(z, P)
    return [i for i, s in zip(P, sg) if s != 0]


def find_exposing(L: LinearSet, F: OrthantFace, *, order=None, par: PerpParam | None = None):
    """An exposing vector for ``(L, F)`` normalized to sum 1 over the face
    support, or None when ``L`` meets the relative interior of ``F``."""
    par = par or PerpParam(L)
    P = _ordered_support(F, order)
    if not P:
        return None
    z = cone_point(par.G[P, :])
    if z is None:
        return None
    return par.vector(z).normalized(F)


def find_minimal_exposing(L: LinearSet, F: OrthantFace, *, order=None,
                          par: PerpParam | None = None):
    """A minimal exposing vector for ``(L, F)``, or None.

    Starts from :func:`find_exposing` and shrinks the exposed set: indices are
    tried in ``order`` (ascending by default) and the first one that can be
    dropped is dropped, until the rank test certifies minimality.
    """
    par = par or PerpParam(L)
    P = _ordered_support(F, order)
    if not P:
        return None
    z = cone_point(par.G[P, :])
    if z is None:
        return None
    while True:
        T = _exposed(par, z, P)
        R = _Restricted(par, P, T)
        if R.dim() <= 1:
            break
        for j in R.T:
            z2 = R.drop(j)
            if z2 is not None:
                z = z2
                break
        else:  # pragma: no cover - excluded by the rank argument
            raise AssertionError("rank test and drop searches disagree")
    return par.vector(z).normalized(F)


def exposed_dimension(L: LinearSet, F: OrthantFace, T, par: PerpParam | None = None) -> int:
    """Dimension of ``{u in L^perp : u vanishes on supp(F) \\ T}`` restricted
    to ``T``; equals 1 exactly when ``T`` is a minimal exposed set."""
    par = par or PerpParam(L)
    return _Restricted(par, list(F.support), list(T)).dim()


def is_minimal_step(L: LinearSet, F: OrthantFace, w: LpExposingVector,
                    par: PerpParam | None = None) -> bool:
    """True iff no exposing vector has an exposed set strictly inside that of
    ``w``. One restricted feasibility solve per index of the exposed set."""
    w.check(L, F)
    par = par or PerpParam(L)
    T = sorted(w.exposed_set(F))
    R = _Restricted(par, list(F.support), T)
    return all(R.drop(j) is None for j in T)


def max_support_exposing(L: LinearSet, F: OrthantFace, par: PerpParam | None = None):
    """An exposing vector whose exposed set is as large as possible (a
    relative-interior point of the cone of exposing vectors), or None."""
    par = par or PerpParam(L)
    P = list(F.support)
    total = np.zeros(par.r, dtype=np.int64)
    covered = set()
    while True:
        rest = [t for t, i in enumerate(P) if i not in covered]
        if not rest:
            break
        z = cone_point(par.G[P, :], target=rest)
        if z is None:
            break
        # sum of points of the cone stays in the cone and unions supports
        total = narrow((total.astype(object) + z.astype(object)))
        covered = set(_exposed(par, total, P))
    if not covered:
        return None
    return par.vector(total).normalized(F)
