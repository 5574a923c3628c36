"""Exhaustive maximum singularity degree for small orthant instances.

This is an oracle, written independently of the greedy machinery in
:mod:`frkit.lp_fr.exposing`. At a face with support ``P`` the admissible
exposing vectors restricted to ``P`` form the pointed cone
``C = U_P cap R^P_+`` with ``U_P`` the restriction of ``L^perp`` to ``P``.
Its extreme rays are the sign-definite elementary vectors of ``U_P`` (nonzero
vectors of minimal support), and the realizable exposed sets are exactly the
nonempty unions of extreme-ray supports. Elementary vectors of a
``k``-dimensional space are found by forcing ``k - 1`` coordinates to zero.
"""
from fractions import Fraction
from itertools import combinations

from ..errors import TooLarge
from ..kernel.intmat import nullspace, rank
from ..kernel.simplex import LpTask, Optimal, lp_solve
from .model import FRSequenceLP, LinearSet, LpExposingVector, OrthantFace


class _Oracle:
    def __init__(self, L: LinearSet):
        self.L = L
        m = L.m
        if any(L.b):
            ybasis = nullspace([list(L.b)], m)
        else:
            ybasis = [[int(i == j) for i in range(m)] for j in range(m)]
        self.ybasis = [[Fraction(v) for v in y] for y in ybasis]
        # column k of W is A^T y_k
        self.W = [L.A.rmatvec(y) for y in self.ybasis]
        self._rays = {}
        self._msd = {}

    def _w_row(self, i):
        return [self.W[k][i] for k in range(len(self.W))]

    def rays(self, P: tuple) -> dict:
        """Extreme rays at support ``P``: {support: coefficient vector}."""
        if P in self._rays:
            return self._rays[P]
        r = len(self.W)
        M = [self._w_row(i) for i in P]
        out = {}
        k = rank(M, r) if M and r else 0
        if k:
            for Z in combinations(range(len(P)), k - 1):
                basis = nullspace([M[t] for t in Z], r) if Z else \
                    [[int(i == j) for i in range(r)] for j in range(r)]
                images = [[sum((M[t][c] * v[c] for c in range(r)), Fraction(0))
                           for t in range(len(P))] for v in basis]
                nonzero = [(v, u) for v, u in zip(basis, images) if any(u)]
                if not nonzero or rank([u for _, u in nonzero], len(P)) != 1:
                    continue
                coef, u = nonzero[0]
                if all(x >= 0 for x in u):
                    sign = 1
                elif all(x <= 0 for x in u):
                    sign = -1
                else:
                    continue
                sup = frozenset(P[t] for t in range(len(P)) if u[t] != 0)
                out.setdefault(sup, tuple(sign * Fraction(c) for c in coef))
        self._rays[P] = out
        return out

    def exposed_sets(self, P: tuple) -> dict:
        """Every realizable exposed set with one coefficient vector for it."""
        rays = list(self.rays(P).items())
        sets = {}
        for sup, coef in rays:
            new = {sup: coef}
            for s, c in sets.items():
                u = s | sup
                if u not in sets and u not in new:
                    new[u] = tuple(a + b for a, b in zip(c, coef))
            for s, c in new.items():
                sets.setdefault(s, c)
        return sets

    def vector(self, coef) -> LpExposingVector:
        m = self.L.m
        y = [sum((c * yb[i] for c, yb in zip(coef, self.ybasis)), Fraction(0))
             for i in range(m)]
        return LpExposingVector(tuple(y), self.L.A.rmatvec(y))

    def msd(self, zeros: frozenset) -> int:
        if zeros in self._msd:
            return self._msd[zeros]
        P = tuple(i for i in range(self.L.n) if i not in zeros)
        best = 0
        for D in self.exposed_sets(P):
            best = max(best, 1 + self.msd(zeros | D))
        self._msd[zeros] = best
        return best

    def longest(self, zeros: frozenset, limit: int):
        """Up to ``limit`` longest chains from ``zeros`` as lists of
        (exposed set, coefficients)."""
        target = self.msd(zeros)
        if target == 0:
            return [[]]
        P = tuple(i for i in range(self.L.n) if i not in zeros)
        chains = []
        for D, coef in self.exposed_sets(P).items():
            if 1 + self.msd(zeros | D) != target:
                continue
            for tail in self.longest(zeros | D, limit - len(chains)):
                chains.append([(D, coef)] + tail)
                if len(chains) >= limit:
                    return chains
        return chains


def _check_size(L: LinearSet, cap_n: int):
    if L.n > cap_n:
        raise TooLarge(f"n = {L.n} exceeds the brute-force cap {cap_n}")


def brute_force_msd(L: LinearSet, cap_n: int = 12) -> int:
    """Maximum FR-sequence length from the full orthant, by exhaustive search."""
    _check_size(L, cap_n)
    return _Oracle(L).msd(frozenset())


def longest_sequences(L: LinearSet, limit: int = 50, cap_n: int = 12) -> list:
    """Up to ``limit`` FR sequences of maximum length."""
    _check_size(L, cap_n)
    orc = _Oracle(L)
    start = OrthantFace.full(L.n)
    return [FRSequenceLP.build(start, [orc.vector(c) for _, c in chain])
            for chain in orc.longest(frozenset(), limit)]


def realizable_exposed_sets(L: LinearSet, F: OrthantFace) -> set:
    return set(_Oracle(L).exposed_sets(F.support))


def is_realizable(L: LinearSet, F: OrthantFace, D) -> bool:
    """Direct LP test: is there ``y`` with ``b^T y = 0``, ``(A^T y)_i = 0``
    off ``D`` and ``(A^T y)_i >= 1`` on ``D`` (within the face support)?"""
    D = set(D)
    m = L.m
    eqs = [(L.b, 0)] if any(L.b) else []
    geqs = []
    for i in F.support:
        col = L.A.column(i)
        if i in D:
            geqs.append((col, 1))
        else:
            eqs.append((col, 0))
    res = lp_solve(LpTask((0,) * m, tuple(eqs), tuple(geqs), n_vars=m))
    return isinstance(res, Optimal)
