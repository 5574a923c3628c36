"""Exact two-phase primal simplex over the rationals.

The tableau is fraction-free (see :mod:`frkit.kernel.intmat`), so every
verdict is exact. Entering columns follow Dantzig's rule until a run of
degenerate pivots is seen; from then on Bland's rule is used for the rest of
the solve, which rules out cycling.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import MalformedTask
from .intmat import int_matmul, narrow, pivot, to_int_array
from .rational import as_rational, integer_scaling, rational_vector

DEGENERATE_STREAK = 50


@dataclass(frozen=True)
class LpTask:
    """maximize ``objective . x`` over free variables ``x`` subject to
    ``a . x == beta`` for each equality and ``g . x >= gamma`` for each
    inequality."""

    objective: tuple
    equalities: tuple = ()
    inequalities_geq: tuple = ()
    n_vars: int | None = None

    def __post_init__(self):
        obj = rational_vector(self.objective)
        n = len(obj) if self.n_vars is None else self.n_vars
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "n_vars", n)
        eqs = tuple((rational_vector(a), as_rational(beta)) for a, beta in self.equalities)
        geqs = tuple((rational_vector(g), as_rational(gamma))
                     for g, gamma in self.inequalities_geq)
        object.__setattr__(self, "equalities", eqs)
        object.__setattr__(self, "inequalities_geq", geqs)
        if len(obj) != n:
            raise MalformedTask(f"objective has length {len(obj)}, expected {n}")
        for kind, rows in (("equality", eqs), ("inequality", geqs)):
            for k, (a, _) in enumerate(rows):
                if len(a) != n:
                    raise MalformedTask(
                        f"{kind} {k} has length {len(a)}, expected {n}")


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: tuple


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Unbounded:
    pass


def _as_int_array(A, ncols):
    if isinstance(A, np.ndarray) and A.dtype != float:
        return A.reshape(A.shape[0], ncols)
    A = list(A)
    if not A:
        return np.zeros((0, ncols), dtype=np.int64)
    return to_int_array([[int(x) for x in r] for r in A]).reshape(len(A), ncols)


class _Tableau:
    """Standard form ``max c.x, A x = b, x >= 0`` with integer data."""

    def __init__(self, A, b, c):
        A = _as_int_array(A, len(c))
        b = np.array([int(x) for x in b], dtype=object)
        R, C = A.shape
        A = A.astype(object) if A.dtype == object else A.copy()
        neg = np.nonzero(b < 0)[0]
        if neg.size:
            A[neg, :] = -A[neg, :]
            b[neg] = -b[neg]
        self.n_struct = C
        self.c = [int(x) for x in c]
        # an existing column equal to e_i can start the basis in row i
        basis = [-1] * R
        if R and C:
            nz = A != 0
            for j in np.nonzero(nz.sum(axis=0) == 1)[0]:
                i = int(np.nonzero(nz[:, j])[0][0])
                if basis[i] < 0 and A[i, j] == 1:
                    basis[i] = int(j)
        art_rows = [i for i in range(R) if basis[i] < 0]
        n_art = len(art_rows)
        T = np.zeros((R + 1, C + n_art + 1), dtype=object)
        T[:R, :C] = A
        T[:R, -1] = b
        for k, i in enumerate(art_rows):
            T[i, C + k] = 1
            basis[i] = C + k
        if art_rows:
            T[R, :C] = -T[art_rows, :C].sum(axis=0)
            T[R, -1] = -T[art_rows, -1].sum()
        self.T = narrow(T)
        self.D = 1
        self.basis = basis
        self.n_art = n_art
        self.bland = False
        self.streak = 0

    @property
    def R(self):
        return len(self.basis)

    def _entering(self, allowed):
        z = self.T[-1, :allowed]
        neg = np.nonzero(z < 0)[0]
        if neg.size == 0:
            return None
        if self.bland:
            return int(neg[0])
        vals = z[neg]
        return int(neg[int(np.argmin(vals))])

    def _leaving(self, s):
        col = self.T[:-1, s]
        cand = np.nonzero(col > 0)[0]
        if cand.size == 0:
            return None
        rhs = self.T[:-1, -1]
        if self.T.dtype != object:
            ratios = rhs[cand].astype(float) / col[cand].astype(float)
            best = ratios.min()
            near = cand[ratios <= best + abs(best) * 1e-9]
        else:
            near = cand
        best_i = None
        for i in near:
            i = int(i)
            if best_i is None:
                best_i = i
                continue
            # rhs[i]/col[i] vs rhs[best]/col[best], exact
            lhs = int(rhs[i]) * int(col[best_i])
            cur = int(rhs[best_i]) * int(col[i])
            if lhs < cur or (lhs == cur and self.basis[i] < self.basis[best_i]):
                best_i = i
        return best_i

    def _pivot(self, r, s):
        degenerate = self.T[r, -1] == 0
        self.T, self.D = pivot(self.T, r, s, self.D)
        self.basis[r] = s
        if degenerate:
            self.streak += 1
            if self.streak >= DEGENERATE_STREAK:
                self.bland = True
        else:
            self.streak = 0

    def run(self, allowed):
        """Iterate to optimality. Returns False when unbounded."""
        while True:
            s = self._entering(allowed)
            if s is None:
                return True
            r = self._leaving(s)
            if r is None:
                return False
            self._pivot(r, s)

    def phase_one(self):
        """Returns False when infeasible."""
        C = self.n_struct
        if self.n_art:
            self.run(C + self.n_art)
            if self.T[-1, -1] < 0:
                return False
            # drive zero-level artificials out of the basis
            r = 0
            while r < self.R:
                if self.basis[r] >= C:
                    nz = np.nonzero(self.T[r, :C])[0]
                    if nz.size:
                        self._pivot(r, int(nz[0]))
                    else:
                        self.T = np.delete(self.T, r, axis=0)
                        del self.basis[r]
                        continue
                r += 1
            self.T = np.delete(self.T, np.s_[C:C + self.n_art], axis=1)
            self.n_art = 0
        return True

    def set_objective(self):
        C = self.n_struct
        cB = np.array([[self.c[j] for j in self.basis]], dtype=object)
        body = self.T[:-1, :]
        obj = int_matmul(narrow(cB), body)[0].astype(object)
        obj[:C] = obj[:C] - np.array(self.c, dtype=object) * self.D
        T = self.T.astype(object)
        T[-1, :] = obj
        self.T = narrow(T)

    def point(self):
        x = [Fraction(0)] * self.n_struct
        for i, j in enumerate(self.basis):
            x[j] = Fraction(int(self.T[i, -1]), int(self.D))
        return tuple(x)


def solve_standard(A, b, c, *, feasibility_only=False):
    """Solve ``max c.x s.t. A x = b, x >= 0`` with integer data.

    Returns one of :class:`Optimal`, :class:`Infeasible`, :class:`Unbounded`.
    With ``feasibility_only`` the objective is ignored and any feasible
    basic point is returned with value 0.
    """
    C = len(c)
    if C == 0:
        if all(int(x) == 0 for x in b):
            return Optimal(Fraction(0), ())
        return Infeasible()
    tab = _Tableau(A, b, c)
    if not tab.phase_one():
        return Infeasible()
    if feasibility_only:
        return Optimal(Fraction(0), tab.point())
    tab.set_objective()
    tab.bland = False
    tab.streak = 0
    if not tab.run(C):
        return Unbounded()
    # the objective row's right-hand side holds D times c.x
    return Optimal(Fraction(int(tab.T[-1, -1]), int(tab.D)), tab.point())


def lp_solve(task: LpTask):
    """Solve an :class:`LpTask` exactly (free variables are split)."""
    n = task.n_vars
    if n == 0:
        ok = all(beta == 0 for _, beta in task.equalities) and \
            all(gamma <= 0 for _, gamma in task.inequalities_geq)
        return Optimal(Fraction(0), ()) if ok else Infeasible()
    n_slack = len(task.inequalities_geq)
    rows, rhs = [], []
    for a, beta in task.equalities:
        k = integer_scaling(list(a) + [beta])
        rows.append([int(x * k) for x in a] + [-int(x * k) for x in a] + [0] * n_slack)
        rhs.append(int(beta * k))
    for t, (g, gamma) in enumerate(task.inequalities_geq):
        k = integer_scaling(list(g) + [gamma])
        slack = [0] * n_slack
        slack[t] = -k
        rows.append([int(x * k) for x in g] + [-int(x * k) for x in g] + slack)
        rhs.append(int(gamma * k))
    kc = integer_scaling(task.objective)
    c = [int(x * kc) for x in task.objective]
    c = c + [-x for x in c] + [0] * n_slack
    res = solve_standard(rows, rhs, c)
    if not isinstance(res, Optimal):
        return res
    xs = res.point
    point = tuple(xs[j] - xs[n + j] for j in range(n))
    value = sum((o * x for o, x in zip(task.objective, point)), Fraction(0))
    return Optimal(value, point)


def check_point(task: LpTask, point: Sequence) -> bool:
    """Exact re-substitution of a point into every constraint."""
    def dot(a, x):
        return sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))
    return all(dot(a, point) == beta for a, beta in task.equalities) and \
        all(dot(g, point) >= gamma for g, gamma in task.inequalities_geq)
