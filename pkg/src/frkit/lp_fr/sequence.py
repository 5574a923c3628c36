"""Greedy-minimal facial reduction over the orthant and sequence checks."""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import EmptyFeasibleSet
from ..kernel.intmat import to_int_array
from ..kernel.rational import integer_scaling
from ..kernel.simplex import Optimal, solve_standard
from .exposing import (PerpParam, find_exposing, find_minimal_exposing,
                       is_minimal_step, max_support_exposing)
from .model import FRSequenceLP, LinearSet, OrthantFace


def fra_minimal(L: LinearSet, start: OrthantFace | None = None, *, order=None) -> FRSequenceLP:
    """Facial reduction taking a minimal exposing vector at every step.

    By the minimal-equals-longest theorem for the orthant, the length of the
    result is the maximum singularity degree of ``L`` meeting ``start``,
    whatever ``order`` is used to break ties.
    """
    start = start or OrthantFace.full(L.n)
    par = PerpParam(L)
    steps = []
    F = start
    while True:
        w = find_minimal_exposing(L, F, order=order, par=par)
        if w is None:
            break
        steps.append(w)
        F = F.meet(w.w)
    return FRSequenceLP.build(start, steps)


def msd_lp(L: LinearSet, *, order=None) -> int:
    return len(fra_minimal(L, order=order))


def sd_lp(L: LinearSet) -> int:
    """Singularity degree over the orthant: 0 or 1."""
    return 0 if max_support_exposing(L, OrthantFace.full(L.n)) is None else 1


@dataclass
class SequenceReport:
    valid: bool
    minimal: bool
    length: int
    final_face: OrthantFace
    complete: bool = False
    diagnoses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"valid": self.valid, "minimal": self.minimal, "length": self.length,
                "complete": self.complete,
                "final_face": [i + 1 for i in self.final_face.zeros],
                "diagnoses": list(self.diagnoses)}


def verify_sequence_lp(L: LinearSet, seq: FRSequenceLP) -> SequenceReport:
    """Check every step certificate and its minimality.

    ``valid``: each ``w_i`` is in ``L^perp``, nonnegative and not identically
    zero on ``supp(F_{i-1})``, and ``F_i = F_{i-1} cap w_i^perp``.
    ``minimal``: valid and every step passes :func:`is_minimal_step`.
    ``complete``: valid and no exposing vector exists at the final face.
    """
    diag = []
    par = PerpParam(L)
    for k, F in enumerate(seq.faces):
        if F.n != L.n:
            diag.append(f"face {k} has ambient dimension {F.n}, expected {L.n}")
    if not diag:
        for k, s in enumerate(seq.steps):
            prev, nxt = seq.faces[k], seq.faces[k + 1]
            why = s.diagnose(L, prev)
            if why is not None:
                diag.append(f"step {k + 1}: {why}")
            elif prev.meet(s.w) != nxt:
                diag.append(f"step {k + 1}: face {k + 1} is not F_{k} cut by w_{k + 1}")
    valid = not diag
    minimal = valid
    if valid:
        for k, s in enumerate(seq.steps):
            if not is_minimal_step(L, seq.faces[k], s, par=par):
                minimal = False
                diag.append(f"step {k + 1}: not minimal")
    complete = valid and find_exposing(L, seq.final_face, par=par) is None
    return SequenceReport(valid, minimal, len(seq.steps), seq.final_face, complete, diag)


def minimal_cone_lp(L: LinearSet) -> OrthantFace:
    """Smallest orthant face containing ``L cap R^n_+``.

    Works on the primal side: repeatedly maximizes the mass of a point of the
    homogenized set ``{x >= 0, A x = lambda b, lambda >= 0}`` on coordinates
    not yet seen positive, then unions supports.
    """
    n, m = L.n, L.m
    rows = []
    for i in range(m):
        r = list(L.A.row(i)) + [-L.b[i]]
        k = integer_scaling(r)
        rows.append([int(v * k) for v in r])
    # feasibility of L cap R^n_+
    base = to_int_array([r[:n] for r in rows]) if m else np.zeros((0, n), dtype=np.int64)
    base = base.reshape(m, n)
    rhs = [-r[n] for r in rows]
    if not isinstance(solve_standard(base, rhs, [0] * n, feasibility_only=True), Optimal):
        raise EmptyFeasibleSet("L does not meet the nonnegative orthant")
    positive = set()
    while True:
        R = [i for i in range(n) if i not in positive]
        if not R:
            break
        # columns: x (n), lambda, slack s_i for x_i <= 1 (i in R)
        C = n + 1 + len(R)
        A = np.zeros((m + len(R), C), dtype=object)
        if m:
            A[:m, :n + 1] = np.array(rows, dtype=object).reshape(m, n + 1)
        for t, i in enumerate(R):
            A[m + t, i] = 1
            A[m + t, n + 1 + t] = 1
        b = [0] * m + [1] * len(R)
        c = [0] * C
        for i in R:
            c[i] = 1
        res = solve_standard(A, b, c)
        if not isinstance(res, Optimal) or res.value <= 0:
            break
        positive |= {i for i in range(n) if res.point[i] > 0}
    return OrthantFace(n, frozenset(range(n)) - positive)
