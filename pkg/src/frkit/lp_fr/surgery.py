"""Reordering and variable-removal operations on minimal FR sequences."""
from enum import Enum

from ..errors import NotRedundant, PreconditionFailed
from ..kernel.intmat import solve
from .exposing import PerpParam, _Restricted, cone_point
from .model import FRSequenceLP, LinearSet, LpExposingVector, OrthantFace
from .sequence import verify_sequence_lp


class RemovalCase(Enum):
    One = "One"
    Two = "Two"


def _require_minimal(L: LinearSet, seq: FRSequenceLP):
    rep = verify_sequence_lp(L, seq)
    if not rep.valid:
        raise PreconditionFailed("sequence is not a valid FR sequence: " + "; ".join(rep.diagnoses))
    if not rep.minimal:
        raise PreconditionFailed("sequence is not minimal: " + "; ".join(rep.diagnoses))


def swap_steps(L: LinearSet, seq: FRSequenceLP, j: int, *, check: bool = True) -> FRSequenceLP:
    """Exchange the order in which the blocks of steps ``j`` and ``j + 1``
    (0-based) are zeroed, keeping the sequence minimal.

    Works when the block of step ``j`` is a single index, or when the block of
    step ``j + 1`` is a single index ``a`` and some exposing vector at
    ``F_j`` zeroes exactly ``{a}``.
    """
    if not 0 <= j < len(seq) - 1:
        raise PreconditionFailed(f"step index {j} has no successor in a sequence of length {len(seq)}")
    if check:
        _require_minimal(L, seq)
    blocks = seq.blocks()
    Sj, Sk = blocks[j], blocks[j + 1]
    wj, wk = seq.steps[j], seq.steps[j + 1]
    if len(Sj) == 1:
        (a,) = Sj
        alpha = wk.w[a] / wj.w[a]
        first = LpExposingVector(tuple(p - alpha * q for p, q in zip(wk.y, wj.y)),
                                 tuple(p - alpha * q for p, q in zip(wk.w, wj.w)))
    elif len(Sk) == 1:
        (a,) = Sk
        par = PerpParam(L)
        R = _Restricted(par, list(seq.faces[j].support), [a])
        zz = cone_point(R.H)
        if zz is None:
            raise PreconditionFailed(
                f"the block of step {j + 2} is a singleton but no exposing vector at "
                f"face {j} zeroes exactly that index")
        first = par.vector(R.lift(zz))
    else:
        raise PreconditionFailed(
            f"neither block is a singleton (sizes {len(Sj)} and {len(Sk)})")
    first = first.normalized(seq.faces[j])
    steps = list(seq.steps[:j]) + [first, wj] + list(seq.steps[j + 2:])
    return FRSequenceLP.build(seq.faces[0], steps)


def swapped_faces(seq: FRSequenceLP, j: int) -> list:
    """The face chain a swap at ``j`` must produce."""
    blocks = seq.blocks()
    faces = list(seq.faces)
    prev = faces[j]
    faces[j + 1] = OrthantFace(prev.n, prev.zero_set | blocks[j + 1])
    return faces


def unit_in_perp(L: LinearSet, var: int) -> bool:
    """Is ``e_var`` of the form ``A^T y`` with ``b^T y = 0``?"""
    rows = [list(L.A.column(i)) for i in range(L.n)] + [list(L.b)]
    rhs = [int(i == var) for i in range(L.n)] + [0]
    return solve(rows, rhs, L.m) is not None


def _drop_index(face: OrthantFace, var: int) -> OrthantFace:
    return OrthantFace(face.n - 1, frozenset(i - (i > var) for i in face.zero_set if i != var))


def remove_variable(L: LinearSet, seq: FRSequenceLP, var: int, *, check: bool = True):
    """Delete a redundant variable (one in the final zero set).

    Returns ``(L_tilde, seq_tilde, case, minimal_out)``. In case One (the
    variable was zeroed alone) its step is dropped and the result is minimal
    exactly when ``e_var`` lies in ``L^perp``; in case Two all steps are kept,
    truncated, and the result is minimal.
    """
    if var not in seq.final_face.zero_set:
        raise NotRedundant(f"variable {var + 1} is not zero on the final face")
    if check:
        _require_minimal(L, seq)
    Lt = L.delete_variable(var)
    start = _drop_index(seq.faces[0], var)
    blocks = seq.blocks()
    trunc = [LpExposingVector(s.y, s.w[:var] + s.w[var + 1:]) for s in seq.steps]
    j = next((k for k, S in enumerate(blocks) if var in S), None)
    if j is None:
        # zero from the start: no step involved
        return Lt, FRSequenceLP.build(start, trunc), RemovalCase.Two, True
    if len(blocks[j]) == 1:
        steps = trunc[:j] + trunc[j + 1:]
        return Lt, FRSequenceLP.build(start, steps), RemovalCase.One, unit_in_perp(L, var)
    return Lt, FRSequenceLP.build(start, trunc), RemovalCase.Two, True
