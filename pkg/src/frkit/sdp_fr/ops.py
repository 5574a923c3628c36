"""Exposing-vector checks, face updates and reductions to LP."""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from ..errors import DimensionMismatch, PreconditionFailed
from ..kernel.eig import EIG_TOL, RANK_TOL, psd_rank, sym_eig
from ..kernel.rational import RationalMatrix, snap
from ..lp_fr.model import LinearSet
from .model import FRSequenceSDP, SdpExposingVector, SdpFace, SdpProblem, orthonormalize


class ExposingStatus(Enum):
    Valid = "Valid"
    InPerp = "InPerp"
    NotPsdOnFace = "NotPsdOnFace"
    NotInLperp = "NotInLperp"


def _sym(M):
    return (M + M.T) / 2


def _psd_rank(M: np.ndarray, rank_tol: float):
    """psd_rank, reading eigenvalues off the diagonal when ``M`` is diagonal."""
    if M.size == 0:
        return True, 0
    if not np.any(M - np.diag(np.diag(M))):
        lam = np.diag(M)
        thr = rank_tol * max(1.0, float(np.abs(lam).max()))
        return bool(lam.min() >= -thr), int(np.sum(np.abs(lam) > thr))
    return psd_rank(M, rank_tol)


def check_exposing_sdp(P: SdpProblem, F: SdpFace, E: SdpExposingVector,
                       tol: float = EIG_TOL, rank_tol: float = RANK_TOL) -> ExposingStatus:
    """Classify ``E`` at the face ``F``.

    ``InPerp`` (``V^T W V = 0``) takes precedence over ``NotPsdOnFace``, which
    takes precedence over ``NotInLperp`` (``W`` not of the form ``sum y_i A_i``
    with ``b^T y = 0``).
    """
    if F.n != P.n:
        raise DimensionMismatch(f"face has order {F.n}, problem has order {P.n}")
    if E.y.shape[0] != P.m:
        raise DimensionMismatch(f"y has length {E.y.shape[0]}, expected {P.m}")
    if E.W is not None and E.W.shape != (P.n, P.n):
        raise DimensionMismatch(f"W has shape {E.W.shape}, expected {(P.n, P.n)}")
    M = _sym(E.on_face(P, F))
    is_psd, r = _psd_rank(M, rank_tol)
    if r == 0:
        return ExposingStatus.InPerp
    if not is_psd:
        return ExposingStatus.NotPsdOnFace
    if abs(float(P.b_float @ E.y)) > tol * max(1.0, float(np.abs(E.y).max())):
        return ExposingStatus.NotInLperp
    if E.W is not None:
        ref = P.combo(E.y)
        if np.linalg.norm(E.W - ref) > tol * max(1.0, np.linalg.norm(E.W)):
            return ExposingStatus.NotInLperp
    return ExposingStatus.Valid


def _face_step(F: SdpFace, M: np.ndarray, rank_tol: float):
    """New face and the rank of ``M = V^T W V``."""
    M = _sym(M)
    if F.block_support is not None:
        S = F.support_list
        off = M - np.diag(np.diag(M))
        if not np.any(np.abs(off) > rank_tol * max(1.0, float(np.abs(M).max(initial=0)))):
            d = np.diag(M)
            thr = rank_tol * max(1.0, float(np.abs(d).max(initial=0)))
            keep = [s for s, v in zip(S, d) if abs(v) <= thr]
            return SdpFace.block(F.n, keep), len(S) - len(keep)
    eig = sym_eig(M)
    lam = eig.eigenvalues
    thr = rank_tol * max(1.0, float(np.abs(lam).max(initial=0)))
    null = eig.eigenvectors[:, np.abs(lam) <= thr]
    V = orthonormalize(F.V @ null)
    return SdpFace(V), F.k - null.shape[1]


def apply_fr_step(F: SdpFace, E: SdpExposingVector, P: SdpProblem | None = None,
                  rank_tol: float = RANK_TOL) -> SdpFace:
    """``F cap W^perp`` for a ``W`` that is PSD and nonzero on ``F``."""
    if E.W is None and P is None:
        raise PreconditionFailed("W is not materialized and no problem was given")
    M = E.on_face(P, F)
    is_psd, r = _psd_rank(_sym(M), rank_tol)
    if r == 0:
        raise PreconditionFailed("W vanishes on the face")
    if not is_psd:
        raise PreconditionFailed("W is not PSD on the face")
    return _face_step(F, M, rank_tol)[0]


@dataclass
class SdpSequenceReport:
    valid: bool
    length: int
    rank_drops: list
    minimal_certified: list
    final_face: SdpFace
    diagnoses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"valid": self.valid, "length": self.length,
                "rank_drops": list(self.rank_drops),
                "minimal_certified": list(self.minimal_certified),
                "final_face": self.final_face.to_json(),
                "final_face_dim": self.final_face.k,
                "diagnoses": list(self.diagnoses)}


def build_sequence(P: SdpProblem, steps, start: SdpFace | None = None,
                   rank_tol: float = RANK_TOL) -> FRSequenceSDP:
    """Face chain generated by ``steps`` from ``start`` (full cone by default)."""
    faces = [start or SdpFace.full(P.n)]
    for s in steps:
        faces.append(apply_fr_step(faces[-1], s, P, rank_tol))
    return FRSequenceSDP(steps, faces)


def verify_sequence_sdp(P: SdpProblem, seq: FRSequenceSDP, tol: float = EIG_TOL,
                        rank_tol: float = RANK_TOL) -> SdpSequenceReport:
    """Recompute the face chain from the steps and compare.

    ``minimal_certified[i]`` is the rank-drop-one certificate, which is
    sufficient for minimality but not necessary.
    """
    diag, drops, cert = [], [], []
    F = seq.faces[0]
    given_faces = seq.note != "faces-omitted"
    valid = True
    for t, s in enumerate(seq.steps):
        try:
            status = check_exposing_sdp(P, F, s, tol, rank_tol)
        except DimensionMismatch as exc:
            diag.append(f"step {t + 1}: {exc}")
            valid = False
            break
        if status is not ExposingStatus.Valid:
            diag.append(f"step {t + 1}: {status.value}")
            valid = False
            break
        nxt, r = _face_step(F, s.on_face(P, F), rank_tol)
        drops.append(r)
        cert.append(r == 1)
        if nxt.k >= F.k:
            diag.append(f"step {t + 1}: face did not shrink")
            valid = False
            break
        if given_faces and not nxt.same_as(seq.faces[t + 1], max(tol, 1e-8)):
            diag.append(f"step {t + 1}: stated face {t + 1} differs from F_{t} cut by W_{t + 1}")
            valid = False
            break
        F = nxt
    return SdpSequenceReport(valid, len(seq.steps), drops, cert, F, diag)


def rank_of_exposing(P: SdpProblem, y, rank_tol: float = RANK_TOL, tol: float = EIG_TOL):
    """``(is_exposing, rank)`` for ``W = sum y_i A_i`` on the full cone."""
    y = np.asarray(y, dtype=float)
    W = P.combo(y)
    is_psd, r = psd_rank(W, rank_tol)
    bty = abs(float(P.b_float @ y))
    return bool(is_psd and r > 0 and bty <= tol * max(1.0, float(np.abs(y).max()))), r


def simplify_blockdiag(P: SdpProblem, F: SdpFace) -> SdpProblem:
    """Restrict every ``A_i`` to ``F``'s block ``S``; ``b`` is unchanged."""
    if F.block_support is None:
        raise PreconditionFailed("the face has no block support")
    S = F.support_list
    pos = {s: t for t, s in enumerate(S)}
    mats = []
    for A in P.mats:
        mats.append({(pos[i], pos[j]): v for (i, j), v in A.items() if i in pos and j in pos})
    labels = tuple(P.labels[s] for s in S) if P.labels is not None else None
    return SdpProblem(len(S), tuple(mats), P.b, labels)


def diagonal_lp(P: SdpProblem, tol: float = 0.0, drop_zero: bool = True, snap_tol: float | None = None):
    """``(L, kept)`` for a problem whose matrices are all diagonal, else None.

    ``kept`` lists the surviving coordinates (those where some ``A_i`` has a
    nonzero diagonal entry when ``drop_zero`` is set).
    """
    for A in P.mats:
        for (i, j), v in A.items():
            if i != j and abs(float(v)) > tol:
                return None
    diag = [[A.get((i, i), Fraction(0)) for i in range(P.n)] for A in P.mats]
    if snap_tol is not None:
        diag = [[snap(v, snap_tol) for v in row] for row in diag]
    kept = list(range(P.n))
    if drop_zero:
        kept = [i for i in kept if any(row[i] for row in diag)]
    A = RationalMatrix.from_rows([[row[i] for i in kept] for row in diag], cols=len(kept))
    return LinearSet(A, P.b), kept


def sdp_to_lp_if_diagonal(P: SdpProblem, tol: float = 0.0, drop_zero: bool = True):
    out = diagonal_lp(P, tol, drop_zero)
    return None if out is None else out[0]


def subspace_intersection(V1: np.ndarray, V2: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of ``range(V1) cap range(V2)``."""
    if V1.shape[1] == 0 or V2.shape[1] == 0:
        return np.zeros((V1.shape[0], 0))
    K = np.hstack([V1, -V2])
    _, s, vt = np.linalg.svd(K)
    rank = int(np.sum(s > tol * max(1.0, s.max(initial=0))))
    null = vt[rank:].T
    return orthonormalize(V1 @ null[:V1.shape[1]]) if null.size else np.zeros((V1.shape[0], 0))


def subspace_sum(*Vs: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the sum of ranges (the face generated by the
    corresponding PSD faces)."""
    K = np.hstack(Vs)
    if K.shape[1] == 0:
        return K
    U, s, _ = np.linalg.svd(K, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s.max(initial=0))))
    return U[:, :rank]
