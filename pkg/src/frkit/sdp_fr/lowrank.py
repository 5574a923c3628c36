"""Low-rank exposing-vector search and the greedy FR loop built on it.

At a face with basis ``V`` (``k`` columns) we look for ``y`` and ``U``
(``k x r``) with

    sum_i (V^T A_i V) y_i = U U^T,   tr(sum_i (V^T A_i V) y_i) = 1,   b^T y = 0,

by Levenberg-Marquardt on the stacked residual. Symmetric residuals are
vectorized over the upper triangle with off-diagonal entries weighted by
``sqrt(2)``, so the Euclidean norm equals the Frobenius norm.
"""
import numpy as np

from ..errors import PreconditionFailed
from ..kernel.eig import EIG_TOL, RANK_TOL
from .model import FRSequenceSDP, SdpExposingVector, SdpFace, SdpProblem
from .ops import ExposingStatus, _face_step, check_exposing_sdp

RES_TOL = 1e-9
MAX_ITER = 500
# LM starts per search; a start can stall in a basin with a nonzero residual
RESTARTS = 8


def _vec_index(k):
    iu = np.triu_indices(k)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    return iu, w


class _Residual:
    def __init__(self, Bs, b):
        self.Bs = np.asarray(Bs)          # m x k x k
        self.b = np.asarray(b, dtype=float)
        self.m, self.k = self.Bs.shape[0], self.Bs.shape[1]
        self.iu, self.wt = _vec_index(self.k)
        self.Bvec = self.Bs[:, self.iu[0], self.iu[1]] * self.wt   # m x nt
        self.trB = np.trace(self.Bs, axis1=1, axis2=2)

    def __call__(self, y, U):
        W = np.tensordot(y, self.Bs, axes=1)
        R = W - U @ U.T
        return np.concatenate([R[self.iu] * self.wt, [self.trB @ y - 1.0, self.b @ y]])

    def jacobian(self, y, U):
        k, r = U.shape
        nt = len(self.wt)
        J = np.zeros((nt + 2, self.m + k * r))
        J[:nt, :self.m] = self.Bvec.T
        J[nt, :self.m] = self.trB
        J[nt + 1, :self.m] = self.b
        # d(U U^T)[a, c] / dU[p, q] = delta_ap U[c, q] + delta_cp U[a, q]
        a, c = self.iu
        for p in range(k):
            for q in range(r):
                col = np.zeros(nt)
                col += np.where(a == p, U[c, q], 0.0)
                col += np.where(c == p, U[a, q], 0.0)
                J[:nt, self.m + p * r + q] = -col * self.wt
        return J


def _lm(res: _Residual, y, U, max_iter: int, res_tol: float):
    """Levenberg-Marquardt from ``(y, U)``; returns the final iterate and cost."""
    m, (k, r) = res.m, U.shape
    lam = 1e-3
    f = res(y, U)
    cost = f @ f
    for _ in range(max_iter):
        if np.sqrt(cost) <= res_tol * 1e-2:
            break
        J = res.jacobian(y, U)
        g = J.T @ f
        H = J.T @ J
        while True:
            try:
                step = np.linalg.solve(H + lam * np.eye(H.shape[0]), -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            y2 = y + step[:m]
            U2 = U + step[m:].reshape(k, r)
            f2 = res(y2, U2)
            c2 = f2 @ f2
            if c2 < cost:
                y, U, f, cost = y2, U2, f2, c2
                lam = max(lam / 10, 1e-15)
                break
            lam *= 10
            if lam > 1e12:
                break
        if lam > 1e12:
            break
    return y, U, cost


def lowrank_exposing_search(P: SdpProblem, F: SdpFace, r: int, seed: int = 0,
                            max_iter: int = MAX_ITER, res_tol: float = RES_TOL,
                            rank_tol: float = RANK_TOL, *, restarts: int = RESTARTS):
    """``(y, U)`` with a small residual and a valid exposing ``W``, or None.

    Up to ``restarts`` starting points for ``U`` are drawn from one generator
    seeded with ``seed``; the first that converges to a valid exposing
    vector is returned.
    """
    k = F.k
    if r < 1 or r > k:
        raise PreconditionFailed(f"rank {r} must satisfy 1 <= r <= {k}")
    Bs = np.array([P.projected(i, F) for i in range(P.m)])
    res = _Residual(Bs, P.b_float)
    rng = np.random.default_rng(seed)
    # y: least squares against the trace and b constraints
    C = np.vstack([res.trB, res.b])
    y0 = np.linalg.lstsq(C, np.array([1.0, 0.0]), rcond=None)[0]
    for _ in range(max(restarts, 1)):
        U0 = rng.standard_normal((k, r)) / np.sqrt(k * r)
        y, U, cost = _lm(res, y0, U0, max_iter, res_tol)
        if np.sqrt(cost) > res_tol:
            continue
        E = SdpExposingVector.from_y(P, y, materialize=P.n <= 400)
        tol = max(res_tol, EIG_TOL) * 10
        if check_exposing_sdp(P, F, E, tol, rank_tol) is ExposingStatus.Valid:
            return y, U
    return None


def fra_lowrank(P: SdpProblem, r_schedule=(1,), seeds: int = 4, base_seed: int = 0,
                res_tol: float = RES_TOL, rank_tol: float = RANK_TOL,
                max_iter: int = MAX_ITER, start: SdpFace | None = None) -> FRSequenceSDP:
    """Greedy FR with low-rank exposing vectors.

    At each face, ranks are tried in ascending order and, for each rank, seeds
    ``base_seed, base_seed + 1, ...``; the first success (lowest seed) is
    taken. The loop stops when every attempt fails, which does not prove
    that the face is minimal; the returned sequence notes why it stopped.
    """
    F = start or SdpFace.full(P.n)
    faces, steps, residuals = [F], [], []
    note = "no exposing vector found"
    while True:
        if F.k == 0:
            note = "zero face reached"
            break
        found = None
        for r in sorted(set(r_schedule)):
            if r > F.k:
                continue
            for s in range(seeds):
                out = lowrank_exposing_search(P, F, r, base_seed + s, max_iter, res_tol, rank_tol)
                if out is not None:
                    found = out[0]
                    Bs = np.array([P.projected(i, F) for i in range(P.m)])
                    f = _Residual(Bs, P.b_float)(*out)
                    residuals.append(float(np.linalg.norm(f)))
                    break
            if found is not None:
                break
        if found is None:
            break
        E = SdpExposingVector.from_y(P, found, materialize=P.n <= 400)
        nxt, _ = _face_step(F, E.on_face(P, F), rank_tol)
        if nxt.k >= F.k:
            residuals.pop()
            note = "face did not shrink"
            break
        steps.append(E)
        faces.append(nxt)
        F = nxt
    return FRSequenceSDP(steps, faces, note=note, residuals=tuple(residuals))
