"""Dense symmetric eigensolver and PSD/rank tests.

The decomposition itself is delegated to LAPACK through ``numpy.linalg.eigh``;
this module adds input validation, descending order and the relative
tolerances used throughout the package.
"""
from dataclasses import dataclass

import numpy as np

from ..errors import NonFinite

EIG_TOL = 1e-10
RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SymMatrixF:
    """Symmetric float matrix of order ``n``."""

    entries: np.ndarray

    def __post_init__(self):
        M = np.array(self.entries, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {M.shape}")
        if not np.array_equal(M, M.T):
            raise ValueError("matrix is not symmetric")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def symmetrized(cls, M):
        M = np.asarray(M, dtype=float)
        return cls((M + M.T) / 2)


@dataclass(frozen=True, eq=False)
class EigResult:
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # columns, orthonormal


def _as_array(M) -> np.ndarray:
    if isinstance(M, SymMatrixF):
        return M.entries
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def sym_eig(M, eig_tol: float = EIG_TOL) -> EigResult:
    if eig_tol <= 0:
        raise ValueError("eig_tol must be positive")
    A = _as_array(M)
    if not np.all(np.isfinite(A)):
        raise NonFinite("matrix contains NaN or Inf")
    if A.shape[0] == 0:
        return EigResult(np.zeros(0), np.zeros((0, 0)))
    lam, Q = np.linalg.eigh(A)
    order = np.argsort(lam)[::-1]
    return EigResult(lam[order], Q[:, order])


def psd_rank(M, rank_tol: float = RANK_TOL):
    """Return ``(is_psd, rank)`` with tolerances relative to max(1, |lambda|max)."""
    lam = sym_eig(M).eigenvalues
    if lam.size == 0:
        return True, 0
    scale = max(1.0, float(np.abs(lam).max()))
    thr = rank_tol * scale
    return bool(lam.min() >= -thr), int(np.sum(np.abs(lam) > thr))
