"""SDP data, PSD-cone faces and exposing vectors.

Data matrices are stored as exact sparse upper triangles
``{(i, j): Fraction}`` with ``i <= j`` (0-based); float views are built on
demand. JSON uses 1-based triplets ``[i, j, value]``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch, MalformedTask, NonFinite
from ..kernel.eig import EIG_TOL
from ..kernel.rational import as_rational, format_rational


def _entry_json(v: Fraction):
    return format_rational(v)


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """``{X in S^n : <A_i, X> = b_i}``."""

    n: int
    mats: tuple   # tuple of dicts {(i, j): Fraction}, i <= j
    b: tuple
    labels: tuple | None = None

    def __post_init__(self):
        if self.n < 1:
            raise MalformedTask("matrix order must be positive")
        mats = []
        for k, A in enumerate(self.mats):
            clean = {}
            for (i, j), v in dict(A).items():
                i, j = int(i), int(j)
                if not (0 <= i < self.n and 0 <= j < self.n):
                    raise DimensionMismatch(f"entry ({i + 1},{j + 1}) of A_{k + 1} outside order {self.n}")
                v = as_rational(v)
                key = (min(i, j), max(i, j))
                if key in clean and clean[key] != v:
                    raise MalformedTask(f"A_{k + 1} is not symmetric at ({i + 1},{j + 1})")
                if v:
                    clean[key] = v
            mats.append(clean)
        b = tuple(as_rational(v) for v in self.b)
        if not mats:
            raise MalformedTask("need at least one constraint")
        if len(b) != len(mats):
            raise DimensionMismatch(f"{len(mats)} matrices but b has length {len(b)}")
        if self.labels is not None and len(self.labels) != self.n:
            raise DimensionMismatch("one label per row index is required")
        object.__setattr__(self, "mats", tuple(mats))
        object.__setattr__(self, "b", b)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(tuple(l) for l in self.labels))

    @classmethod
    def from_dense(cls, mats, b, labels=None):
        out = []
        for A in mats:
            A = list(A)
            n = len(A)
            d = {}
            for i in range(n):
                for j in range(i, n):
                    if A[i][j] != A[j][i]:
                        raise MalformedTask("matrix is not symmetric")
                    if A[i][j]:
                        d[(i, j)] = as_rational(A[i][j])
            out.append(d)
        return cls(len(list(mats[0])), tuple(out), tuple(b), labels)

    @property
    def m(self) -> int:
        return len(self.mats)

    @property
    def b_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.b])

    def dense(self, k: int) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for (i, j), v in self.mats[k].items():
            A[i, j] = A[j, i] = float(v)
        return A

    def combo(self, y: Sequence[float]) -> np.ndarray:
        """``sum_i y_i A_i`` as a dense float matrix."""
        W = np.zeros((self.n, self.n))
        for k, yk in enumerate(y):
            if yk:
                yk = float(yk)
                for (i, j), v in self.mats[k].items():
                    W[i, j] += yk * float(v)
                    if i != j:
                        W[j, i] += yk * float(v)
        return W

    def combo_exact(self, y: Sequence) -> dict:
        out = {}
        for k, yk in enumerate(y):
            yk = as_rational(yk)
            if yk:
                for key, v in self.mats[k].items():
                    out[key] = out.get(key, Fraction(0)) + yk * v
        return {k: v for k, v in out.items() if v}

    def restricted(self, k: int, S: Sequence[int]) -> np.ndarray:
        """``A_k(S, S)`` as a dense float matrix."""
        pos = {s: t for t, s in enumerate(S)}
        B = np.zeros((len(S), len(S)))
        for (i, j), v in self.mats[k].items():
            if i in pos and j in pos:
                B[pos[i], pos[j]] = B[pos[j], pos[i]] = float(v)
        return B

    def projected(self, k: int, face: "SdpFace") -> np.ndarray:
        """``V^T A_k V``."""
        if face.block_support is not None:
            return self.restricted(k, face.support_list)
        V = face.V
        return V.T @ self.dense(k) @ V

    def to_json(self) -> dict:
        out = {"n": self.n, "m": self.m,
               "mats": [[[i + 1, j + 1, _entry_json(v)] for (i, j), v in sorted(A.items())]
                        for A in self.mats],
               "b": [_entry_json(v) for v in self.b]}
        if self.labels is not None:
            out["labels"] = [list(l) for l in self.labels]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SdpProblem":
        try:
            n, m = int(data["n"]), int(data["m"])
            mats = []
            for A in data["mats"]:
                d = {}
                for i, j, v in A:
                    if isinstance(v, float) and not np.isfinite(v):
                        raise NonFinite(f"non-finite entry {v}")
                    i, j = int(i) - 1, int(j) - 1
                    key = (min(i, j), max(i, j))
                    v = as_rational(v)
                    if key in d and d[key] != v:
                        raise MalformedTask(f"conflicting entries at ({i + 1},{j + 1})")
                    d[key] = v
                mats.append(d)
            b = [as_rational(v) for v in data["b"]]
            labels = data.get("labels")
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedTask(f"bad SdpProblem JSON: {exc}") from None
        if len(mats) != m:
            raise MalformedTask(f"m = {m} but {len(mats)} matrices given")
        return cls(n, tuple(mats), tuple(b), labels)


def orthonormalize(V: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of ``V``."""
    V = np.array(V, dtype=float, copy=True)
    for j in range(V.shape[1]):
        for i in range(j):
            V[:, j] -= (V[:, i] @ V[:, j]) * V[:, i]
        nrm = np.linalg.norm(V[:, j])
        if nrm > 0:
            V[:, j] /= nrm
    return V


@dataclass(frozen=True, eq=False)
class SdpFace:
    """``{X psd : range(X) in range(V)}``; ``block_support`` marks the
    coordinate case ``V = I[:, S]``."""

    V: np.ndarray
    block_support: frozenset | None = None

    def __post_init__(self):
        V = np.array(self.V, dtype=float)
        if V.ndim != 2:
            raise DimensionMismatch("face basis must be a matrix")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)
        if self.block_support is not None:
            object.__setattr__(self, "block_support", frozenset(int(i) for i in self.block_support))

    @classmethod
    def full(cls, n: int) -> "SdpFace":
        return cls.block(n, range(n))

    @classmethod
    def block(cls, n: int, S) -> "SdpFace":
        S = sorted(set(int(i) for i in S))
        V = np.zeros((n, len(S)))
        V[S, np.arange(len(S))] = 1.0
        return cls(V, frozenset(S))

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def k(self) -> int:
        return self.V.shape[1]

    @property
    def support_list(self) -> list:
        return sorted(self.block_support)

    def orthonormality_error(self) -> float:
        return float(np.linalg.norm(self.V.T @ self.V - np.eye(self.k)))

    def projector(self) -> np.ndarray:
        return self.V @ self.V.T

    def same_as(self, other: "SdpFace", tol: float = 1e-8) -> bool:
        if self.n != other.n or self.k != other.k:
            return False
        if self.block_support is not None and other.block_support is not None:
            return self.block_support == other.block_support
        return float(np.linalg.norm(self.projector() - other.projector())) <= tol * max(1, self.k)

    def to_json(self) -> dict:
        if self.block_support is not None:
            return {"block_support": [i + 1 for i in self.support_list]}
        return {"basis": self.V.tolist()}

    @classmethod
    def from_json(cls, data: dict, n: int) -> "SdpFace":
        if "block_support" in data:
            return cls.block(n, [int(i) - 1 for i in data["block_support"]])
        V = np.array(data["basis"], dtype=float).reshape(n, -1)
        return cls(orthonormalize(V))


@dataclass(frozen=True, eq=False)
class SdpExposingVector:
    """Multipliers ``y`` and, optionally, the materialized ``W = sum y_i A_i``.

    Large instances leave ``W`` out; it is then formed from ``y`` on demand,
    restricted to the face at hand.
    """

    y: np.ndarray
    W: np.ndarray | None = None

    def __post_init__(self):
        y = np.array(self.y, dtype=float).ravel()
        if not np.all(np.isfinite(y)):
            raise NonFinite("exposing vector has NaN or Inf entries")
        object.__setattr__(self, "y", y)
        if self.W is not None:
            W = np.array(self.W, dtype=float)
            if not np.all(np.isfinite(W)):
                raise NonFinite("exposing vector has NaN or Inf entries")
            object.__setattr__(self, "W", W)

    @classmethod
    def from_y(cls, P: SdpProblem, y, materialize: bool = True) -> "SdpExposingVector":
        return cls(np.array(y, dtype=float), P.combo(y) if materialize else None)

    def on_face(self, P: SdpProblem, face: "SdpFace") -> np.ndarray:
        """``V^T W V``."""
        if self.W is not None:
            if face.block_support is not None:
                S = face.support_list
                return self.W[np.ix_(S, S)]
            return face.V.T @ self.W @ face.V
        out = np.zeros((face.k, face.k))
        for i, yi in enumerate(self.y):
            if yi:
                out += yi * P.projected(i, face)
        return out

    def to_json(self, P: SdpProblem | None = None) -> dict:
        W = self.W if self.W is not None or P is None else P.combo(self.y)
        if W is None:
            return {"y": [float(v) for v in self.y]}
        n = W.shape[0]
        trip = [[i + 1, j + 1, float(W[i, j])] for i in range(n) for j in range(i, n) if W[i, j] != 0]
        return {"y": [float(v) for v in self.y], "W": trip}

    @classmethod
    def from_json(cls, data: dict, P: SdpProblem) -> "SdpExposingVector":
        y = np.array([float(as_rational(v)) for v in data["y"]])
        if "W" in data:
            W = np.zeros((P.n, P.n))
            for i, j, v in data["W"]:
                W[int(i) - 1, int(j) - 1] = W[int(j) - 1, int(i) - 1] = float(as_rational(v))
        else:
            W = P.combo(y)
        return cls(y, W)


@dataclass(frozen=True, eq=False)
class FRSequenceSDP:
    steps: tuple
    faces: tuple
    note: str = ""
    residuals: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "faces", tuple(self.faces))
        if len(self.faces) != len(self.steps) + 1:
            raise DimensionMismatch("need one more face than steps")

    def __len__(self):
        return len(self.steps)

    @property
    def final_face(self) -> SdpFace:
        return self.faces[-1]

    def to_json(self) -> dict:
        out = {"steps": [s.to_json() for s in self.steps],
               "faces": [f.to_json() for f in self.faces]}
        if self.note:
            out["note"] = self.note
        if self.residuals:
            out["residuals"] = [float(r) for r in self.residuals]
        return out

    @classmethod
    def from_json(cls, data: dict, P: SdpProblem) -> "FRSequenceSDP":
        try:
            steps = [SdpExposingVector.from_json(s, P) for s in data["steps"]]
            faces = [SdpFace.from_json(f, P.n) for f in data.get("faces", [])]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedTask(f"bad FRSequenceSDP JSON: {exc}") from None
        if not faces:
            # faces omitted: only the steps are given, chain is rebuilt on verify
            return cls(steps, [SdpFace.full(P.n)] * (len(steps) + 1), note="faces-omitted")
        return cls(steps, faces)
