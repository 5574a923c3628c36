"""Linear sets, orthant faces, exposing vectors and FR sequences.

Indices are 0-based in Python; the JSON forms use 1-based indices.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DimensionMismatch, InvalidCertificate, MalformedTask
from ..kernel.rational import (RationalMatrix, as_rational, format_rational,
                               rational_vector)


@dataclass(frozen=True)
class LinearSet:
    """The affine set ``{x : A x = b}``."""

    A: RationalMatrix
    b: tuple

    def __post_init__(self):
        b = rational_vector(self.b)
        object.__setattr__(self, "b", b)
        if len(b) != self.A.rows:
            raise DimensionMismatch(f"A has {self.A.rows} rows but b has length {len(b)}")

    @classmethod
    def from_rows(cls, A: Iterable[Iterable], b: Sequence, n: int | None = None):
        A = list(A)
        if n is None and not A:
            raise DimensionMismatch("number of variables needed when A has no rows")
        return cls(RationalMatrix.from_rows(A, cols=n), tuple(b))

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def m(self) -> int:
        return self.A.rows

    def contains(self, x: Sequence) -> bool:
        return self.A.matvec(x) == self.b

    def in_perp(self, w: Sequence, y: Sequence) -> bool:
        """True when ``w = A^T y`` and ``b^T y = 0`` exactly."""
        if len(y) != self.m or len(w) != self.n:
            return False
        return tuple(self.A.rmatvec(y)) == tuple(w) and \
            sum((bi * yi for bi, yi in zip(self.b, y)), Fraction(0)) == 0

    def delete_variable(self, j: int) -> "LinearSet":
        return LinearSet(self.A.delete_column(j), self.b)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "A": [[format_rational(x) for x in r] for r in self.A.to_rows()],
            "b": [format_rational(x) for x in self.b],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearSet":
        try:
            n, m = int(data["n"]), int(data["m"])
            rows = [[as_rational(x) for x in r] for r in data["A"]]
            b = [as_rational(x) for x in data["b"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedTask(f"bad LinearSet JSON: {exc}") from None
        if len(rows) != m or len(b) != m or any(len(r) != n for r in rows):
            raise MalformedTask(f"LinearSet JSON does not match n={n}, m={m}")
        if n < 0 or m < 0:
            raise MalformedTask("negative dimension")
        return cls(RationalMatrix.from_rows(rows, cols=n), tuple(b))


@dataclass(frozen=True)
class OrthantFace:
    """``{x >= 0 : x_i = 0 for i in zero_set}``."""

    n: int
    zero_set: frozenset = frozenset()

    def __post_init__(self):
        zs = frozenset(int(i) for i in self.zero_set)
        if any(i < 0 or i >= self.n for i in zs):
            raise DimensionMismatch(f"zero set {sorted(zs)} out of range for n={self.n}")
        object.__setattr__(self, "zero_set", zs)

    @classmethod
    def full(cls, n: int) -> "OrthantFace":
        return cls(n)

    @property
    def support(self) -> tuple:
        return tuple(i for i in range(self.n) if i not in self.zero_set)

    @property
    def zeros(self) -> tuple:
        return tuple(sorted(self.zero_set))

    def meet(self, w: Sequence) -> "OrthantFace":
        """Face cut out by ``w`` (assumed nonnegative on the support)."""
        return OrthantFace(self.n, self.zero_set | {i for i in self.support if w[i] != 0})

    def __repr__(self):
        return f"OrthantFace(n={self.n}, zeros={list(self.zeros)})"


@dataclass(frozen=True)
class LpExposingVector:
    y: tuple
    w: tuple

    def __post_init__(self):
        object.__setattr__(self, "y", rational_vector(self.y))
        object.__setattr__(self, "w", rational_vector(self.w))

    def exposed_set(self, F: OrthantFace) -> frozenset:
        return frozenset(i for i in F.support if self.w[i] != 0)

    def diagnose(self, L: LinearSet, F: OrthantFace) -> str | None:
        """None when this is an exposing vector for ``(L, F)``, else a reason."""
        if len(self.y) != L.m or len(self.w) != L.n:
            return "dimension mismatch"
        if tuple(L.A.rmatvec(self.y)) != self.w:
            return "w differs from A^T y"
        if sum((bi * yi for bi, yi in zip(L.b, self.y)), Fraction(0)) != 0:
            return "b^T y is nonzero"
        sup = F.support
        if any(self.w[i] < 0 for i in sup):
            return "w is negative on the face support"
        if not any(self.w[i] > 0 for i in sup):
            return "w vanishes on the face support"
        return None

    def check(self, L: LinearSet, F: OrthantFace) -> None:
        why = self.diagnose(L, F)
        if why is not None:
            raise InvalidCertificate(why)

    def normalized(self, F: OrthantFace) -> "LpExposingVector":
        s = sum((self.w[i] for i in F.support), Fraction(0))
        if s <= 0:
            return self
        return LpExposingVector(tuple(v / s for v in self.y), tuple(v / s for v in self.w))

    def to_json(self) -> dict:
        return {"y": [format_rational(v) for v in self.y],
                "w": [format_rational(v) for v in self.w]}

    @classmethod
    def from_json(cls, data: dict) -> "LpExposingVector":
        return cls(tuple(as_rational(v) for v in data["y"]),
                   tuple(as_rational(v) for v in data["w"]))


@dataclass(frozen=True)
class FRSequenceLP:
    steps: tuple
    faces: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "faces", tuple(self.faces))
        if len(self.faces) != len(self.steps) + 1:
            raise DimensionMismatch(
                f"{len(self.steps)} steps need {len(self.steps) + 1} faces, got {len(self.faces)}")

    @classmethod
    def build(cls, start: OrthantFace, steps: Sequence[LpExposingVector]) -> "FRSequenceLP":
        faces = [start]
        for s in steps:
            faces.append(faces[-1].meet(s.w))
        return cls(tuple(steps), tuple(faces))

    def __len__(self):
        return len(self.steps)

    @property
    def final_face(self) -> OrthantFace:
        return self.faces[-1]

    def blocks(self) -> list:
        """``S_j``: the indices zeroed at step ``j`` (0-based list)."""
        return [self.faces[j].zero_set ^ self.faces[j + 1].zero_set
                for j in range(len(self.steps))]

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps],
                "faces": [[i + 1 for i in f.zeros] for f in self.faces]}

    @classmethod
    def from_json(cls, data: dict, n: int) -> "FRSequenceLP":
        try:
            steps = tuple(LpExposingVector.from_json(s) for s in data["steps"])
            faces = tuple(OrthantFace(n, frozenset(int(i) - 1 for i in f))
                          for f in data["faces"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedTask(f"bad FRSequenceLP JSON: {exc}") from None
        return cls(steps, faces)
