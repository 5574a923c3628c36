"""Exact rationals and dense rational matrices.

Rationals are :class:`fractions.Fraction`, which already keeps the canonical
form (positive denominator, reduced) after every operation.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction


def as_rational(value) -> Fraction:
    """Convert ints, floats (exactly, they are dyadic), strings "p/q" or
    Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and friends
    try:
        return Fraction(value.item())
    except AttributeError:
        raise TypeError(f"cannot convert {value!r} to a rational") from None


def format_rational(q: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_vector(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


def integer_scaling(values: Sequence[Fraction]) -> int:
    """Smallest positive integer turning every entry into an integer."""
    out = 1
    for v in values:
        out = lcm(out, v.denominator)
    return out


def snap(q: Fraction, tol: float = 1e-9) -> Fraction:
    """Round to the nearest integer when within `tol` of it."""
    r = round(q)
    if abs(q - r) <= tol:
        return Fraction(r)
    return q


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major rational matrix."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None):
        rows = [rational_vector(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count needed for an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [self.column(j) for j in range(self.cols)], cols=self.rows)

    def delete_column(self, j: int) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [r[:j] + r[j + 1:] for r in self.to_rows()], cols=self.cols - 1)

    def select_columns(self, cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix.from_rows(
            [[r[j] for j in cols] for r in self.to_rows()], cols=len(cols))

    def matvec(self, x: Sequence) -> tuple:
        return tuple(sum((a * b for a, b in zip(self.row(i), x)), Fraction(0))
                     for i in range(self.rows))

    def rmatvec(self, y: Sequence) -> tuple:
        """Return ``A^T y``."""
        out = [Fraction(0)] * self.cols
        for i in range(self.rows):
            yi = y[i]
            if yi:
                for j, a in enumerate(self.row(i)):
                    if a:
                        out[j] += a * yi
        return tuple(out)

    def to_float(self):
        import numpy as np
        return np.array([float(x) for x in self.entries],
                        dtype=float).reshape(self.rows, self.cols)
