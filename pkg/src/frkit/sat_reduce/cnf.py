"""3-CNF instances: DIMACS parsing, preprocessing and clause duplication.

Literals are signed 1-based variable indices, as in DIMACS. Clause indices in
Python are 0-based.
"""
import re
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from ..errors import (MalformedTask, NonTernaryClause, NotPreprocessed, ParseError,
                      UnsatisfiedAssignment)


@dataclass(frozen=True)
class CnfInstance:
    """``p`` variables and a tuple of 3-literal clauses.

    ``var_map[i]`` is the original index of variable ``i + 1`` and ``fixed``
    maps original variables removed by preprocessing to their forced values.
    ``q_tilde`` is the clause count before duplication (equal to ``q`` when no
    duplication was applied).
    """

    p: int
    clauses: tuple
    preprocessed: bool = False
    var_map: tuple | None = None
    fixed: tuple = ()
    q_tilde: int | None = None
    duplicated: bool = False

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.p < 0:
            raise MalformedTask("negative variable count")
        for c in clauses:
            for l in c:
                if l == 0 or abs(l) > self.p:
                    raise MalformedTask(f"literal {l} outside 1..{self.p}")
        if self.var_map is None:
            object.__setattr__(self, "var_map", tuple(range(1, self.p + 1)))
        if self.q_tilde is None:
            object.__setattr__(self, "q_tilde", len(clauses))
        if self.preprocessed:
            problem = assumption_violation(self)
            if problem:
                raise NotPreprocessed(problem)

    @property
    def q(self) -> int:
        return len(self.clauses)

    @property
    def trivialized(self) -> bool:
        """True when preprocessing removed every clause."""
        return self.preprocessed and not self.clauses

    def satisfied_by(self, values: Sequence[bool]) -> bool:
        return violated_clause(self, values) is None

    def lift(self, values: Sequence[bool]) -> dict:
        """Original-variable assignment from one of this instance."""
        out = dict(self.fixed)
        for i, v in enumerate(values):
            out[self.var_map[i]] = bool(v)
        return out

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.p} {self.q}"]
        lines += [" ".join(str(l) for l in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def assumption_violation(cnf: CnfInstance) -> str | None:
    """Why ``cnf`` fails the preprocessing invariants, or None."""
    pos, neg = set(), set()
    for j, c in enumerate(cnf.clauses):
        if len(c) != 3 or len({abs(l) for l in c}) != 3:
            return f"clause {j + 1} {c} does not have three distinct variables"
        for l in c:
            (pos if l > 0 else neg).add(abs(l))
    for i in range(1, cnf.p + 1):
        if i not in pos or i not in neg:
            return f"variable {i} does not occur with both signs"
    return None


def violated_clause(cnf: CnfInstance, values: Sequence[bool]):
    """Index of the first clause falsified by ``values``, or None."""
    if len(values) != cnf.p:
        raise MalformedTask(f"assignment has length {len(values)}, expected {cnf.p}")
    for j, c in enumerate(cnf.clauses):
        if not any(bool(values[abs(l) - 1]) == (l > 0) for l in c):
            return j
    return None


def check_assignment(cnf: CnfInstance, values: Sequence[bool]) -> None:
    j = violated_clause(cnf, values)
    if j is not None:
        raise UnsatisfiedAssignment(j, cnf.clauses[j])


def brute_force_sat(cnf: CnfInstance):
    """First satisfying assignment in lexicographic order (False < True), or None."""
    for values in product((False, True), repeat=cnf.p):
        if violated_clause(cnf, values) is None:
            return tuple(values)
    return None


def parse_dimacs(text: str) -> CnfInstance:
    """Strict DIMACS reader for 3-CNF. Clauses may span lines."""
    header = None
    clauses = []
    current = []
    start = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            break
        if stripped.startswith("p"):
            if header is not None:
                raise ParseError("second header", lineno, 1)
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError("expected 'p cnf V C'", lineno, 1)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("header counts must be integers", lineno, 1) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError("header counts must be nonnegative", lineno, 1)
            continue
        if header is None:
            raise ParseError("clause before the header", lineno, 1)
        for mt in re.finditer(r"\S+", line):
            tok, col = mt.group(), mt.start() + 1
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno, col) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno, col)
                if len(current) != 3 or len(set(current)) != 3:
                    raise NonTernaryClause(
                        f"clause {tuple(current)} does not have three distinct literals",
                        *start)
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds {header[0]} variables", lineno, col)
            if not current:
                start = (lineno, col)
            current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("unterminated clause", *start)
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return CnfInstance(header[0], tuple(clauses))


def preprocess(cnf: CnfInstance) -> CnfInstance:
    """Fixpoint of tautology removal and single-polarity fixing, then renumbering.

    The result satisfies the preprocessing invariants; an instance with no
    clauses left is ``trivialized``. Satisfiability is preserved and any
    satisfying assignment of the result lifts with :meth:`CnfInstance.lift`.
    """
    clauses = [c for c in cnf.clauses]
    fixed = dict(cnf.fixed)
    while True:
        before = len(clauses)
        clauses = [c for c in clauses if not any(-l in c for l in c)]
        pos = {l for c in clauses for l in c if l > 0}
        neg = {-l for c in clauses for l in c if l < 0}
        for v in sorted(pos - neg):
            fixed[cnf.var_map[v - 1]] = True
        for v in sorted(neg - pos):
            fixed[cnf.var_map[v - 1]] = False
        single = (pos - neg) | (neg - pos)
        clauses = [c for c in clauses if not any(abs(l) in single for l in c)]
        if len(clauses) == before:
            break
    used = sorted({abs(l) for c in clauses for l in c})
    for v in range(1, cnf.p + 1):
        orig = cnf.var_map[v - 1]
        if v not in used and orig not in fixed:
            fixed[orig] = False
    new = {v: k + 1 for k, v in enumerate(used)}
    out = tuple(tuple((1 if l > 0 else -1) * new[abs(l)] for l in c) for c in clauses)
    return CnfInstance(len(used), out, preprocessed=True,
                       var_map=tuple(cnf.var_map[v - 1] for v in used),
                       fixed=tuple(sorted(fixed.items())))


def duplicate_clauses(cnf: CnfInstance) -> CnfInstance:
    """Replace each of the ``q~`` clauses by ``2 q~`` consecutive copies."""
    if not cnf.preprocessed:
        raise NotPreprocessed("duplication needs a preprocessed instance")
    if cnf.duplicated:
        raise NotPreprocessed("instance is already duplicated")
    qt = cnf.q
    out = tuple(c for c in cnf.clauses for _ in range(2 * qt))
    return CnfInstance(cnf.p, out, preprocessed=True, var_map=cnf.var_map,
                       fixed=cnf.fixed, q_tilde=qt, duplicated=True)
