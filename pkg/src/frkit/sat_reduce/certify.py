"""End-to-end certification of the reduction on small CNFs."""
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from ..sdp_fr.model import FRSequenceSDP
from ..sdp_fr.ops import verify_sequence_sdp
from .cnf import CnfInstance, assumption_violation, brute_force_sat, duplicate_clauses, preprocess
from .reduction import ReductionInstance, assignment_to_sequence, assignment_values, build_msd_sdp


@dataclass
class CertifyReport:
    satisfiable: bool
    msd: int
    d: int
    p: int = 0
    q: int = 0
    q_tilde: int = 0
    trivialized: bool = False
    witness: tuple | None = None            # (assignment, FRSequenceSDP)
    witness_valid: bool | None = None
    best_assignment: tuple | None = None
    per_assignment: list = field(default_factory=list)
    instance: ReductionInstance | None = None

    @property
    def claim_holds(self) -> bool:
        """``msd >= d`` exactly when the CNF is satisfiable, and any witness
        verifies."""
        return (self.msd >= self.d) == self.satisfiable and self.witness_valid is not False

    def to_json(self, witness_file: str | None = None) -> dict:
        out = {"satisfiable": self.satisfiable, "msd": self.msd, "d": self.d,
               "p": self.p, "q": self.q, "q_tilde": self.q_tilde,
               "trivialized": self.trivialized, "claim_holds": self.claim_holds}
        if self.best_assignment is not None:
            out["best_assignment"] = [int(v) for v in self.best_assignment]
        if self.witness is not None:
            out["witness_assignment"] = [int(v) for v in self.witness[0]]
            out["witness_valid"] = self.witness_valid
            if witness_file is not None:
                out["witness_file"] = witness_file
        return out


def certify(cnf: CnfInstance, budget: int, jobs: int = 1) -> CertifyReport:
    """Preprocess, duplicate, build and compute the exact MSD; compare with
    brute-force satisfiability."""
    pre = preprocess(cnf)
    if pre.trivialized:
        return CertifyReport(True, 0, 0, trivialized=True)
    dup = duplicate_clauses(pre)
    R = build_msd_sdp(dup)
    values = assignment_values(R, budget, jobs)
    best_a, msd = max(values, key=lambda t: t[1])
    sat = brute_force_sat(pre)
    report = CertifyReport(sat is not None, msd, R.d, R.p, R.q, R.q_tilde,
                           best_assignment=best_a, per_assignment=values, instance=R)
    if sat is not None:
        seq = assignment_to_sequence(R, sat)
        rep = verify_sequence_sdp(R.sdp, seq)
        report.witness = (sat, seq)
        report.witness_valid = rep.valid and rep.length == R.d
    return report


def witness_sequence(report: CertifyReport) -> FRSequenceSDP | None:
    return None if report.witness is None else report.witness[1]


# ----- the catalogue of clause sets over three variables -----

SIGN_PATTERNS = tuple(product((1, -1), repeat=3))


def _clause(signs) -> tuple:
    return tuple(s * (i + 1) for i, s in enumerate(signs))


def _canonical(patterns) -> tuple:
    """Smallest image of a set of sign patterns under variable permutations and
    sign flips."""
    best = None
    for perm in permutations(range(3)):
        for flip in SIGN_PATTERNS:
            img = tuple(sorted(tuple(flip[k] * pat[perm[k]] for k in range(3))
                               for pat in patterns))
            if best is None or img < best:
                best = img
    return best


def three_variable_cnfs(q_tilde: int) -> list:
    """One representative per isomorphism class of CNFs with ``q_tilde``
    distinct clauses over three variables, each clause using all three, that
    already satisfy the preprocessing invariants."""
    seen = {}
    for subset in combinations(SIGN_PATTERNS, q_tilde):
        key = _canonical(subset)
        if key in seen:
            continue
        cnf = CnfInstance(3, tuple(_clause(s) for s in key))
        if assumption_violation(cnf) is None:
            seen[key] = CnfInstance(3, cnf.clauses, preprocessed=True)
    return [seen[k] for k in sorted(seen)]


def complete_cnf() -> CnfInstance:
    """All eight clauses over three variables (unsatisfiable)."""
    return CnfInstance(3, tuple(_clause(s) for s in SIGN_PATTERNS))
