"""The 3-CNF to maximum-singularity-degree SDP reduction.

Row indices of the SDP are triples ``(i, j, k)``: variable ``i`` occurs in
clause ``j`` and ``k in {1, 2}`` picks one of two copies. The sentinel
``(0, 0, 0)`` comes last. With ``p`` variables and ``q`` clauses there are
``2p + q`` constraint matrices, all with right-hand side 0:

* ``A_i`` (``i <= p``) is the 0/1 diagonal on ``T_i | V_i``, where ``T_i``
  holds the copy-1 triples of clauses containing ``u_i`` and ``V_i`` all
  copy-2 triples of variable ``i``;
* ``A_{p+i}`` is the 0/1 diagonal on ``F_i | V_i`` (``F_i``: clauses
  containing the negation of ``u_i``);
* ``A_{2p+j}`` has ones on the diagonal over the copy-1 triples ``C_j`` of
  clause ``j`` and symmetric ones joining the sentinel to its copy-2
  triples ``D_j``.

Matrix indices are 0-based in Python: ``A_i`` is ``sdp.mats[i - 1]``.
"""
from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence

from ..errors import BudgetExceeded, NotPreprocessed
from ..lp_fr.model import LinearSet
from ..lp_fr.sequence import msd_lp
from ..sdp_fr.model import FRSequenceSDP, SdpExposingVector, SdpFace, SdpProblem
from ..sdp_fr.ops import build_sequence, diagonal_lp, simplify_blockdiag
from .cnf import CnfInstance, assumption_violation, check_assignment

SENTINEL = (0, 0, 0)
# above this order exposing vectors keep only y; W is formed per face
MATERIALIZE_MAX_N = 200


@dataclass(frozen=True)
class IndexUniverse:
    triples: tuple

    def __post_init__(self):
        object.__setattr__(self, "lookup", {t: r for r, t in enumerate(self.triples)})

    @classmethod
    def build(cls, cnf: CnfInstance) -> "IndexUniverse":
        """Lexicographic on ``(k, j, i)``, sentinel last (1-based i and j)."""
        triples = []
        for k in (1, 2):
            for j, c in enumerate(cnf.clauses, 1):
                for i in sorted(abs(l) for l in c):
                    triples.append((i, j, k))
        triples.append(SENTINEL)
        return cls(tuple(triples))

    def __len__(self):
        return len(self.triples)

    def index(self, triple) -> int:
        return self.lookup[tuple(triple)]


@dataclass(frozen=True, eq=False)
class ReductionInstance:
    cnf: CnfInstance
    sdp: SdpProblem
    universe: IndexUniverse
    truth_sets: tuple    # per variable: (T_i, F_i, V_i) as sorted row-index tuples
    clause_sets: tuple   # per clause: (C_j, D_j)

    @property
    def p(self) -> int:
        return self.cnf.p

    @property
    def q(self) -> int:
        return self.cnf.q

    @property
    def q_tilde(self) -> int:
        return self.cnf.q_tilde

    @property
    def d(self) -> int:
        return self.p + self.q

    @property
    def n(self) -> int:
        return self.sdp.n

    @property
    def sentinel(self) -> int:
        return self.universe.index(SENTINEL)

    def to_json(self) -> dict:
        out = self.sdp.to_json()
        out["meta"] = {"p": self.p, "q": self.q, "q_tilde": self.q_tilde, "d": self.d}
        return out


def build_msd_sdp(cnf: CnfInstance, *, allow_unpreprocessed: bool = False) -> ReductionInstance:
    """Reduction instance of ``cnf``; ``d = p + q``.

    ``allow_unpreprocessed`` admits clauses over three distinct variables in
    which some variable has a single polarity (illustrative fixtures only).
    """
    if not cnf.preprocessed and not allow_unpreprocessed:
        raise NotPreprocessed("build_msd_sdp needs a preprocessed instance")
    problem = assumption_violation(cnf)
    if problem and "distinct" in problem:
        raise NotPreprocessed(problem)
    if cnf.q == 0:
        raise NotPreprocessed("instance has no clauses")
    U = IndexUniverse.build(cnf)
    idx = U.index
    p, q = cnf.p, cnf.q
    T = [[] for _ in range(p)]
    F = [[] for _ in range(p)]
    V = [[] for _ in range(p)]
    clause_sets = []
    for j, c in enumerate(cnf.clauses, 1):
        C, D = [], []
        for l in c:
            i = abs(l)
            r1, r2 = idx((i, j, 1)), idx((i, j, 2))
            (T if l > 0 else F)[i - 1].append(r1)
            V[i - 1].append(r2)
            C.append(r1)
            D.append(r2)
        clause_sets.append((tuple(sorted(C)), tuple(sorted(D))))
    truth = tuple((tuple(sorted(T[i])), tuple(sorted(F[i])), tuple(sorted(V[i])))
                  for i in range(p))
    s = idx(SENTINEL)
    mats = [{(r, r): 1 for r in Ti + Vi} for Ti, _, Vi in truth]
    mats += [{(r, r): 1 for r in Fi + Vi} for _, Fi, Vi in truth]
    for C, D in clause_sets:
        A = {(r, r): 1 for r in C}
        A.update({(r, s): 1 for r in D})
        mats.append(A)
    sdp = SdpProblem(len(U), tuple(mats), (0,) * (2 * p + q), U.triples)
    return ReductionInstance(cnf, sdp, U, truth, tuple(clause_sets))


def truth_step(R: ReductionInstance, i: int, value: bool) -> int:
    """0-based matrix index used for variable ``i`` (0-based): ``A_{p+i}`` when
    true, ``A_i`` when false."""
    return R.p + i if value else i


def sequence_steps(R: ReductionInstance, values: Sequence[bool]) -> list:
    """0-based matrix indices of the forward sequence for ``values``."""
    return [truth_step(R, i, v) for i, v in enumerate(values)] + \
        [2 * R.p + j for j in range(R.q)]


def assignment_to_sequence(R: ReductionInstance, values: Sequence[bool], *,
                           materialize: bool | None = None) -> FRSequenceSDP:
    """FR sequence of length ``p + q`` induced by a satisfying assignment.

    Every face is a block face; the last one is spanned by the sentinel.
    """
    values = [bool(v) for v in values]
    check_assignment(R.cnf, values)
    if materialize is None:
        materialize = R.n <= MATERIALIZE_MAX_N
    m = R.sdp.m
    steps = []
    for k in sequence_steps(R, values):
        y = [0.0] * m
        y[k] = 1.0
        steps.append(SdpExposingVector.from_y(R.sdp, y, materialize))
    return build_sequence(R.sdp, steps, SdpFace.block(R.n, range(R.n)))


def truth_face_support(R: ReductionInstance, values: Sequence[bool]) -> list:
    """Rows left after the truth-setting steps: the copy-1 triples whose literal
    is made true, plus the sentinel."""
    S = []
    for i, v in enumerate(values):
        Ti, Fi, _ = R.truth_sets[i]
        S.extend(Ti if v else Fi)
    S.append(R.sentinel)
    return sorted(S)


def reduced_lp_with_labels(R: ReductionInstance, values: Sequence[bool]):
    """``(L, labels)``: the LP left on the face reached after the truth-setting
    steps, with the triple of each LP variable."""
    S = truth_face_support(R, values)
    small = simplify_blockdiag(R.sdp, SdpFace.block(R.n, S))
    out = diagonal_lp(small, drop_zero=True)
    if out is None:  # pragma: no cover - excluded by construction
        raise AssertionError("reduced problem is not diagonal")
    L, kept = out
    return L, [small.labels[t] for t in kept]


def reduced_lp_for_assignment(R: ReductionInstance, values: Sequence[bool]) -> LinearSet:
    return reduced_lp_with_labels(R, values)[0]


def match_matrix(R: ReductionInstance, values: Sequence[bool]) -> list:
    """``M[i][j] = 1`` iff the literal of variable ``i`` in clause ``j`` is true."""
    M = [[0] * R.q for _ in range(R.p)]
    for j, c in enumerate(R.cnf.clauses):
        for l in c:
            if bool(values[abs(l) - 1]) == (l > 0):
                M[abs(l) - 1][j] = 1
    return M


# row permutations tried when canonicalizing a match matrix
CANON_MAX_P = 7


def match_key(M) -> tuple | None:
    """A form of ``M`` shared by all its row and column permutations, or None
    when ``M`` has more than ``CANON_MAX_P`` rows.

    The reduced LP is the row/column-sum polyhedron of ``M``, whose MSD does
    not change when rows or columns are permuted; equal keys therefore share
    one LP solve.
    """
    p = len(M)
    if p > CANON_MAX_P:
        return None
    cols = list(zip(*M)) if p else []
    best = None
    for perm in permutations(range(p)):
        key = tuple(sorted(tuple(c[i] for i in perm) for c in cols))
        if best is None or key < best:
            best = key
    return best


def _assignment_value(R: ReductionInstance, values) -> int:
    return R.p + msd_lp(reduced_lp_for_assignment(R, values))


def _worker(args):
    R, values = args
    return _assignment_value(R, values)


def assignment_values(R: ReductionInstance, budget: int, jobs: int = 1) -> list:
    """``[(values, p + msd of the reduced LP)]`` over all ``2^p`` assignments."""
    if 2 ** R.p > budget:
        raise BudgetExceeded(f"2^{R.p} assignments exceed the budget {budget}")
    assignments = [tuple(v) for v in product((False, True), repeat=R.p)]
    keys = [match_key(match_matrix(R, a)) for a in assignments]
    todo, seen = [], set()
    for a, k in zip(assignments, keys):
        if k is None or k not in seen:
            todo.append(a)
            seen.add(k)
    if jobs > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            vals = list(ex.map(_worker, [(R, a) for a in todo]))
    else:
        vals = [_assignment_value(R, a) for a in todo]
    solved = dict(zip(todo, vals))
    by_key = {k: solved[a] for a, k in zip(assignments, keys) if a in solved and k is not None}
    return [(a, solved[a] if a in solved else by_key[k]) for a, k in zip(assignments, keys)]


def exact_msd_of_reduction(R: ReductionInstance, budget: int, jobs: int = 1) -> int:
    """Maximum singularity degree of the reduction instance.

    Some longest sequence spends its first ``p`` steps on one truth-setting
    matrix per variable, so the value is the maximum over assignments of
    ``p`` plus the LP value of the face they reach.
    """
    return max(v for _, v in assignment_values(R, budget, jobs))
