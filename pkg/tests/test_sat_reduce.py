import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frkit.errors import (BudgetExceeded, MalformedTask, NonTernaryClause, NotApplicable,
                          NotPreprocessed, ParseError, UnsatisfiedAssignment)
from frkit.kernel import sym_eig
from frkit.lp_fr import brute_force_msd, matrix_linear_set, msd_upper_bound_blocks
from frkit.sat_reduce import (CnfInstance, assignment_to_sequence,
                              assignment_values, brute_force_sat, build_msd_sdp, certify,
                              check_assignment, complete_cnf, duplicate_clauses,
                              exact_msd_of_reduction, match_key, match_matrix, parse_dimacs,
                              preprocess, reduced_lp_with_labels, sequence_steps,
                              three_variable_cnfs, truth_face_support)
from frkit.sat_reduce.reduction import SENTINEL
from frkit.sdp_fr import verify_sequence_sdp
from strategies import random_preprocessed_cnf

EXAMPLE = CnfInstance(3, ((1, 2, -3),))


def example_instance():
    return build_msd_sdp(EXAMPLE, allow_unpreprocessed=True)


def seeded_cnfs(count, seed, **kw):
    rng = random.Random(seed)
    return [random_preprocessed_cnf(rng, **kw) for _ in range(count)]


# ----- DIMACS -----

def test_parse_single_clause():
    cnf = parse_dimacs("p cnf 3 1\n1 2 -3 0\n")
    assert (cnf.p, cnf.clauses, cnf.preprocessed) == (3, ((1, 2, -3),), False)


def test_parse_comments_spanning_and_terminator():
    text = "c a comment\np cnf 4 2\n1 2\n -3 0 2 3 4 0\n%\n0\n"
    cnf = parse_dimacs(text)
    assert cnf.clauses == ((1, 2, -3), (2, 3, 4))


def test_parse_tautology_is_accepted():
    assert parse_dimacs("p cnf 2 1\n1 -1 2 0").clauses == ((1, -1, 2),)


@pytest.mark.parametrize("text, line, column", [
    ("p cnf 3 1\n0\n", 2, 1),
    ("p cnf 3 1\n1 x 3 0\n", 2, 3),
    ("p cnf 3 1\n1 2 4 0\n", 2, 5),
    ("p cnf 3 1\n1 2 3\n", 2, 1),
    ("1 2 3 0\n", 1, 1),
    ("p dnf 3 1\n1 2 3 0\n", 1, 1),
])
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_dimacs(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_parse_count_mismatch():
    with pytest.raises(ParseError, match="announces"):
        parse_dimacs("p cnf 3 2\n1 2 3 0\n")


@pytest.mark.parametrize("clause", ["1 2 0", "1 1 2 0", "1 2 3 -1 0"])
def test_parse_non_ternary(clause):
    with pytest.raises(NonTernaryClause):
        parse_dimacs(f"p cnf 3 1\n{clause}\n")


def test_dimacs_roundtrip():
    cnf = complete_cnf()
    assert parse_dimacs(cnf.to_dimacs()) == cnf


def test_bad_literal_in_instance():
    with pytest.raises(MalformedTask):
        CnfInstance(2, ((1, 2, 3),))


# ----- preprocessing and duplication -----

def test_preprocess_removes_tautology():
    cnf = CnfInstance(4, ((1, -1, 2), (2, 3, 4), (-2, -3, -4)))
    pre = preprocess(cnf)
    assert pre.q == 2
    assert dict(pre.fixed) == {1: False}
    assert pre.var_map == (2, 3, 4)


def test_preprocess_fixes_single_polarity():
    cnf = CnfInstance(4, ((1, 2, 3), (-2, -3, 4), (2, 3, -4)))
    pre = preprocess(cnf)
    assert dict(pre.fixed)[1] is True
    assert pre.clauses == ((-1, -2, 3), (1, 2, -3))


def test_preprocess_fixpoint_is_stable():
    cnf = complete_cnf()
    pre = preprocess(cnf)
    assert pre.clauses == cnf.clauses and pre.fixed == ()
    again = preprocess(pre)
    assert again.clauses == pre.clauses


def test_preprocess_trivializes():
    pre = preprocess(EXAMPLE)
    assert pre.trivialized and pre.q == 0
    assert EXAMPLE.satisfied_by([pre.lift([])[v] for v in (1, 2, 3)])


def test_preprocessed_flag_is_checked():
    with pytest.raises(NotPreprocessed):
        CnfInstance(3, ((1, 2, 3),), preprocessed=True)


@pytest.mark.parametrize("qt", [2, 3])
def test_duplicate_block_order(qt):
    cnf = three_variable_cnfs(qt)[0]
    dup = duplicate_clauses(cnf)
    assert dup.q == 2 * qt * qt and dup.q_tilde == qt and dup.duplicated
    for j, c in enumerate(cnf.clauses):
        assert dup.clauses[2 * qt * j: 2 * qt * (j + 1)] == (c,) * (2 * qt)


def test_duplicate_preconditions():
    with pytest.raises(NotPreprocessed):
        duplicate_clauses(complete_cnf())
    dup = duplicate_clauses(preprocess(complete_cnf()))
    assert dup.q == 128
    with pytest.raises(NotPreprocessed):
        duplicate_clauses(dup)


@settings(max_examples=150)
@given(st.integers(1, 5), st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_preprocess_preserves_satisfiability(p, q, seed):
    rng = random.Random(seed)
    p = max(p, 3)
    clauses = []
    for _ in range(q):
        vs = rng.sample(range(1, p + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    if rng.random() < 0.3:
        v = rng.randint(1, p)
        clauses.append((v, -v, (v % p) + 1))
    cnf = CnfInstance(p, tuple(clauses))
    pre = preprocess(cnf)
    sat = brute_force_sat(pre) if not pre.trivialized else ()
    assert (sat is not None) == (brute_force_sat(cnf) is not None)
    if sat is not None:
        lifted = pre.lift(sat)
        assert cnf.satisfied_by([lifted[v] for v in range(1, p + 1)])


# ----- the construction -----

def test_example_universe():
    R = example_instance()
    assert R.universe.triples == ((1, 1, 1), (2, 1, 1), (3, 1, 1),
                                  (1, 1, 2), (2, 1, 2), (3, 1, 2), SENTINEL)
    assert (R.n, R.sdp.m, R.d) == (7, 7, 4)


def test_example_matrices():
    R = example_instance()
    ix = R.universe.index
    A = [R.sdp.dense(k) for k in range(7)]
    assert np.array_equal(np.diag(A[0]).nonzero()[0], [ix((1, 1, 1)), ix((1, 1, 2))])
    assert np.array_equal(np.diag(A[3]).nonzero()[0], [ix((1, 1, 2))])
    assert np.array_equal(np.diag(A[5]).nonzero()[0], [ix((3, 1, 1)), ix((3, 1, 2))])
    clause = A[6]
    assert clause[ix(SENTINEL), ix((2, 1, 2))] == 1 == clause[ix((2, 1, 2)), ix(SENTINEL)]
    assert clause[ix(SENTINEL), ix(SENTINEL)] == 0


def test_clause_block_eigenvalues():
    R = example_instance()
    _, D = R.clause_sets[0]
    idx = list(D) + [R.sentinel]
    B = R.sdp.dense(6)[np.ix_(idx, idx)]
    assert np.allclose(sym_eig(B).eigenvalues, [np.sqrt(3), 0, 0, -np.sqrt(3)])


def test_build_requires_preprocessed():
    with pytest.raises(NotPreprocessed):
        build_msd_sdp(EXAMPLE)
    with pytest.raises(NotPreprocessed):
        build_msd_sdp(CnfInstance(3, ((1, -1, 2),)), allow_unpreprocessed=True)


def test_reduction_json_meta():
    R = build_msd_sdp(duplicate_clauses(three_variable_cnfs(2)[0]))
    data = R.to_json()
    assert data["meta"] == {"p": 3, "q": 8, "q_tilde": 2, "d": 11}
    assert data["labels"][-1] == [0, 0, 0]


# ----- the assignment-induced sequence -----

def test_worked_example_sequence():
    R = example_instance()
    values = (True, False, False)
    assert [k + 1 for k in sequence_steps(R, values)] == [4, 2, 3, 7]
    seq = assignment_to_sequence(R, values)
    rep = verify_sequence_sdp(R.sdp, seq)
    assert rep.valid and rep.length == 4
    expected = [
        {SENTINEL, (1, 1, 1), (3, 1, 1), (3, 1, 2), (2, 1, 1), (2, 1, 2), (1, 1, 2)},
        {SENTINEL, (1, 1, 1), (3, 1, 1), (3, 1, 2), (2, 1, 1), (2, 1, 2)},
        {SENTINEL, (1, 1, 1), (3, 1, 1), (3, 1, 2)},
        {SENTINEL, (1, 1, 1), (3, 1, 1)},
        {SENTINEL},
    ]
    got = [{R.universe.triples[i] for i in F.block_support} for F in seq.faces]
    assert got == expected


def test_unsatisfying_assignment_rejected():
    R = example_instance()
    with pytest.raises(UnsatisfiedAssignment) as exc:
        assignment_to_sequence(R, (False, False, True))
    assert exc.value.clause_index == 0
    with pytest.raises(MalformedTask):
        check_assignment(EXAMPLE, (True,))


def test_unmaterialized_sequence_verifies():
    R = example_instance()
    seq = assignment_to_sequence(R, (True, True, True), materialize=False)
    assert all(s.W is None for s in seq.steps)
    assert verify_sequence_sdp(R.sdp, seq).valid


# ----- reduced LPs -----

def _row_sets(L, labels):
    rows = []
    for r in L.A.to_rows():
        entries = {labels[t][:2]: v for t, v in enumerate(r) if v}
        if entries:
            rows.append(sorted(entries.items()))
    return sorted(rows)


def test_reduced_lp_is_the_match_polyhedron():
    for cnf in seeded_cnfs(15, 7):
        R = build_msd_sdp(cnf)
        for values in product((False, True), repeat=R.p):
            L, labels = reduced_lp_with_labels(R, values)
            assert L.m == 2 * R.p + R.q
            M = match_matrix(R, values)
            L2, E = matrix_linear_set(M)
            ref = _row_sets(L2, [(i + 1, j + 1) for i, j in E])
            assert _row_sets(L, labels) == ref
            assert sorted(t[:2] for t in labels) == sorted((i + 1, j + 1) for i, j in E)


def test_unsatisfiable_gives_zero_column_everywhere():
    R = build_msd_sdp(preprocess(complete_cnf()))
    for values in product((False, True), repeat=3):
        M = match_matrix(R, values)
        assert any(not any(M[i][j] for i in range(3)) for j in range(R.q))


def test_truth_face_support():
    R = example_instance()
    S = truth_face_support(R, (True, False, False))
    assert {R.universe.triples[i] for i in S} == {(1, 1, 1), (3, 1, 1), SENTINEL}


def test_match_key_is_permutation_invariant():
    M = [[1, 0, 1], [0, 1, 1]]
    assert match_key(M) == match_key([M[1], M[0]])
    assert match_key(M) == match_key([[r[2], r[0], r[1]] for r in M])
    assert match_key(M) != match_key([[1, 1, 1], [0, 0, 0]])


@pytest.mark.parametrize("cnf", seeded_cnfs(6, 11, max_p=4, max_q=4), ids=str)
def test_assignment_values_match_brute_force(cnf):
    R = build_msd_sdp(cnf)
    for values, v in assignment_values(R, 1 << R.p):
        L, _ = reduced_lp_with_labels(R, values)
        assert v == R.p + brute_force_msd(L)


def test_budget():
    R = build_msd_sdp(three_variable_cnfs(2)[0])
    with pytest.raises(BudgetExceeded):
        exact_msd_of_reduction(R, 4)


def test_certify_trivialized():
    rep = certify(EXAMPLE, 16)
    assert rep.trivialized and rep.satisfiable and (rep.msd, rep.d) == (0, 0)
    assert rep.claim_holds


def test_certify_satisfiable_small():
    rep = certify(three_variable_cnfs(2)[0], 1 << 10)
    assert rep.satisfiable and rep.witness_valid
    assert rep.msd >= rep.d == 3 + 8
    assert rep.claim_holds
    assert rep.to_json()["witness_valid"] is True


def test_catalogue_sizes():
    assert [len(three_variable_cnfs(q)) for q in range(2, 9)] == [1, 2, 5, 3, 3, 1, 1]
    assert three_variable_cnfs(8)[0].clauses == tuple(sorted(complete_cnf().clauses))


# ----- properties -----

def _sym_support(A):
    return {(min(i, j), max(i, j)) for (i, j) in A}


@pytest.mark.parametrize("cnf", seeded_cnfs(50, 3), ids=str)
def test_generator_invariants(cnf):
    R = build_msd_sdp(cnf)
    p, q = R.p, R.q
    assert R.n == 6 * q + 1 and R.sdp.m == 2 * p + q and len(R.universe) == 6 * q + 1
    assert all(b == 0 for b in R.sdp.b)
    for (i, j, k) in R.universe.triples[:-1]:
        assert any(abs(l) == i for l in cnf.clauses[j - 1])
    for A in R.sdp.mats:
        assert all(v in (0, 1) for v in A.values())
    for i, (T, F, V) in enumerate(R.truth_sets):
        assert not set(T) & set(F)
        assert set(np.flatnonzero(np.diag(R.sdp.dense(i)))) == set(T) | set(V)
        assert set(np.flatnonzero(np.diag(R.sdp.dense(p + i)))) == set(F) | set(V)
        assert _sym_support(R.sdp.mats[i]) == {(r, r) for r in set(T) | set(V)}
    s = R.sentinel
    for j, (C, D) in enumerate(R.clause_sets):
        A = R.sdp.mats[2 * p + j]
        assert _sym_support(A) == {(r, r) for r in C} | {(min(r, s), max(r, s)) for r in D}
        idx = list(D) + [s]
        lam = sym_eig(R.sdp.dense(2 * p + j)[np.ix_(idx, idx)]).eigenvalues
        assert np.allclose(lam, [np.sqrt(3), 0, 0, -np.sqrt(3)])


@pytest.mark.parametrize("cnf", seeded_cnfs(10, 5), ids=str)
def test_sparsity_law(cnf):
    R = build_msd_sdp(cnf)
    p = R.p
    rng = np.random.default_rng(0)
    ix = R.universe.index
    for _ in range(5):
        y = rng.normal(size=R.sdp.m)
        W = R.sdp.combo(y)
        expected = np.zeros_like(W)
        s = R.sentinel
        for j, c in enumerate(cnf.clauses, 1):
            for l in c:
                i = abs(l)
                truth = y[i - 1] if l > 0 else y[p + i - 1]
                a, b = ix((i, j, 1)), ix((i, j, 2))
                expected[a, a] = truth + y[2 * p + j - 1]
                expected[b, b] = y[i - 1] + y[p + i - 1]
                expected[b, s] = expected[s, b] = y[2 * p + j - 1]
        assert np.allclose(W, expected, atol=1e-12)


@pytest.mark.parametrize("cnf", seeded_cnfs(12, 9, satisfiable=True), ids=str)
def test_forward_soundness_and_block_law(cnf):
    R = build_msd_sdp(cnf)
    for values in product((False, True), repeat=R.p):
        if not cnf.satisfied_by(values):
            continue
        seq = assignment_to_sequence(R, values)
        rep = verify_sequence_sdp(R.sdp, seq)
        assert rep.valid and rep.length == R.p + R.q
        assert all(F.block_support is not None for F in seq.faces)
        assert seq.final_face.block_support == {R.sentinel}


def _bound(R, values):
    M = match_matrix(R, values)
    qt = R.q_tilde
    # one representative column per block of duplicated clauses
    cols = [[M[i][2 * qt * jt] for i in range(R.p)] for jt in range(qt)]
    return msd_upper_bound_blocks(cols, 2 * qt)


@pytest.mark.slow
@pytest.mark.parametrize("cnf", three_variable_cnfs(2) + three_variable_cnfs(3)[:1], ids=str)
def test_bound_consistency(cnf):
    R = build_msd_sdp(duplicate_clauses(cnf))
    values = assignment_values(R, 1 << R.p)
    best, msd = max(values, key=lambda t: t[1])
    try:
        bound = _bound(R, best)
    except NotApplicable:
        return
    assert msd <= R.p + bound
    assert msd >= R.d
