from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import tribool_matrices, unit_matrices
from shatterdim import (
    BlockSpec,
    Domain,
    Kind,
    RationalMatrix,
    ShatterSpec,
    SizeLimitError,
    SpecError,
    TriBoolMatrix,
    candidate_thresholds,
    is_shattered,
    is_vc_shattered,
    make_b_d,
    make_block_matrix,
    realized_patterns,
    threshold,
    transpose,
)
from shatterdim.errors import LabelError
from shatterdim.shattering import P, V, VC, P_gamma, V_gamma

WIDTHS = [Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)]


def all_specs():
    yield P
    yield V
    for g in WIDTHS:
        yield P_gamma(g)
        yield V_gamma(g)


# realized_patterns / VC


def test_b2_realizes_everything():
    B = TriBoolMatrix([[0, 0], [0, 1], [1, 0], [1, 1]])
    assert realized_patterns(B, ["c0", "c1"]) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_star_matches_nothing():
    assert realized_patterns(TriBoolMatrix([[1, "*"]]), ["c0", "c1"]) == set()


def test_duplicates_collapse():
    assert realized_patterns(TriBoolMatrix([[0, 0], [0, 0]]), ["c0", "c1"]) == {(0, 0)}


def test_unknown_column():
    with pytest.raises(LabelError):
        realized_patterns(TriBoolMatrix([[0]]), ["zz"])


def test_empty_j_rejected():
    with pytest.raises(SpecError):
        realized_patterns(TriBoolMatrix([[0]]), [])


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_b_d_shatters_all_columns(d):
    B = make_b_d(d)
    assert is_vc_shattered(B, B.col_ids)


def test_too_few_rows_cannot_shatter():
    B = TriBoolMatrix([[0, 1], [1, 0], [1, 1]])
    assert not is_vc_shattered(B, ["c0", "c1"])


def test_constant_zero_column():
    B = TriBoolMatrix([[0, 0], [0, 1], [0, 0], [0, 1]])
    assert not is_vc_shattered(B, ["c0", "c1"])


def test_vc_requires_boolean_rational():
    with pytest.raises(SpecError):
        is_vc_shattered(RationalMatrix([[2]]), ["c0"])


# candidate thresholds


def test_candidates_sharp():
    A = RationalMatrix([[0], [2], [3], [2]])
    assert candidate_thresholds(A, "c0", P) == [0, 2, 3]


def test_candidates_sharp_match_dense_oracle():
    A = RationalMatrix([[0], [2], [3]])
    col = [r[0] for r in A.rows]
    dense = {tuple(oracle.label(a, t, 0) for a in col) for t in oracle.dense_thresholds(col)}
    canon = {tuple(oracle.label(a, t, 0) for a in col) for t in candidate_thresholds(A, "c0", P)}
    # every labelling with both labels present is reached by a candidate
    assert {lab for lab in dense if 0 in lab and 1 in lab} <= canon


def test_candidates_width():
    A = RationalMatrix([[0], [1]])
    assert candidate_thresholds(A, "c0", P_gamma("1/4")) == [Fraction(-1, 4), Fraction(3, 4)]


def test_candidates_constant():
    A = RationalMatrix([[5], [5]])
    assert candidate_thresholds(A, "c0", P) == [5]


def test_candidates_vc_rejected():
    with pytest.raises(SpecError):
        candidate_thresholds(RationalMatrix([[0]]), "c0", VC)


def test_candidates_fast_path():
    A = RationalMatrix([[0], [2]], domain=Domain.integer(3))
    assert candidate_thresholds(A, "c0", P, fast_path=True) == [1, 2, 3]


# is_shattered examples


def test_block_11_pdim_thresholds():
    A = make_block_matrix(BlockSpec((1, 1)))
    ok, t = is_shattered(A, A.col_ids, P)
    assert ok
    assert [t.for_column(c) for c in A.col_ids] == [1, 2]


def test_block_11_not_v_shattered():
    A = make_block_matrix(BlockSpec((1, 1)))
    assert is_shattered(A, A.col_ids, V) == (False, None)


def test_single_column_width_boundary():
    A = RationalMatrix([[0], [1]])
    assert not is_shattered(A, ["c0"], P_gamma("1/2"))[0]
    assert is_shattered(A, ["c0"], P_gamma("1/4"))[0]


def test_spec_validation():
    with pytest.raises(SpecError):
        ShatterSpec(Kind.P_GAMMA)
    with pytest.raises(SpecError):
        ShatterSpec(Kind.P_GAMMA, 0)
    with pytest.raises(SpecError):
        ShatterSpec(Kind.V_GAMMA, "-1/2")
    with pytest.raises(SpecError):
        ShatterSpec(Kind.P, "1/2")
    with pytest.raises(SpecError):
        is_shattered(RationalMatrix([[0]]), ["c0"], VC)


def test_subset_size_guard():
    A = RationalMatrix([[0] * 31])
    with pytest.raises(SizeLimitError):
        is_shattered(A, A.col_ids, P)


def test_dual_flag_uses_transpose():
    A = make_block_matrix(BlockSpec((1, 1)))
    dual = ShatterSpec(Kind.P, dual=True)
    T = transpose(A)
    for J in (["row0", "row3"], ["row1", "row2"]):
        assert is_shattered(A, J, dual)[0] == is_shattered(T, J, P)[0]


def test_returned_thresholds_shatter():
    A = make_block_matrix(BlockSpec((2, 1)))
    ok, t = is_shattered(A, A.col_ids, P)
    assert ok
    assert is_vc_shattered(threshold(A, t), A.col_ids)


# properties


def _check_vs_oracle(A):
    rows = A.rows
    for s in range(1, A.shape[1] + 1):
        for J in combinations(range(A.shape[1]), s):
            labels = [A.col_ids[j] for j in J]
            for spec in all_specs():
                got = is_shattered(A, labels, spec)[0]
                want = oracle.shattered(rows, J, spec.kind.value, spec.width)
                assert got == want, (spec, labels, rows)


@settings(max_examples=60, deadline=None)
@given(unit_matrices())
def test_prop_oracle_equivalence(A):
    _check_vs_oracle(A)


@settings(max_examples=60, deadline=None)
@given(tribool_matrices())
def test_prop_vc_oracle_equivalence(B):
    for s in range(1, B.shape[1] + 1):
        for J in combinations(range(B.shape[1]), s):
            got = is_vc_shattered(B, [B.col_ids[j] for j in J])
            assert got == oracle.shattered(B.rows, J, "VC")


@settings(max_examples=60, deadline=None)
@given(unit_matrices(max_cols=4), st.data())
def test_prop_downward_closure(A, data):
    J = data.draw(st.lists(st.sampled_from(A.col_ids), min_size=1, unique=True))
    for spec in all_specs():
        ok, t = is_shattered(A, J, spec)
        if not ok:
            continue
        for s in range(1, len(J)):
            for sub in combinations(J, s):
                assert is_shattered(A, list(sub), spec)[0]
                # the same thresholds still work on the subset
                assert is_vc_shattered(threshold(restrict_cols(A, sub), t), list(sub))


def restrict_cols(A, cols):
    from shatterdim import restrict

    return restrict(A, A.row_ids, list(cols))


@settings(max_examples=80, deadline=None)
@given(unit_matrices(), st.data())
def test_prop_implication_chain(A, data):
    J = data.draw(st.lists(st.sampled_from(A.col_ids), min_size=1, unique=True))
    p = is_shattered(A, J, P)[0]
    v = is_shattered(A, J, V)[0]
    assert not v or p
    for g in WIDTHS:
        pg = is_shattered(A, J, P_gamma(g))[0]
        vg = is_shattered(A, J, V_gamma(g))[0]
        assert not vg or v
        assert not vg or pg
        assert not pg or p


@settings(max_examples=80, deadline=None)
@given(unit_matrices(), st.data())
def test_prop_width_monotone(A, data):
    J = data.draw(st.lists(st.sampled_from(A.col_ids), min_size=1, unique=True))
    for make in (P_gamma, V_gamma):
        res = [is_shattered(A, J, make(g))[0] for g in WIDTHS]
        # a wider margin never shatters more
        assert res == sorted(res, reverse=True)
        for g1, g2 in combinations(WIDTHS, 2):
            ok, t = is_shattered(A, J, make(g2))
            if ok:
                narrower = type(t)(per_column=t.per_column, uniform=t.uniform, width=g1)
                assert is_vc_shattered(threshold(restrict_cols(A, J), narrower), J)


@st.composite
def integer_matrices(draw, k):
    n = draw(st.integers(1, 6))
    m = draw(st.integers(1, 4))
    rows = draw(st.lists(st.lists(st.integers(0, k), min_size=m, max_size=m), min_size=n, max_size=n))
    return RationalMatrix(rows, domain=Domain.integer(k))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(integer_matrices), st.data())
def test_prop_fast_path_matches_general(A, data):
    J = data.draw(st.lists(st.sampled_from(A.col_ids), min_size=1, unique=True))
    for spec in (P, V):
        assert is_shattered(A, J, spec)[0] == is_shattered(A, J, spec, fast_path=True)[0]


@settings(max_examples=100, deadline=None)
@given(integer_matrices(1), st.data())
def test_prop_boolean_p_equals_vc(A, data):
    J = data.draw(st.lists(st.sampled_from(A.col_ids), min_size=1, unique=True))
    assert is_shattered(A, J, P)[0] == is_vc_shattered(A, J)
