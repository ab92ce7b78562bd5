from fractions import Fraction

import pytest

from shatterdim import (
    BlockSpec,
    MatrixError,
    MergeFamily,
    RationalMatrix,
    SizeLimitError,
    augment_zero_row,
    dimension,
    make_b_d,
    make_block_matrix,
    make_lemma_5_3,
    make_lemma_5_4,
    merge,
    restrict,
    transpose,
)
from shatterdim.constructions import (
    ROW_BLOCKS,
    block_monotone,
    corollary_5_2_family,
    distinctness_holds,
    general_balance_holds,
    lemma_5_4_family,
    lemma_5_4_sizes,
)
from shatterdim.shattering import P, V, P_gamma

F = Fraction


def test_b1():
    assert make_b_d(1).rows == ((F(0),), (F(1),))


def test_b2_order():
    assert make_b_d(2).rows == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_b3_column_balance():
    B = make_b_d(3)
    for j in range(3):
        col = B.column(j)
        assert col.count(0) == 4 and col.count(1) == 4


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_b_d_conditions(d):
    B = make_b_d(d)
    assert distinctness_holds(B)
    assert general_balance_holds(B)


def test_balance_detects_violation():
    B = make_b_d(2)
    bad = RationalMatrix(B.rows[:3] + (B.rows[0],))
    assert not general_balance_holds(bad)
    assert not distinctness_holds(bad)


@pytest.mark.parametrize("d", [0, 31, -1])
def test_b_d_range(d):
    with pytest.raises((MatrixError, SizeLimitError)):
        make_b_d(d)


def test_block_11():
    A = make_block_matrix(BlockSpec((1, 1)))
    assert A.rows == ((0, 1), (0, 2), (1, 1), (1, 2))


def test_single_block_is_b_d():
    assert make_block_matrix(BlockSpec((3,))).rows == make_b_d(3).rows


def test_block_22_dimensions():
    A = make_block_matrix(BlockSpec((2, 2)))
    assert dimension(A, V)[0] == 2
    assert dimension(A, P)[0] == 4


def test_blockspec_guards():
    with pytest.raises(SizeLimitError):
        BlockSpec((2, 29))
    with pytest.raises(MatrixError):
        BlockSpec((0, 1))
    with pytest.raises(MatrixError):
        BlockSpec(())
    with pytest.raises(MatrixError):
        BlockSpec((1,), "diagonal")


SIZES = [(1,), (2, 1), (1, 1, 1), (2, 2), (3, 1), (1, 2, 1)]


@pytest.mark.parametrize("sizes", SIZES)
def test_block_monotone_both_orientations(sizes):
    col = make_block_matrix(BlockSpec(sizes))
    row = make_block_matrix(BlockSpec(sizes, ROW_BLOCKS))
    assert block_monotone(col, BlockSpec(sizes))
    assert block_monotone(row, BlockSpec(sizes, ROW_BLOCKS))
    assert block_monotone(augment_zero_row(row), BlockSpec(sizes, ROW_BLOCKS))


def test_block_monotone_detects_violation():
    A = RationalMatrix([[2, 1]])
    assert not block_monotone(A, BlockSpec((1, 1)))


@pytest.mark.parametrize("sizes", SIZES)
def test_row_blocks_are_transpose(sizes):
    col = make_block_matrix(BlockSpec(sizes))
    row = make_block_matrix(BlockSpec(sizes, ROW_BLOCKS))
    assert row.rows == transpose(col).rows


@pytest.mark.parametrize("sizes", [(2, 1), (1, 1, 1)])
def test_row_block_dual_equals_column_primal(sizes):
    col = make_block_matrix(BlockSpec(sizes))
    row = make_block_matrix(BlockSpec(sizes, ROW_BLOCKS))
    for spec in (P, V):
        assert dimension(transpose(row), spec)[0] == dimension(col, spec)[0]


def test_lemma_5_3_shape():
    A = make_lemma_5_3(2, 2)
    assert A.shape == (8, 256)
    assert A.row_ids[4] == "blk2:row1"


def test_lemma_5_4_sizes():
    assert lemma_5_4_sizes(1) == (3,)
    assert lemma_5_4_sizes(2) == (2, 2)
    assert lemma_5_4_sizes(3) == (2, 1, 2)
    assert lemma_5_4_sizes(5) == (2, 1, 1, 1, 2)


def test_lemma_5_4_k1_is_b3_transpose():
    assert make_lemma_5_4(1).rows == transpose(make_b_d(3)).rows


def test_lemma_5_4_k3_shape():
    assert make_lemma_5_4(3).shape == (5, 32)


def test_merge_single_member_keeps_values():
    A = make_b_d(2)
    M = merge(MergeFamily(((1, A),)))
    assert M.rows == A.rows
    assert M.row_ids == tuple(f"k1:{r}" for r in A.row_ids)


def test_merge_two_members():
    fam = MergeFamily(((1, make_block_matrix(BlockSpec((1,)))),
                       (2, make_block_matrix(BlockSpec((1, 1))))))
    M = merge(fam)
    assert M.shape == (6, 3)
    block = restrict(M, M.row_ids[2:], M.col_ids[1:])
    assert {v for row in block.rows for v in row} == {F(0), F(1, 2), F(1)}
    off = restrict(M, M.row_ids[:2], M.col_ids[1:])
    assert all(v == 0 for row in off.rows for v in row)


@pytest.mark.parametrize("fam", [corollary_5_2_family(2, 3), lemma_5_4_family(3)],
                         ids=["blocks", "lemma54"])
def test_merge_diagonal_blocks_rescale(fam):
    M = merge(fam)
    for k, A in fam.members:
        I = [f"k{k}:{r}" for r in A.row_ids]
        J = [f"k{k}:{c}" for c in A.col_ids]
        block = restrict(M, I, J)
        assert tuple(tuple(v * k for v in row) for row in block.rows) == A.rows
    assert all(0 <= v <= 1 for row in M.rows for v in row)


def test_merge_family_validation():
    A = make_b_d(1)
    with pytest.raises(MatrixError):
        MergeFamily(())
    with pytest.raises(MatrixError):
        MergeFamily(((2, A),))
    with pytest.raises(MatrixError):
        MergeFamily(((1, RationalMatrix([[2]])),))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_all_ones_blocks_gap(k):
    A = make_block_matrix(BlockSpec((1,) * k))
    assert dimension(A, V)[0] == 1
    assert dimension(A, P)[0] == k


def test_merge_fat_dimension_below_the_boundary():
    # widths just under 1/(2k) recover k*d for the block family
    M = merge(corollary_5_2_family(2, 3))
    assert [dimension(M, P_gamma(F(1, 2 * k + 1)))[0] for k in (1, 2, 3)] == [2, 4, 6]
