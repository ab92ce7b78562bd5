"""Generators for the extremal matrix families.

Row order of ``B_d`` is binary counting with the most significant bit in
the first column; every other construction is derived from it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import LabelError, MatrixError, SizeLimitError
from .matrix import ZERO_ROW_LABEL, Domain, RationalMatrix

MAX_D = 30

COLUMN_BLOCKS = "column-blocks"
ROW_BLOCKS = "row-blocks"


def _guard(D: int):
    if D > MAX_D:
        raise SizeLimitError(f"D = {D} exceeds the desk-scale limit {MAX_D}")


def make_b_d(d: int) -> RationalMatrix:
    """The 2**d x d matrix whose rows are all binary patterns."""
    if not isinstance(d, int) or d < 1:
        raise MatrixError(f"d must be a positive integer, got {d!r}")
    _guard(d)
    one, zero = Fraction(1), Fraction(0)
    rows = tuple(
        tuple(one if (i >> (d - 1 - j)) & 1 else zero for j in range(d)) for i in range(1 << d)
    )
    return RationalMatrix._trusted(
        rows,
        [f"row{i}" for i in range(1 << d)],
        [f"col{j + 1}" for j in range(d)],
        Domain.integer(1),
    )


@dataclass(frozen=True)
class BlockSpec:
    sizes: tuple[int, ...]
    orientation: str = COLUMN_BLOCKS

    def __post_init__(self):
        sizes = tuple(self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes or any(not isinstance(s, int) or s < 1 for s in sizes):
            raise MatrixError(f"block sizes must be positive integers, got {sizes!r}")
        if self.orientation not in (COLUMN_BLOCKS, ROW_BLOCKS):
            raise MatrixError(f"unknown orientation {self.orientation!r}")
        _guard(self.D)

    @property
    def D(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def block_of(self) -> list[int]:
        """1-based block number of each of the D positions."""
        return [b for b, size in enumerate(self.sizes, start=1) for _ in range(size)]


def make_block_matrix(spec: BlockSpec) -> RationalMatrix:
    """B_D with entries in block b mapped 1 -> b and 0 -> b-1.

    Column blocks partition the D columns of B_D; row blocks partition the D
    rows of its transpose.
    """
    D, k = spec.D, spec.k
    blocks = spec.block_of()
    vals = [Fraction(v) for v in range(k + 1)]
    lo = [vals[b - 1] for b in blocks]
    hi = [vals[b] for b in blocks]
    labels = []
    for b, size in enumerate(spec.sizes, start=1):
        labels += [f"blk{b}:{'col' if spec.orientation == COLUMN_BLOCKS else 'row'}{j}"
                   for j in range(1, size + 1)]
    n = 1 << D
    if spec.orientation == COLUMN_BLOCKS:
        rows = tuple(
            tuple(hi[j] if (i >> (D - 1 - j)) & 1 else lo[j] for j in range(D))
            for i in range(n)
        )
        return RationalMatrix._trusted(rows, [f"row{i}" for i in range(n)], labels, Domain.integer(k))
    rows = tuple(
        tuple(hi[j] if (i >> (D - 1 - j)) & 1 else lo[j] for i in range(n)) for j in range(D)
    )
    return RationalMatrix._trusted(rows, labels, [f"col{i}" for i in range(n)], Domain.integer(k))


def make_lemma_5_3(d: int, k: int) -> RationalMatrix:
    """Transpose-based matrix with k row blocks of size 2**d each.

    Expected: Pdim = d (also with a zero row), dual Vdim = 2**d, dual
    Pdim = k * 2**d, for d >= 2.
    """
    if d < 1 or k < 1:
        raise MatrixError("need d >= 1 and k >= 1")
    _guard(k * (1 << d))
    return make_block_matrix(BlockSpec((1 << d,) * k, ROW_BLOCKS))


def lemma_5_4_sizes(k: int) -> tuple[int, ...]:
    if k == 1:
        return (3,)
    return (2,) + (1,) * (k - 2) + (2,)


def make_lemma_5_4(k: int) -> RationalMatrix:
    """Row blocks of sizes (2, 1, ..., 1, 2); for k = 1 the transpose of B_3.

    Expected: Pdim = 1 (also with a zero row) and dual Pdim = k + 2.
    """
    if k < 1:
        raise MatrixError("need k >= 1")
    _guard(k + 2)
    return make_block_matrix(BlockSpec(lemma_5_4_sizes(k), ROW_BLOCKS))


@dataclass(frozen=True)
class MergeFamily:
    """Finite family (A_1, ..., A_K); A_k takes values in {0..k}."""

    members: tuple[tuple[int, RationalMatrix], ...]

    def __post_init__(self):
        members = tuple((int(k), A) for k, A in self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise MatrixError("merge family is empty")
        tags = [k for k, _ in members]
        if tags != list(range(1, len(tags) + 1)):
            raise MatrixError(f"scale tags must be 1..K in order, got {tags}")
        for k, A in members:
            for row in A.rows:
                for v in row:
                    if not (v.denominator == 1 and 0 <= v <= k):
                        raise MatrixError(f"member {k} has entry {v} outside {{0..{k}}}")

    @property
    def K(self) -> int:
        return len(self.members)


def merge(fam: MergeFamily) -> RationalMatrix:
    """Block-diagonal merge: block k holds A_k / k, everything else is 0."""
    row_ids, col_ids = [], []
    col_offset = []
    for k, A in fam.members:
        row_ids += [f"k{k}:{r}" for r in A.row_ids]
        col_offset.append(len(col_ids))
        col_ids += [f"k{k}:{c}" for c in A.col_ids]
    if len(set(row_ids)) != len(row_ids) or len(set(col_ids)) != len(col_ids):
        raise LabelError("label clash after namespacing")
    if set(row_ids) & set(col_ids):
        raise LabelError("row and column labels of a merge must be disjoint")
    ncols = len(col_ids)
    zero = Fraction(0)
    rows = []
    for (k, A), off in zip(fam.members, col_offset):
        scale = {}
        for row in A.rows:
            out = [zero] * ncols
            for j, v in enumerate(row):
                q = scale.get(v)
                if q is None:
                    q = scale[v] = v / k
                out[off + j] = q
            rows.append(tuple(out))
    return RationalMatrix._trusted(tuple(rows), row_ids, col_ids, Domain.unit())


def corollary_5_2_family(d: int, K: int) -> MergeFamily:
    """A_k = column-block matrix with k blocks of size d."""
    return MergeFamily(tuple((k, make_block_matrix(BlockSpec((d,) * k))) for k in range(1, K + 1)))


def lemma_5_3_family(d: int, K: int) -> MergeFamily:
    return MergeFamily(tuple((k, make_lemma_5_3(d, k)) for k in range(1, K + 1)))


def lemma_5_4_family(K: int) -> MergeFamily:
    return MergeFamily(tuple((k, make_lemma_5_4(k)) for k in range(1, K + 1)))


def block_monotone(A: RationalMatrix, spec: BlockSpec) -> bool:
    """Entries never decrease from a lower block to a higher one.

    For row blocks an augmented zero row counts as block 0.
    """
    blocks = spec.block_of()
    if spec.orientation == COLUMN_BLOCKS:
        lines = A.rows
    else:
        lines = list(zip(*A.rows))
        if A.shape[0] == spec.D + 1 and A.row_ids[0] == ZERO_ROW_LABEL:
            blocks = [0] + blocks
    if len(lines[0]) != len(blocks):
        raise MatrixError("matrix does not match block spec")
    for line in lines:
        top: dict[int, Fraction] = {}
        bottom: dict[int, Fraction] = {}
        for j in range(len(line)):
            b = blocks[j]
            v = line[j]
            top[b] = max(top.get(b, v), v)
            bottom[b] = min(bottom.get(b, v), v)
        ordered = sorted(top)
        for b1, b2 in zip(ordered, ordered[1:]):
            if top[b1] > bottom[b2]:
                return False
    return True


def distinctness_holds(A: RationalMatrix) -> bool:
    return len(set(A.rows)) == len(A.rows)


def general_balance_holds(A: RationalMatrix) -> bool:
    """Every pattern on every column subset occurs 2**(d - |S|) times."""
    n, d = A.shape
    if n != 1 << d:
        return False
    for size in range(1, d + 1):
        for S in combinations(range(d), size):
            counts = Counter(tuple(row[j] for j in S) for row in A.rows)
            if len(counts) != 1 << size or set(counts.values()) != {1 << (d - size)}:
                return False
    return True
