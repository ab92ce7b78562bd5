"""Shattering tests for a fixed column set.

Rows are deduplicated and encoded as bit positions; every (column, threshold)
pair becomes two Python-int masks, the rows labelled 1 and the rows labelled
0. Rows carrying '*' appear in neither. A set of columns is shattered by a
threshold tuple iff successively splitting the row set by each column's two
masks never produces an empty class.
"""

from __future__ import annotations

import enum
import time
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, SizeLimitError, SpecError
from .matrix import (
    STAR,
    RationalMatrix,
    ThresholdAssignment,
    TriBoolMatrix,
    to_rational,
    transpose,
)

MAX_SUBSET = 30


class Kind(enum.Enum):
    VC = "VC"
    P = "P"
    P_GAMMA = "P_gamma"
    V = "V"
    V_GAMMA = "V_gamma"

    @property
    def uniform(self) -> bool:
        return self in (Kind.V, Kind.V_GAMMA)

    @property
    def has_width(self) -> bool:
        return self in (Kind.P_GAMMA, Kind.V_GAMMA)


@dataclass(frozen=True)
class ShatterSpec:
    kind: Kind
    gamma: Fraction | None = None
    dual: bool = False

    def __post_init__(self):
        kind = self.kind if isinstance(self.kind, Kind) else Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind.has_width:
            if self.gamma is None:
                raise SpecError(f"{kind.value} needs a width gamma")
            gamma = to_rational(self.gamma)
            if gamma <= 0:
                raise SpecError(f"gamma must be > 0, got {gamma}")
            object.__setattr__(self, "gamma", gamma)
        elif self.gamma is not None:
            raise SpecError(f"{kind.value} takes no width")

    @property
    def width(self) -> Fraction:
        return self.gamma if self.gamma is not None else Fraction(0)

    def primal(self) -> "ShatterSpec":
        return ShatterSpec(self.kind, self.gamma, False)


VC = ShatterSpec(Kind.VC)
P = ShatterSpec(Kind.P)
V = ShatterSpec(Kind.V)


def P_gamma(gamma) -> ShatterSpec:
    return ShatterSpec(Kind.P_GAMMA, gamma)


def V_gamma(gamma) -> ShatterSpec:
    return ShatterSpec(Kind.V_GAMMA, gamma)


def _deadline_check(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded("search deadline exceeded")


# -- candidate thresholds -----------------------------------------------------


def _column_candidates(values, spec: ShatterSpec, domain=None, fast_path=False):
    if fast_path and domain is not None and domain.kind == "int" and not spec.kind.has_width:
        return [Fraction(t) for t in range(1, domain.bound + 1)]
    distinct = sorted(set(values))
    if spec.kind.has_width:
        return [a - spec.gamma for a in distinct]
    return distinct


def candidate_thresholds(
    A: RationalMatrix, y: str, spec: ShatterSpec, fast_path: bool = False
) -> list[Fraction]:
    """Finite threshold set that is complete for column ``y``.

    Any threshold that works can be raised until the smallest value labelled
    1 sits exactly at ``t + gamma``; that only enlarges both label sets, so
    the values ``a - gamma`` (``a`` ranging over the column) suffice.
    With ``fast_path`` and an integer domain ``{0..k}``, the sharp kinds use
    ``1..k`` instead.
    """
    if spec.kind is Kind.VC:
        raise SpecError("VC shattering uses no thresholds")
    j = A.col_index(y)
    return _column_candidates(A.column(j), spec, A.domain, fast_path)


# -- compiled form --------------------------------------------------------------


@dataclass
class Compiled:
    """Bitmask view of a matrix under one shattering kind.

    ``options[c]`` maps threshold -> (ones_mask, zeros_mask) over distinct
    rows, in candidate order. For VC the single key is ``None``.
    """

    spec: ShatterSpec
    nrows: int
    full: int
    options: list[dict]
    uniform_candidates: list | None
    row_reps: list[int]


def _dedup_rows(rows):
    seen: dict = {}
    reps = []
    index = []
    for i, row in enumerate(rows):
        k = seen.get(row)
        if k is None:
            k = seen[row] = len(reps)
            reps.append(i)
        index.append(k)
    return reps, index


def _masks_for(values_sorted, suffix_or, prefix_or, lo, hi):
    """Rows with value >= hi and rows with value < lo."""
    i_hi = bisect_left(values_sorted, hi)
    ones = suffix_or[i_hi]
    i_lo = bisect_left(values_sorted, lo)
    zeros = prefix_or[i_lo]
    return ones, zeros


def compile_matrix(A, spec: ShatterSpec, fast_path: bool = False) -> Compiled:
    if spec.dual:
        A = transpose(A)
        spec = spec.primal()
    reps, _ = _dedup_rows(A.rows)
    distinct = [A.rows[i] for i in reps]
    n = len(distinct)
    full = (1 << n) - 1
    ncols = A.shape[1]
    options: list[dict] = []

    if spec.kind is Kind.VC:
        if isinstance(A, RationalMatrix) and not A.is_boolean():
            raise SpecError("VC shattering needs a 0/1 matrix; threshold it first")
        for j in range(ncols):
            ones = zeros = 0
            for i, row in enumerate(distinct):
                v = row[j]
                if v == STAR:
                    continue
                if v == 1:
                    ones |= 1 << i
                else:
                    zeros |= 1 << i
            options.append({None: (ones, zeros)})
        return Compiled(spec, n, full, options, None, reps)

    if isinstance(A, TriBoolMatrix):
        raise SpecError(f"{spec.kind.value} shattering needs a rational matrix")

    w = spec.width
    per_col_values = []
    for j in range(ncols):
        by_value: dict = {}
        for i, row in enumerate(distinct):
            by_value[row[j]] = by_value.get(row[j], 0) | (1 << i)
        vals = sorted(by_value)
        masks = [by_value[v] for v in vals]
        suffix = [0] * (len(vals) + 1)
        for k in range(len(vals) - 1, -1, -1):
            suffix[k] = suffix[k + 1] | masks[k]
        prefix = [0] * (len(vals) + 1)
        for k in range(len(vals)):
            prefix[k + 1] = prefix[k] | masks[k]
        per_col_values.append((vals, suffix, prefix))

    uniform = None
    if spec.kind.uniform:
        cands = set()
        for j in range(ncols):
            cands.update(_column_candidates(per_col_values[j][0], spec, A.domain, fast_path))
        uniform = sorted(cands)
    for j in range(ncols):
        vals, suffix, prefix = per_col_values[j]
        cands = uniform if uniform is not None else _column_candidates(
            vals, spec, A.domain, fast_path
        )
        options.append({t: _masks_for(vals, suffix, prefix, t - w, t + w) for t in cands})
    return Compiled(spec, n, full, options, uniform, reps)


def useful_options(comp: Compiled, j: int, need: int) -> dict:
    """Thresholds for column ``j`` leaving at least ``need`` rows on each side."""
    return {
        t: m
        for t, m in comp.options[j].items()
        if m[0].bit_count() >= need and m[1].bit_count() >= need
    }


def initial_states(comp: Compiled):
    if comp.uniform_candidates is not None:
        return [((t,), (comp.full,)) for t in comp.uniform_candidates]
    return [((), (comp.full,))]


def extend_states(states, col_opts: dict, need: int, uniform: bool):
    """Split every class of every state by one more column.

    A state is (threshold tuple, classes); classes are ordered so that the
    class index, read in binary, is the label pattern (first column most
    significant). States whose split leaves a class with fewer than ``need``
    rows are dropped. Output order is lexicographic in the threshold tuples.
    """
    out = []
    for thr, classes in states:
        if uniform:
            m = col_opts.get(thr[0])
            items = () if m is None else ((None, m),)
        else:
            items = col_opts.items()
        for t, (ones, zeros) in items:
            new = []
            for cl in classes:
                z = cl & zeros
                if z.bit_count() < need:
                    break
                o = cl & ones
                if o.bit_count() < need:
                    break
                new.append(z)
                new.append(o)
            else:
                out.append((thr if uniform else thr + (t,), tuple(new)))
    return out


def search_fixed(comp: Compiled, cols: Sequence[int], deadline=None):
    """First threshold tuple (lexicographic) shattering ``cols``, or None."""
    s = len(cols)
    if s > MAX_SUBSET:
        raise SizeLimitError(f"|J| = {s} exceeds the limit of {MAX_SUBSET}")
    if (1 << s) > comp.nrows:
        return None
    states = initial_states(comp)
    uniform = comp.uniform_candidates is not None
    for depth, c in enumerate(cols):
        _deadline_check(deadline)
        need = 1 << (s - depth - 1)
        states = extend_states(states, comp.options[c], need, uniform)
        if not states:
            return None
    return states[0]


# -- public operations ---------------------------------------------------------


def _col_indices(M, J) -> list[int]:
    if not J:
        raise SpecError("column set J must be nonempty")
    idx = [M.col_index(c) for c in J]
    if len(set(idx)) != len(idx):
        raise SpecError("column set J has repeated labels")
    if len(idx) > MAX_SUBSET:
        raise SizeLimitError(f"|J| = {len(idx)} exceeds the limit of {MAX_SUBSET}")
    return idx


def realized_patterns(B: TriBoolMatrix, J: Sequence[str]) -> set[tuple[int, ...]]:
    """All 0/1 patterns on ``J`` matched by some row (a '*' matches nothing)."""
    idx = _col_indices(B, J)
    out = set()
    for row in B.rows:
        pat = tuple(row[j] for j in idx)
        if STAR not in pat:
            out.add(pat)
    return out


def is_vc_shattered(B, J: Sequence[str]) -> bool:
    if isinstance(B, RationalMatrix):
        if not B.is_boolean():
            raise SpecError("VC shattering needs a 0/1 matrix")
        B = TriBoolMatrix._trusted(
            tuple(tuple(int(v) for v in r) for r in B.rows), B.row_ids, B.col_ids
        )
    return len(realized_patterns(B, J)) == 1 << len(J)


def is_shattered(
    A: RationalMatrix,
    J: Sequence[str],
    spec: ShatterSpec,
    fast_path: bool = False,
    deadline=None,
) -> tuple[bool, ThresholdAssignment | None]:
    """Decide whether ``J`` is shattered; return the first working thresholds."""
    if spec.kind is Kind.VC:
        raise SpecError("use is_vc_shattered for VC shattering")
    if spec.dual:
        A = transpose(A)
        spec = spec.primal()
    idx = _col_indices(A, J)
    comp = compile_matrix(A, spec, fast_path)
    found = search_fixed(comp, idx, deadline)
    if found is None:
        return False, None
    return True, make_assignment(spec, [A.col_ids[j] for j in idx], found[0])


def make_assignment(spec: ShatterSpec, labels, thr) -> ThresholdAssignment | None:
    if spec.kind is Kind.VC:
        return None
    if spec.kind.uniform:
        return ThresholdAssignment(uniform=thr[0], width=spec.width)
    return ThresholdAssignment(per_column=dict(zip(labels, thr)), width=spec.width)
