"""Combinatorial dimensions by pruned subset search, plus witnesses.

The search tries sizes s = 1, 2, ... and stops at the first size with no
shattered set. For a fixed target s, a column enters only with thresholds
leaving at least 2**(s-1) rows on each side, and after the j-th column every
pattern class must still hold at least 2**(s-j) rows. Column subsets are
visited in lexicographic order, threshold tuples lexicographically within a
subset, so the reported witness does not depend on scheduling.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import MalformedWitness, MatrixError, SizeLimitError, SpecError
from .matrix import (
    STAR,
    RationalMatrix,
    ThresholdAssignment,
    TriBoolMatrix,
    format_rational,
    threshold,
    threshold_value,
    to_rational,
    transpose,
)
from .shattering import (
    MAX_SUBSET,
    Compiled,
    Kind,
    ShatterSpec,
    _deadline_check,
    compile_matrix,
    extend_states,
    initial_states,
    make_assignment,
    useful_options,
)

# below this many usable columns a process pool costs more than it saves
_PARALLEL_MIN_COLUMNS = 48


@dataclass(frozen=True)
class Witness:
    """Certificate ``(I, J, thresholds)`` for ``dim >= len(J)``.

    ``I[p]`` is the row realizing pattern ``p`` (binary, first column of J
    most significant). For a dual spec the labels refer to the transpose.
    """

    I: tuple[str, ...]
    J: tuple[str, ...]
    thresholds: ThresholdAssignment | None
    spec: ShatterSpec

    @property
    def size(self) -> int:
        return len(self.J)

    def to_dict(self) -> dict:
        spec = {
            "kind": self.spec.kind.value,
            "gamma": None if self.spec.gamma is None else format_rational(self.spec.gamma),
            "dual": self.spec.dual,
        }
        thr = None
        if self.thresholds is not None:
            if self.thresholds.kind == "uniform":
                values = format_rational(self.thresholds.uniform)
            else:
                values = {
                    label: format_rational(self.thresholds.per_column[label]) for label in self.J
                }
            thr = {"kind": self.thresholds.kind, "values": values}
        return {"spec": spec, "J": list(self.J), "I": list(self.I), "thresholds": thr}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Witness":
        try:
            s = data["spec"]
            spec = ShatterSpec(Kind(s["kind"]), s.get("gamma"), bool(s.get("dual", False)))
            thr = data.get("thresholds")
            assignment = None
            if thr is not None:
                if thr["kind"] == "uniform":
                    assignment = ThresholdAssignment(uniform=thr["values"], width=spec.width)
                elif thr["kind"] == "per-column":
                    assignment = ThresholdAssignment(per_column=thr["values"], width=spec.width)
                else:
                    raise MalformedWitness(f"unknown threshold kind {thr['kind']!r}")
            return cls(tuple(data["I"]), tuple(data["J"]), assignment, spec)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedWitness):
                raise
            raise MalformedWitness(f"malformed witness: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "Witness":
        return cls.from_dict(json.loads(text))


def _search_size(comp: Compiled, s: int, deadline=None, first=None):
    """Lexicographically first (columns, state) shattering ``s`` columns."""
    need0 = 1 << (s - 1)
    usable = []
    for j in range(len(comp.options)):
        opts = useful_options(comp, j, need0)
        if opts:
            usable.append((j, opts))
    if len(usable) < s:
        return None
    uniform = comp.uniform_candidates is not None
    start_states = initial_states(comp)

    def rec(start, stop, depth, states, chosen):
        need = 1 << (s - depth - 1)
        for idx in range(start, min(stop, len(usable) - (s - depth) + 1)):
            _deadline_check(deadline)
            j, opts = usable[idx]
            new = extend_states(states, opts, need, uniform)
            if not new:
                continue
            if depth + 1 == s:
                return chosen + [j], new[0]
            found = rec(idx + 1, len(usable), depth + 1, new, chosen + [j])
            if found:
                return found
        return None

    if first is not None:
        return rec(first, first + 1, 0, start_states, [])
    return rec(0, len(usable), 0, start_states, [])


def _search_first_column(args):
    comp, s, idx = args
    return _search_size(comp, s, None, first=idx)


def _search_size_parallel(comp: Compiled, s: int, workers: int):
    need0 = 1 << (s - 1)
    n_usable = sum(1 for j in range(len(comp.options)) if useful_options(comp, j, need0))
    if n_usable < s:
        return None
    tasks = [(comp, s, i) for i in range(n_usable - s + 1)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_search_first_column, tasks))
    # lexicographic minimum == first hit in task order
    for r in results:
        if r is not None:
            return r
    return None


def _upper_bound(comp: Compiled) -> int:
    return min(len(comp.options), comp.nrows.bit_length() - 1 if comp.nrows else 0)


def _build_witness(M, spec: ShatterSpec, cols, thr) -> Witness:
    """Pick, for every pattern, the first row (in row order) realizing it."""
    labels = [M.col_ids[j] for j in cols]
    assignment = make_assignment(spec.primal(), labels, thr)
    s = len(cols)
    chosen: list[str | None] = [None] * (1 << s)
    for label, row in zip(M.row_ids, M.rows):
        p = 0
        for j in cols:
            if assignment is None:
                bit = row[j] if row[j] == STAR else int(row[j])
            else:
                bit = threshold_value(row[j], assignment.for_column(M.col_ids[j]), spec.width)
            if bit not in (0, 1):
                break
            p = (p << 1) | bit
        else:
            if chosen[p] is None:
                chosen[p] = label
    assert None not in chosen
    return Witness(tuple(chosen), tuple(labels), assignment, spec)


def dimension(
    A,
    spec: ShatterSpec,
    *,
    fast_path: bool = False,
    deadline: float | None = None,
    workers: int = 1,
) -> tuple[int, Witness | None]:
    """Size of a largest shattered column set, with a witness (None for 0).

    ``A`` is a RationalMatrix, or a TriBoolMatrix for ``Kind.VC``. With
    ``spec.dual`` the search runs on the transpose and the witness is stated
    in terms of ``A``'s rows.
    """
    if A.shape[0] == 0 or A.shape[1] == 0:
        raise MatrixError("dimension of an empty matrix is undefined")
    M = transpose(A) if spec.dual else A
    comp = compile_matrix(M, spec.primal(), fast_path)
    ub = _upper_bound(comp)
    best = None
    s = 1
    while s <= ub:
        if s > MAX_SUBSET:
            raise SizeLimitError(f"candidate subset size {s} exceeds {MAX_SUBSET}")
        if workers > 1 and len(comp.options) >= _PARALLEL_MIN_COLUMNS:
            _deadline_check(deadline)
            found = _search_size_parallel(comp, s, workers)
        else:
            found = _search_size(comp, s, deadline)
        if found is None:
            break
        best = found
        s += 1
    if best is None:
        return 0, None
    cols, (thr, _classes) = best
    return len(cols), _build_witness(M, spec, cols, thr)


def dual_dimension(A, spec: ShatterSpec, **kw) -> tuple[int, Witness | None]:
    return dimension(A, ShatterSpec(spec.kind, spec.gamma, True), **kw)


def verify_witness(A, w: Witness) -> bool:
    """Check a certificate independently of how it was produced.

    Raises MalformedWitness on shape errors; returns False when the
    certificate is well-formed but wrong.
    """
    M = transpose(A) if w.spec.dual else A
    d = len(w.J)
    if d == 0 or len(w.I) != 1 << d:
        raise MalformedWitness(f"|I| = {len(w.I)} but |J| = {d} needs |I| = {1 << d}")
    if len(set(w.J)) != d or len(set(w.I)) != len(w.I):
        raise MalformedWitness("repeated labels in witness")
    if (w.thresholds is None) != (w.spec.kind is Kind.VC):
        raise MalformedWitness("thresholds must be present exactly for non-VC kinds")
    if w.thresholds is not None:
        if w.thresholds.kind == "uniform" and not w.spec.kind.uniform:
            raise MalformedWitness("uniform threshold given for a per-column kind")
        if w.thresholds.kind == "per-column" and w.spec.kind.uniform:
            raise MalformedWitness("per-column thresholds given for a uniform kind")
        if w.thresholds.width != w.spec.width:
            raise MalformedWitness("threshold width does not match spec")
    ri = [M.row_index(r) for r in w.I]
    cj = [M.col_index(c) for c in w.J]
    seen = set()
    for i in ri:
        row = M.rows[i]
        pat = []
        for j, label in zip(cj, w.J):
            if w.thresholds is None:
                v = row[j]
                if isinstance(v, Fraction) and v not in (0, 1):
                    return False
                bit = v if v in (0, 1) else None
            else:
                bit = threshold_value(row[j], w.thresholds.for_column(label), w.spec.width)
            if bit not in (0, 1):
                return False
            pat.append(int(bit))
        seen.add(tuple(pat))
    return len(seen) == 1 << d


def balance_upper_bound(A: RationalMatrix, spec: ShatterSpec) -> int:
    """Cheap upper bound on a per-column dimension from the balance condition.

    A shattered set of size d+1 needs d+1 columns, each with a threshold
    leaving at least 2**d rows on both sides. Returns the least d for which
    fewer than d+1 such columns exist.
    """
    M = transpose(A) if spec.dual else A
    comp = compile_matrix(M, spec.primal())
    d = 0
    while True:
        need = 1 << d
        count = sum(1 for j in range(len(comp.options)) if useful_options(comp, j, need))
        if count <= d:
            return d
        d += 1


@dataclass(frozen=True)
class PsiFamily:
    """Entrywise substitutions: sharp thresholds, or width thresholds with gamma."""

    kind: str
    gamma: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("sharp", "width"):
            raise SpecError(f"unknown substitution family {self.kind!r}")
        if self.kind == "width":
            if self.gamma is None or to_rational(self.gamma) <= 0:
                raise SpecError("width family needs gamma > 0")
            object.__setattr__(self, "gamma", to_rational(self.gamma))
        elif self.gamma is not None:
            raise SpecError("sharp family takes no gamma")

    @property
    def width(self) -> Fraction:
        return self.gamma if self.gamma is not None else Fraction(0)

    def parameters(self, A: RationalMatrix) -> list[Fraction]:
        """Finite set of threshold parameters that is complete for ``A``."""
        return sorted({a - self.width for row in A.rows for a in row})

    def apply(self, A: RationalMatrix, t: Fraction) -> TriBoolMatrix:
        return threshold(A, ThresholdAssignment(uniform=t, width=self.width))


def psi_dimension(A: RationalMatrix, fam: PsiFamily, uniform: bool, **kw) -> int:
    """Largest VC dimension of ``fam`` applied to ``A``.

    Uniform: one substitution for the whole matrix, each materialized and
    measured. Non-uniform: a substitution per column, which is exactly
    per-column thresholding and goes through the shattering search.
    """
    if not uniform:
        spec = ShatterSpec(Kind.P_GAMMA, fam.gamma) if fam.kind == "width" else ShatterSpec(Kind.P)
        return dimension(A, spec, **kw)[0]
    best = 0
    for t in fam.parameters(A):
        d, _ = dimension(fam.apply(A, t), ShatterSpec(Kind.VC), **kw)
        best = max(best, d)
    return best


def default_workers() -> int:
    return os.cpu_count() or 1
