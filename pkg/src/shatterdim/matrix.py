"""Exact rational matrices, {0,1,*} matrices, and the structural operations on them.

A matrix is the function class ``A: X x Y -> Z`` with rows ``X`` and columns
``Y``. Everything is stored as :class:`fractions.Fraction`; floats never enter.
Matrices are immutable once built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import LabelError, MatrixError, ParseError

STAR = "*"
ZERO_ROW_LABEL = "0"

RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def to_rational(value: RationalLike) -> Fraction:
    """Convert ``value`` to a Fraction, refusing anything inexact.

    Accepts ints, Fractions and strings of the form ``"p"`` or ``"p/q"``.
    Floats and decimal strings such as ``"0.1"`` are rejected.
    """
    if isinstance(value, bool):
        raise MatrixError(f"booleans are not rational entries: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            hint = " (write decimals as p/q, e.g. 1/10)" if "." in text else ""
            raise MatrixError(f"not an exact rational: {value!r}{hint}")
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise MatrixError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise MatrixError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Domain:
    """Declared value domain: the integer range ``{0..bound}`` or the unit interval."""

    kind: str
    bound: int | None = None

    @classmethod
    def integer(cls, k: int) -> "Domain":
        if k < 1:
            raise MatrixError(f"integer domain bound must be >= 1, got {k}")
        return cls("int", k)

    @classmethod
    def unit(cls) -> "Domain":
        return cls("unit")

    def contains(self, q: Fraction) -> bool:
        if self.kind == "int":
            return q.denominator == 1 and 0 <= q <= self.bound
        return 0 <= q <= 1

    def __str__(self) -> str:
        return f"k:{self.bound}" if self.kind == "int" else "unit"


def _check_labels(labels: Sequence[str], what: str) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        raise LabelError(f"duplicate {what} labels")
    return labels


class _LabelledMatrix:
    __slots__ = ("row_ids", "col_ids", "rows", "_row_index", "_col_index")

    def _init(self, rows, row_ids, col_ids):
        self.rows = rows
        self.row_ids = row_ids
        self.col_ids = col_ids
        self._row_index = {r: i for i, r in enumerate(row_ids)}
        self._col_index = {c: j for j, c in enumerate(col_ids)}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_ids), len(self.col_ids)

    def row_index(self, label: str) -> int:
        try:
            return self._row_index[label]
        except KeyError:
            raise LabelError(f"unknown row label {label!r}") from None

    def col_index(self, label: str) -> int:
        try:
            return self._col_index[label]
        except KeyError:
            raise LabelError(f"unknown column label {label!r}") from None

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def __getitem__(self, key: tuple[str, str]):
        r, c = key
        return self.rows[self.row_index(r)][self.col_index(c)]

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and self.row_ids == other.row_ids
            and self.col_ids == other.col_ids
            and self.rows == other.rows
            and getattr(self, "domain", None) == getattr(other, "domain", None)
        )

    def __hash__(self) -> int:
        return hash((self.row_ids, self.col_ids, self.rows))


def _normalize_shape(rows, row_ids, col_ids, default_row, default_col):
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise MatrixError("ragged rows: every row needs the same number of entries")
    if row_ids is None:
        row_ids = [default_row(i) for i in range(len(rows))]
    if col_ids is None:
        col_ids = [default_col(j) for j in range(ncols)]
    row_ids = _check_labels(row_ids, "row")
    col_ids = _check_labels(col_ids, "column")
    if len(row_ids) != len(rows) or len(col_ids) != ncols:
        raise MatrixError("label count does not match matrix shape")
    return row_ids, col_ids


class RationalMatrix(_LabelledMatrix):
    """Finite matrix of exact rationals with labelled rows and columns.

    Row and column labels live in separate namespaces. Duplicate rows or
    columns (as values) are allowed and kept.
    """

    __slots__ = ("domain",)

    def __init__(
        self,
        rows: Iterable[Iterable[RationalLike]],
        row_ids: Sequence[str] | None = None,
        col_ids: Sequence[str] | None = None,
        domain: Domain | None = None,
    ):
        cache: dict = {}

        def conv(v):
            if isinstance(v, bool):
                return to_rational(v)
            # share Fraction objects: constructions have very few distinct values
            try:
                return cache[v]
            except (KeyError, TypeError):
                q = to_rational(v)
                try:
                    cache[v] = q
                except TypeError:
                    pass
                return q

        data = tuple(tuple(conv(v) for v in r) for r in rows)
        row_ids, col_ids = _normalize_shape(
            data, row_ids, col_ids, lambda i: f"r{i}", lambda j: f"c{j}"
        )
        if domain is not None:
            for r, row in zip(row_ids, data):
                for c, v in zip(col_ids, row):
                    if not domain.contains(v):
                        raise MatrixError(
                            f"entry ({r}, {c}) = {format_rational(v)} outside domain {domain}"
                        )
        self.domain = domain
        self._init(data, row_ids, col_ids)

    @classmethod
    def _trusted(cls, rows, row_ids, col_ids, domain):
        obj = cls.__new__(cls)
        obj.domain = domain
        obj._init(rows, tuple(row_ids), tuple(col_ids))
        return obj

    def is_boolean(self) -> bool:
        return all(v == 0 or v == 1 for row in self.rows for v in row)

    def values(self) -> set[Fraction]:
        return {v for row in self.rows for v in row}

    def __repr__(self) -> str:
        return f"RationalMatrix({self.shape[0]}x{self.shape[1]}, domain={self.domain})"


class TriBoolMatrix(_LabelledMatrix):
    """Matrix over ``{0, 1, '*'}``; ``'*'`` matches neither label."""

    __slots__ = ()

    def __init__(
        self,
        rows: Iterable[Iterable[int | str]],
        row_ids: Sequence[str] | None = None,
        col_ids: Sequence[str] | None = None,
    ):
        data = []
        for r in rows:
            out = []
            for v in r:
                if v == STAR:
                    out.append(STAR)
                elif v in (0, 1) and not isinstance(v, str):
                    out.append(int(v))
                elif v in ("0", "1"):
                    out.append(int(v))
                else:
                    raise MatrixError(f"entry {v!r} is not one of 0, 1, *")
            data.append(tuple(out))
        data = tuple(data)
        row_ids, col_ids = _normalize_shape(
            data, row_ids, col_ids, lambda i: f"r{i}", lambda j: f"c{j}"
        )
        self._init(data, row_ids, col_ids)

    @classmethod
    def _trusted(cls, rows, row_ids, col_ids):
        obj = cls.__new__(cls)
        obj._init(rows, tuple(row_ids), tuple(col_ids))
        return obj

    @property
    def is_boolean(self) -> bool:
        return all(v != STAR for row in self.rows for v in row)

    def __repr__(self) -> str:
        return f"TriBoolMatrix({self.shape[0]}x{self.shape[1]})"


@dataclass(frozen=True)
class ThresholdAssignment:
    """Thresholds for turning a rational matrix into a {0,1,*} matrix.

    ``per_column`` maps column label -> threshold; otherwise ``uniform`` is
    applied everywhere. ``width`` is the margin gamma (0 for the sharp case).
    """

    per_column: Mapping[str, Fraction] | None = None
    uniform: Fraction | None = None
    width: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        if (self.per_column is None) == (self.uniform is None):
            raise MatrixError("give exactly one of per_column or uniform thresholds")
        object.__setattr__(self, "width", to_rational(self.width))
        if self.width < 0:
            raise MatrixError("threshold width must be >= 0")
        if self.uniform is not None:
            object.__setattr__(self, "uniform", to_rational(self.uniform))
        else:
            object.__setattr__(
                self,
                "per_column",
                {str(k): to_rational(v) for k, v in self.per_column.items()},
            )

    @property
    def kind(self) -> str:
        return "uniform" if self.uniform is not None else "per-column"

    def for_column(self, label: str) -> Fraction:
        if self.uniform is not None:
            return self.uniform
        try:
            return self.per_column[label]
        except KeyError:
            raise LabelError(f"no threshold for column {label!r}") from None

    def __hash__(self):
        per = None if self.per_column is None else tuple(sorted(self.per_column.items()))
        return hash((per, self.uniform, self.width))


def threshold_value(a: Fraction, t: Fraction, width: Fraction):
    """Label of a single entry: 1 if a >= t+width, 0 if a < t-width, else '*'.

    With width 0 the two cases are complementary and '*' never appears.
    """
    if a >= t + width:
        return 1
    if a < t - width:
        return 0
    return STAR


def transpose(A):
    cols = tuple(zip(*A.rows)) if A.rows else ()
    if isinstance(A, TriBoolMatrix):
        return TriBoolMatrix._trusted(cols, A.col_ids, A.row_ids)
    return RationalMatrix._trusted(cols, A.col_ids, A.row_ids, A.domain)


def restrict(A, I: Sequence[str], J: Sequence[str]):
    """Submatrix on rows ``I`` and columns ``J`` in the given order."""
    if not I or not J:
        raise MatrixError("restriction to an empty row or column set is undefined")
    ri = [A.row_index(r) for r in I]
    cj = [A.col_index(c) for c in J]
    rows = tuple(tuple(A.rows[i][j] for j in cj) for i in ri)
    if isinstance(A, TriBoolMatrix):
        return TriBoolMatrix._trusted(rows, I, J)
    return RationalMatrix._trusted(rows, I, J, A.domain)


def augment_zero_row(A: RationalMatrix) -> RationalMatrix:
    """Prepend an all-zeros row labelled ``"0"``."""
    if ZERO_ROW_LABEL in A._row_index:
        raise LabelError(f"row label {ZERO_ROW_LABEL!r} already present; cannot augment")
    zero = Fraction(0)
    domain = A.domain
    rows = ((zero,) * A.shape[1],) + A.rows
    return RationalMatrix._trusted(rows, (ZERO_ROW_LABEL,) + A.row_ids, A.col_ids, domain)


def threshold(A: RationalMatrix, t: ThresholdAssignment) -> TriBoolMatrix:
    ts = [t.for_column(c) for c in A.col_ids]
    w = t.width
    rows = tuple(
        tuple(threshold_value(a, tj, w) for a, tj in zip(row, ts)) for row in A.rows
    )
    return TriBoolMatrix._trusted(rows, A.row_ids, A.col_ids)


# -- text format -----------------------------------------------------------

_HEADER_RE = re.compile(r"^rows\s+(\d+)\s+cols\s+(\d+)\s+domain\s+(\S+)$")
_COLS_PREFIX = "#cols "


def _parse_domain(text: str, lineno: int) -> Domain | None:
    if text == "unit":
        return Domain.unit()
    if text == "any":
        return None
    if text.startswith("k:") and text[2:].isdigit():
        return Domain.integer(int(text[2:]))
    raise ParseError(f"bad domain {text!r}", lineno, 1)


def parse_matrix(text: str) -> RationalMatrix:
    """Parse the plain-text matrix format.

    ::

        # optional comments
        rows 2 cols 3 domain k:2
        0 1 2
        label: 2 1/2 0

    A ``#cols a b c`` comment line, if present, names the columns.
    """
    col_ids = None
    header = None
    rows, row_ids = [], []
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if raw.startswith(_COLS_PREFIX):
                col_ids = raw[len(_COLS_PREFIX):].split()
            continue
        if header is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise ParseError(
                    "expected header 'rows R cols C domain {k:<int>|unit}'", lineno, 1
                )
            header = (int(m.group(1)), int(m.group(2)), _parse_domain(m.group(3), lineno))
            continue
        tokens = line.split()
        label = None
        if tokens[0].endswith(":"):
            label = tokens[0][:-1]
            tokens = tokens[1:]
        nrows, ncols, _ = header
        if len(rows) >= nrows:
            raise ParseError(f"more than {nrows} data rows", lineno, 1)
        if len(tokens) != ncols:
            raise ParseError(f"expected {ncols} entries, found {len(tokens)}", lineno, 1)
        entries = []
        col = raw.find(tokens[0]) + 1 if tokens else 1
        for tok in tokens:
            col = raw.find(tok, col - 1) + 1
            try:
                value = to_rational(tok)
            except MatrixError as exc:
                raise ParseError(str(exc), lineno, col) from None
            if header[2] is not None and not header[2].contains(value):
                raise ParseError(f"entry {tok} outside domain {header[2]}", lineno, col)
            entries.append(value)
            col += len(tok)
        rows.append(entries)
        row_ids.append(label if label is not None else str(len(row_ids)))
    if header is None:
        raise ParseError("missing header line", len(lines) or 1, 1)
    nrows, ncols, domain = header
    if len(rows) != nrows:
        raise ParseError(f"expected {nrows} data rows, found {len(rows)}", len(lines), 1)
    if col_ids is None:
        col_ids = [str(j) for j in range(ncols)]
    if len(col_ids) != ncols:
        raise ParseError("#cols line does not match column count", 1, 1)
    try:
        return RationalMatrix(rows, row_ids, col_ids, domain)
    except MatrixError as exc:
        raise ParseError(str(exc), 1, 1) from None


def format_matrix(A: RationalMatrix, comments: Sequence[str] = ()) -> str:
    for label in A.row_ids + A.col_ids:
        if not label or any(ch.isspace() for ch in label):
            raise MatrixError(f"label {label!r} cannot be written in the text format")
    out = [f"# {c}" for c in comments]
    nrows, ncols = A.shape
    if A.col_ids != tuple(str(j) for j in range(ncols)):
        out.append(_COLS_PREFIX + " ".join(A.col_ids))
    domain = "any" if A.domain is None else str(A.domain)
    out.append(f"rows {nrows} cols {ncols} domain {domain}")
    default_labels = A.row_ids == tuple(str(i) for i in range(nrows))
    for label, row in zip(A.row_ids, A.rows):
        body = " ".join(format_rational(v) for v in row)
        out.append(body if default_labels else f"{label}: {body}")
    return "\n".join(out) + "\n"


def read_matrix(path) -> RationalMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(A: RationalMatrix, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(A, comments))
