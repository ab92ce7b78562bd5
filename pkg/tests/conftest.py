import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from shatterdim import RationalMatrix, TriBoolMatrix  # noqa: E402

GRID = [Fraction(i, 4) for i in range(5)]

# criterion number -> list of (part, passed, detail)
_criteria: dict[int, list] = {}


def record_criterion(number: int, part: str, passed: bool, detail: str = "") -> None:
    _criteria.setdefault(number, []).append((part, passed, detail))
    print(f"criterion {number} [{part}]: {'PASS' if passed else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        parts = _criteria[number]
        ok = all(p for _, p, _ in parts)
        failed = "; ".join(f"{name}: {detail}" for name, p, detail in parts if not p)
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({failed})" if failed else ""))


@st.composite
def unit_matrices(draw, max_rows=6, max_cols=4, values=GRID):
    n = draw(st.integers(1, max_rows))
    m = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.sampled_from(values), min_size=m, max_size=m),
                         min_size=n, max_size=n))
    return RationalMatrix(rows)


@st.composite
def tribool_matrices(draw, max_rows=6, max_cols=4):
    n = draw(st.integers(1, max_rows))
    m = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.sampled_from([0, 1, "*"]), min_size=m, max_size=m),
                         min_size=n, max_size=n))
    return TriBoolMatrix(rows)


@pytest.fixture
def criterion():
    return record_criterion
