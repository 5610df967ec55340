import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hsgcompress.groups import TOY_TABLE, FunctionTable, GroupSpec  # noqa: E402


@pytest.fixture
def toy():
    return TOY_TABLE


@pytest.fixture
def z2z2():
    return GroupSpec((2, 2))


@pytest.fixture
def z4():
    return GroupSpec((4,))


@pytest.fixture
def s10_table():
    return FunctionTable(2, 1, (0, 1, 0, 1))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion, then assert it."""

    def report(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
