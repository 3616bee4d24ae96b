import pytest

from cpaclab.harness import FiniteDistribution
from fractions import Fraction


@pytest.fixture
def three_atom():
    """Realizable three-atom distribution used across harness tests."""
    return FiniteDistribution(
        (((3, 1), Fraction(1, 2)), ((5, 0), Fraction(1, 4)), ((7, 1), Fraction(1, 4)))
    )


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one acceptance line; the test still asserts on its own."""

    def record(number, title, ok, detail=""):
        line = f"[criterion {number:>2}] {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
