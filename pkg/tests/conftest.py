import pytest

from superbracket.brackets import BracketStructure
from superbracket.exprio import parse_expression


@pytest.fixture
def B():
    """Desk table: q1 p1 q2 p2 | theta1 theta2 theta3, identity metric."""
    return BracketStructure.canonical(2, 3)


@pytest.fixture
def table(B):
    return B.table


@pytest.fixture
def P(table):
    return lambda text: parse_expression(text, table)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
