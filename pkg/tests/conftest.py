from fractions import Fraction

import pytest

from ahlfors_maximal.measures import cantor_measure, quarter_cantor_measure, sum_measures

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def cantor():
    return cantor_measure()


@pytest.fixture(scope="session")
def quarter():
    return quarter_cantor_measure()


@pytest.fixture(scope="session")
def pair(cantor, quarter):
    return sum_measures([cantor, quarter])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
