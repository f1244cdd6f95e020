from fractions import Fraction

import pytest

from nashax.core import Game
from nashax.corpus import Corpus

F = Fraction


@pytest.fixture(scope="session")
def corpus():
    return Corpus()


def bimatrix(row, col):
    return Game.bimatrix(row, col)


@pytest.fixture
def matching_pennies():
    return bimatrix([[1, -1], [-1, 1]], [[-1, 1], [1, -1]])


@pytest.fixture
def prisoners_dilemma():
    # action 1 cooperates, action 2 defects
    return bimatrix([[3, 0], [4, 1]], [[3, 4], [0, 1]])


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERIA, VERDICTS
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, key, budget in CRITERIA:
        terminalreporter.write_line(VERDICTS.get(number, f"SKIP  criterion {number:2d}  {key}"))
