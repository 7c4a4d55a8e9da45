import random

import pytest

from typereg import bundled
from typereg.games import NormalFormGame

ACCEPTANCE_LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def markets():
    return bundled.markets_multigame()


@pytest.fixture
def pd_dg():
    return bundled.pd_double_game()


@pytest.fixture
def trust():
    return bundled.trust_double_game()


@pytest.fixture
def matching_pennies():
    return NormalFormGame.bimatrix([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])


@pytest.fixture
def prisoners():
    return NormalFormGame.bimatrix([[(3, 3), (0, 5)], [(5, 0), (1, 1)]])


