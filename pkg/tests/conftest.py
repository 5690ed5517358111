from __future__ import annotations

import pytest
from helpers import ACCEPTANCE_LINES, compact_random
from hypothesis import HealthCheck, settings

from discfrac.grid import Grid, GridFunction

settings.register_profile(
    "repo",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def impulse():
    return GridFunction.impulse(Grid(1.0, -32, 8))


@pytest.fixture
def random_u():
    return compact_random()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
