import random

import pytest

from rackrs.field_tower import build_field

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def F16():
    return build_field(2, 4)


@pytest.fixture(scope="session")
def F64():
    return build_field(2, 6)


@pytest.fixture(scope="session")
def F9():
    return build_field(3, 2)


@pytest.fixture()
def rng():
    return random.Random(0xC0DE)
