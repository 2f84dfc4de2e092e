import pytest
from hypothesis import settings

from drspace import derive_params

settings.register_profile("desk", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("desk")


@pytest.fixture(scope="session")
def s21():
    return derive_params(2, 1)


@pytest.fixture(scope="session")
def s43():
    return derive_params(4, 3)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
