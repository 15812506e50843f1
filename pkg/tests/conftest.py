import sys

import pytest

from helpers import fixture_text
from newton import compile_source


@pytest.fixture(scope="session")
def pendulum_source():
    return fixture_text("pendulum.newton")


@pytest.fixture(scope="session")
def pendulum_ir(pendulum_source):
    return compile_source(pendulum_source, "pendulum.newton")


@pytest.fixture(scope="session")
def speed_ir():
    return compile_source(fixture_text("distance_speed.newton"), "distance_speed.newton")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
