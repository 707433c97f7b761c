import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    chains_side_by_side,
    diamond,
    diamond_with_inner,
    fan,
    trapped_minimal,
    vee,
)


@pytest.fixture
def diamond_d():
    return diamond()


@pytest.fixture
def inner_d():
    return diamond_with_inner()


@pytest.fixture
def vee_d():
    return vee()


@pytest.fixture
def fan_d():
    return fan()


@pytest.fixture
def trap_d():
    return trapped_minimal()


@pytest.fixture
def chains_d():
    return chains_side_by_side()


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
