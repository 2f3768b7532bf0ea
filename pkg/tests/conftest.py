import sys
from pathlib import Path

import pytest
from hypothesis import settings

from radialweyl import build_root_system

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_SYSTEMS = {}


def root_system(name):
    if name not in _SYSTEMS:
        _SYSTEMS[name] = build_root_system(name)
    return _SYSTEMS[name]


@pytest.fixture(scope="session")
def rs_of():
    return root_system


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
