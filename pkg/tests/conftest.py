import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plapbounds.geometry import ConvexPolygon  # noqa: E402

from helpers import PENTAGON  # noqa: E402

# filled by tests/test_acceptance.py, one line per criterion
CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def square():
    return ConvexPolygon.unit_square()


@pytest.fixture
def right_triangle():
    return ConvexPolygon([(0, 0), (4, 0), (0, 3)])


@pytest.fixture
def hexagon():
    return ConvexPolygon.regular(6)


@pytest.fixture
def pentagon():
    return ConvexPolygon(PENTAGON)
