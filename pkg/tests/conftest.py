import sys
from pathlib import Path

import pytest

from qscore.graph import Graph

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def k4():
    return Graph.complete(4)


@pytest.fixture
def c5():
    return Graph.cycle(5)


@pytest.fixture
def star4():
    # K_{1,4} with centre 0
    return Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: int(r[0].split()[1])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
