import sys
from pathlib import Path

import pytest

from sumcodes import ElementSet, make_graph, make_group

sys.path.insert(0, str(Path(__file__).parent))

Z4Z4_S = [(0, 1), (1, 1), (1, 3), (3, 2)]
Z4Z4_C = [(0, 1), (1, 2), (2, 3), (3, 0)]
Z3Z6_S = [(0, 3), (0, 1), (1, 1)]
Z3Z6_C = [(0, 0), (0, 1), (1, 2), (1, 3), (2, 4), (2, 5)]


def cyc(n, members):
    G = make_group([n])
    return G, ElementSet.of(G, members)


def graph_of(moduli, S):
    G = make_group(moduli)
    return make_graph(G, ElementSet.of(G, S))


@pytest.fixture
def z4z4():
    G = make_group([4, 4])
    return G, ElementSet.of(G, Z4Z4_S), ElementSet.of(G, Z4Z4_C)


@pytest.fixture
def z3z6():
    G = make_group([3, 6])
    return G, ElementSet.of(G, Z3Z6_S), ElementSet.of(G, Z3Z6_C)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
