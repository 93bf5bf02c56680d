from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rigidcore.graph import Graph  # noqa: E402


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(k: int) -> Graph:
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def disjoint(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for H in graphs:
        edges += [(u + off, v + off) for u, v in H.edges()]
        off += H.n
    return Graph.from_edges(off, edges)


def shuffle(G: Graph, seed: int) -> Graph:
    perm = list(range(G.n))
    random.Random(seed).shuffle(perm)
    return G.relabel(perm)


# triangle 0-1-2, pendant path of length 1 on 1 and of length 2 on 2
TRIANGLE_TAILS = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 4), (4, 5)])


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0][1:])):
            terminalreporter.write_line(line)
