import random

import pytest

from gpm.graph import Graph


def random_graph(rng, n, p, labels=None):
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    lab = None
    if labels:
        lab = [rng.randrange(labels) for _ in range(n)]
    return Graph.from_edges(n, edges, labels=lab)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def k4():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def k5():
    return Graph.from_edges(5, [(a, b) for a in range(5) for b in range(a + 1, 5)])


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def diamond_graph():
    # edges 01, 02, 12, 13, 23: vertices 1 and 2 are the degree-3 chord ends
    return Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
