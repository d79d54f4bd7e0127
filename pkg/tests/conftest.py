import numpy as np
import pytest

from graphsumm.graph import Graph

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_small_graph(rng, n_min=4, n_max=30, density=None):
    """G(n, p) graph with at least one edge; isolated nodes allowed."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        p = density if density is not None else rng.uniform(0.08, 0.6)
        upper = np.triu(rng.random((n, n)) < p, k=1)
        edges = np.argwhere(upper)
        if len(edges):
            return Graph(n, edges)


def random_membership(rng, n, n_blocks=None):
    if n_blocks is None:
        n_blocks = int(rng.integers(1, n + 1))
    labels = rng.integers(0, n_blocks, size=n)
    # relabel to the first node of each block so ids look like engine survivors
    first = {}
    return np.array([first.setdefault(int(x), u) for u, x in enumerate(labels)])


def blocks_of(sg):
    return {a: list(m) for a, m in sg.members.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fig1():
    """Two supernodes {0,1} and {2,3,4,5} joined by 3 subedges, plus a third block."""
    edges = [(0, 5), (1, 2), (1, 5), (0, 1), (2, 3), (6, 7), (5, 6)]
    g = Graph.from_edges(edges, 8)
    membership = np.array([0, 0, 2, 2, 2, 2, 6, 6])
    return g, membership
