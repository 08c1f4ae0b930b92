import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from netsample.graph import Graph

# two triangles {0,1,2} and {3,4,5} bridged by the edge 2-3
TOY_EDGES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]


@pytest.fixture
def toy():
    return Graph.from_edges(6, TOY_EDGES)


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def star(leaves: int) -> Graph:
    """Center 0 with leaves 1..leaves."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def clique(n: int) -> Graph:
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)))


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, pairs)


def random_connected_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Random spanning tree plus G(n, p) edges."""
    order = rng.permutation(n).tolist()
    edges = {tuple(sorted((order[i], order[int(rng.integers(i))]))) for i in range(1, n)}
    edges |= {(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p}
    return Graph.from_edges(n, sorted(edges))


@st.composite
def graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def connected_graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    pairs = list(itertools.combinations(range(n), 2))
    extra = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n)) if pairs else []
    edges = {(p, i) for i, p in enumerate(parents, 1)} | set(extra)
    return Graph.from_edges(n, sorted(edges))


_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
