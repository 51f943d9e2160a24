import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import settings, strategies as st

from spectral_turan import graph as G
from spectral_turan.graph import Graph

settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")


@st.composite
def graphs(draw, min_n=0, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return G.from_edge_list(n, [p for p, k in zip(pairs, keep) if k])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def random_graph(n, p, rng):
    pairs = itertools.combinations(range(n), 2)
    return G.from_edge_list(n, [e for e in pairs if rng.random() < p])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def named():
    return {
        "petersen": G.petersen_graph(),
        "heawood": G.heawood_graph(),
        "c5": G.cycle_graph(5),
        "k4": G.complete_graph(4),
        "k33": G.complete_bipartite(3, 3),
        "k88": G.complete_bipartite(8, 8),
    }


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
