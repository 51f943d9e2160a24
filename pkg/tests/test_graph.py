import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings

from spectral_turan import graph as G
from spectral_turan.graph import Graph, GraphError, VertexSet

from conftest import graphs


def test_from_edge_list_examples():
    c5 = G.from_edge_list(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert c5.edge_count == 5 and c5 == G.cycle_graph(5)
    k4 = G.from_edge_list(4, itertools.combinations(range(4), 2))
    assert k4 == G.complete_graph(4)
    dup = G.from_edge_list(3, [(0, 1), (0, 1), (1, 0)])
    assert dup.edge_count == 1


@pytest.mark.parametrize("edges", [[(0, 5)], [(-1, 2)], [(2, 2)]])
def test_from_edge_list_errors(edges):
    with pytest.raises(GraphError):
        G.from_edge_list(5, edges)


def test_order_cap(monkeypatch):
    G.set_max_order(10)
    try:
        with pytest.raises(GraphError):
            G.empty_graph(11)
    finally:
        G.set_max_order(G.DEFAULT_MAX_ORDER)


def test_common_neighborhood_petersen():
    p = G.petersen_graph()
    sizes_adj = {G.common_neighborhood(p, [u, v]).size for u, v in p.edges()}
    assert sizes_adj == {0}
    nonadj = [(u, v) for u, v in itertools.combinations(range(10), 2) if not p.has_edge(u, v)]
    assert len(nonadj) == 30
    assert {G.common_neighborhood(p, [u, v]).size for u, v in nonadj} == {1}


def test_common_neighborhood_k23():
    k = G.complete_bipartite(2, 3)
    assert G.common_neighborhood(k, [0, 1]).to_list() == [2, 3, 4]


def test_common_neighborhood_empty_rejected():
    with pytest.raises(GraphError):
        G.common_neighborhood(G.complete_graph(3), [])


def test_induced_subgraph_examples():
    c5 = G.cycle_graph(5)
    assert G.induced_subgraph(c5, [1, 2, 3]) == G.path_graph(3)
    assert G.induced_subgraph(G.complete_graph(4), [0, 2, 3]) == G.complete_graph(3)
    p = G.petersen_graph()
    nb = G.induced_subgraph(p, p.neighbors(0))
    assert nb.n == 3 and nb.edge_count == 0


def test_complement_examples():
    assert G.complement(G.complete_graph(4)) == G.empty_graph(4)
    c5c = G.complement(G.cycle_graph(5))
    assert c5c.edge_count == 5 and all(d == 2 for d in c5c.degrees()) and c5c.is_connected()
    k33c = G.complement(G.complete_bipartite(3, 3))
    assert k33c.edge_count == 6 and len(k33c.components()) == 2


def test_vertexset():
    vs = VertexSet.of(6, [0, 2, 5])
    assert vs.size == 3 and list(vs) == [0, 2, 5] and 2 in vs and 1 not in vs
    with pytest.raises(GraphError):
        VertexSet.of(3, [4])


def test_families():
    assert G.petersen_graph().edge_count == 15
    h = G.heawood_graph()
    assert h.n == 14 and set(h.degrees()) == {3}
    assert G.kneser_graph(5, 2) == G.petersen_graph()
    for q in (2, 3, 5):
        g = G.pp_incidence(q)
        assert g.n == 2 * (q * q + q + 1)
        assert g.edge_count == (q * q + q + 1) * (q + 1)
    with pytest.raises(GraphError):
        G.pp_incidence(4)


@given(graphs())
def test_symmetry_and_handshake(g):
    a = g.adjacency_matrix()
    assert (a == a.T).all() and not np.diag(a).any()
    assert sum(g.degrees()) == 2 * g.edge_count
    assert int(a.sum()) == 2 * g.edge_count


@given(graphs())
def test_complement_involution(g):
    c = G.complement(g)
    assert G.complement(c) == g
    assert g.edge_count + c.edge_count == comb(g.n, 2)


@given(graphs(min_n=1))
def test_relabel_preserves_degrees(g):
    perm = list(reversed(range(g.n)))
    r = G.relabel(g, perm)
    assert sorted(r.degrees()) == sorted(g.degrees())
    assert r.edge_count == g.edge_count


def test_graph_is_immutable():
    g = G.complete_graph(3)
    with pytest.raises(Exception):
        g.n = 4
