import itertools
from math import comb

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from networkx.algorithms import isomorphism as iso

from spectral_turan import graph as G
from spectral_turan.counting import (
    BudgetExceeded,
    PatternQuery,
    brute_independent_set_count,
    clique_number,
    count_c4,
    count_k2s,
    count_summary,
    count_triangles,
    edges_in_common_neighborhood,
    find_kst,
    find_pattern,
    independent_pair_degree_sum,
    independent_set_count,
    motzkin_straus_value,
    pair_binomial_sum,
    pair_degree_moment,
)

from conftest import graphs, random_graph, to_nx


def _nx_c4(g):
    return sum(1 for c in nx.simple_cycles(to_nx(g), length_bound=4) if len(c) == 4)


def test_c4_examples(named):
    assert count_c4(named["k4"]) == 3
    assert count_c4(named["k33"]) == 9
    assert count_c4(named["petersen"]) == 0


def test_triangle_examples(named):
    assert count_triangles(named["k4"]) == 4
    assert count_triangles(named["petersen"]) == 0
    assert count_triangles(named["c5"]) == 0


def test_clique_number_examples(named):
    assert clique_number(named["k4"]) == 4
    assert clique_number(named["petersen"]) == 2
    assert clique_number(named["k33"]) == 2
    assert clique_number(G.empty_graph(3)) == 1
    assert clique_number(G.empty_graph(0)) == 0


def test_independent_set_examples(named):
    assert independent_set_count(named["c5"], 2) == 5
    assert independent_set_count(named["petersen"], 3) == 30
    assert independent_set_count(named["k33"], 3) == 2


def test_pair_moment_examples(named):
    assert pair_degree_moment(named["petersen"], 2) == 30
    assert pair_degree_moment(named["c5"], 2) == 5
    assert pair_degree_moment(G.complete_bipartite(2, 3), 3) == 51


def test_k2s_examples(named):
    assert count_k2s(G.complete_bipartite(2, 3), 3) == 1
    assert count_k2s(named["petersen"], 3) == 0
    assert count_k2s(G.complete_graph(5), 3) == 10
    with pytest.raises(ValueError):
        count_k2s(named["k4"], 2)


def test_independent_pair_degree_sum_examples(named):
    assert independent_pair_degree_sum(named["k88"], 2) == 1568
    assert independent_pair_degree_sum(named["c5"], 2) == 0
    assert independent_pair_degree_sum(named["petersen"], 2) == 0


def test_edges_in_common_neighborhood_examples(named):
    assert edges_in_common_neighborhood(named["k4"], [0, 1]) == 1
    p = named["petersen"]
    assert all(edges_in_common_neighborhood(p, x) == 0 for x in itertools.combinations(range(10), 2))
    assert edges_in_common_neighborhood(named["k33"], [0, 1]) == 0


def test_motzkin_examples(named):
    assert motzkin_straus_value(G.complete_graph(3), np.full(3, 3 ** -0.5)) == pytest.approx(1 / 3)
    assert motzkin_straus_value(named["petersen"], np.full(10, 10 ** -0.5)) == pytest.approx(0.15)
    assert motzkin_straus_value(G.empty_graph(4), np.array([1.0, 0, 0, 0])) == 0
    with pytest.raises(ValueError):
        motzkin_straus_value(G.complete_graph(3), np.ones(3))
    with pytest.raises(ValueError):
        motzkin_straus_value(G.complete_graph(2), np.array([-(0.5 ** 0.5), 0.5 ** 0.5]))


def test_find_pattern_examples(named):
    hit = find_pattern(named["petersen"], PatternQuery(G.cycle_graph(5), "subgraph"))
    assert hit is not None
    p = named["petersen"]
    assert all(p.has_edge(hit[i], hit[(i + 1) % 5]) for i in range(5))
    assert find_pattern(p, PatternQuery(G.complete_bipartite(2, 2), "induced")) is None
    assert find_pattern(named["k33"], PatternQuery(G.complete_bipartite(2, 2), "induced")) is not None


def test_find_pattern_larger_than_host():
    assert find_pattern(G.complete_graph(3), PatternQuery(G.complete_graph(4))) is None


def test_budget_is_explicit():
    g = G.complete_bipartite(12, 12)
    with pytest.raises(BudgetExceeded):
        find_pattern(g, PatternQuery(G.complete_graph(3)), budget=50, method="generic")
    with pytest.raises(BudgetExceeded):
        independent_set_count(G.empty_graph(30), 5, budget=100)


def test_induced_witness_is_induced():
    g = G.complete_bipartite(3, 4)
    s, t = find_kst(g, 2, 3, induced=True)
    assert len(s) == 2 and len(t) == 3
    assert all(g.has_edge(a, b) for a in s for b in t)
    assert not any(g.has_edge(a, b) for a, b in itertools.combinations(s, 2))
    assert not any(g.has_edge(a, b) for a, b in itertools.combinations(t, 2))


@settings(max_examples=80)
@given(graphs(max_n=9))
def test_counts_match_networkx(g):
    h = to_nx(g)
    assert count_c4(g) == _nx_c4(g)
    assert count_triangles(g) == sum(nx.triangles(h).values()) // 3
    omega = max((len(c) for c in nx.find_cliques(h)), default=0)
    assert clique_number(g) == omega


@settings(max_examples=80)
@given(graphs(max_n=9))
def test_count_invariants(g):
    n, e = g.n, g.edge_count
    summ = count_summary(g, moments=(2,), sizes=(1, 2))
    assert pair_binomial_sum(g, 2) == 2 * summ.c4
    assert summ.is_counts[1] == n
    assert summ.is_counts[2] == comb(n, 2) - e
    assert (summ.omega >= 2) == (e >= 1)


def _pattern_oracle(g, p, induced):
    gm = iso.GraphMatcher(to_nx(g), to_nx(p))
    return gm.subgraph_is_isomorphic() if induced else gm.subgraph_is_monomorphic()


PATTERNS = [G.complete_bipartite(1, 2), G.complete_bipartite(2, 2), G.complete_bipartite(1, 3),
            G.complete_bipartite(2, 3), G.complete_graph(3), G.cycle_graph(5), G.path_graph(4)]


@settings(max_examples=60)
@given(graphs(max_n=8))
def test_find_pattern_matches_networkx(g):
    for p in PATTERNS:
        for induced in (False, True):
            q = PatternQuery(p, "induced" if induced else "subgraph")
            assert (find_pattern(g, q) is not None) == _pattern_oracle(g, p, induced)


@settings(max_examples=60)
@given(graphs(max_n=8))
def test_kst_specialised_agrees_with_generic(g):
    for s in (1, 2, 3):
        for t in range(s, 4):
            p = G.complete_bipartite(s, t)
            for mode in ("subgraph", "induced"):
                q = PatternQuery(p, mode)
                a = find_pattern(g, q, method="generic") is not None
                b = find_pattern(g, q, method="kst") is not None
                assert a == b


def _anchored_oracle(g, p, induced, u, v):
    gm = iso.GraphMatcher(to_nx(g), to_nx(p))
    maps = gm.subgraph_isomorphisms_iter() if induced else gm.subgraph_monomorphisms_iter()
    for m in maps:  # host vertex -> pattern vertex
        if u in m and v in m:
            if induced or not g.has_edge(u, v) or p.has_edge(m[u], m[v]):
                return True
    return False


@settings(max_examples=40)
@given(graphs(min_n=2, max_n=7))
def test_anchored_search_matches_oracle(g):
    u, v = 0, 1
    for p in (G.complete_graph(3), G.complete_bipartite(2, 2), G.cycle_graph(4), G.path_graph(3)):
        for induced in (False, True):
            if not induced and not g.has_edge(u, v):
                continue  # subgraph anchors are only used right after adding uv
            q = PatternQuery(p, "induced" if induced else "subgraph")
            hit = find_pattern(g, q, anchor=(u, v))
            assert (hit is not None) == _anchored_oracle(g, p, induced, u, v)
            if hit is not None:
                assert {u, v} <= set(hit.values())


def test_independent_sets_match_brute_force(rng):
    for trial in range(25):
        n = int(rng.integers(1, 13))
        g = random_graph(n, float(rng.random()), rng)
        for s in range(1, 5):
            assert independent_set_count(g, s) == brute_independent_set_count(g, s)
