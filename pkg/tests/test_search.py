import itertools
import math

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms import isomorphism as iso

from spectral_turan import graph as G
from spectral_turan import search as S
from spectral_turan.counting import count_c4
from spectral_turan.bounds import nikiforov_kst_bound
from spectral_turan.io import parse_graph6
from spectral_turan.search import ConstraintSet, Schedule, local_search

from conftest import to_nx

K3 = G.complete_graph(3)
C4 = G.cycle_graph(4)
C5 = G.cycle_graph(5)


def _nx_free(h, pats, induced_pats):
    for p in pats:
        if iso.GraphMatcher(h, to_nx(p)).subgraph_is_monomorphic():
            return False
    for p in induced_pats:
        if iso.GraphMatcher(h, to_nx(p)).subgraph_is_isomorphic():
            return False
    return True


def _nx_optimum(n, pats=(), induced_pats=()):
    """Largest lambda over feasible labelled graphs, via networkx matchers."""
    pairs = list(itertools.combinations(range(n), 2))
    best = -1.0
    for bits in range(1 << len(pairs)):
        h = nx.Graph()
        h.add_nodes_from(range(n))
        h.add_edges_from(p for k, p in enumerate(pairs) if bits >> k & 1)
        if not _nx_free(h, pats, induced_pats):
            continue
        lam = float(np.linalg.eigvalsh(nx.to_numpy_array(h))[-1]) if n else 0.0
        best = max(best, lam)
    return best


def test_constraint_json_roundtrip():
    c = ConstraintSet([K3], [(2, 2)], [C5])
    back = ConstraintSet.from_json(c.to_json())
    assert back.to_json() == c.to_json()
    named = ConstraintSet.from_json([{"type": "subgraph", "name": "c5"}])
    assert named.forbidden_subgraphs[0] == C5
    with pytest.raises(ValueError):
        ConstraintSet.from_json([{"type": "bogus"}])
    with pytest.raises(ValueError):
        ConstraintSet.from_json([{"type": "induced_kst", "s": 0, "t": 2}])


def test_violation_anchor():
    c = ConstraintSet([K3])
    g = G.from_edge_list(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert c.violation(g) is not None
    assert c.violation(g, anchor=(2, 3)) is None
    assert c.violation(g, anchor=(0, 1)) is not None
    # removals never create a subgraph copy
    assert c.violation(g, anchor=(0, 1), added=False) is None


def test_schedule_rejects_unknown():
    with pytest.raises(ValueError):
        Schedule.from_dict({"temperature": 1})
    assert Schedule.from_dict({"tabu": 3}).tabu == 3


def test_search_validation():
    with pytest.raises(ValueError):
        local_search(1, ConstraintSet())
    with pytest.raises(ValueError):
        local_search(5, ConstraintSet(), budget=0)
    with pytest.raises(ValueError):
        local_search(5, ConstraintSet([G.empty_graph(2)]))  # edgeless graph infeasible


def test_search_determinism():
    c = ConstraintSet([K3], [(2, 2)])
    a = local_search(8, c, budget=3000, seed=5, restarts=3)
    b = local_search(8, c, budget=3000, seed=5, restarts=3)
    assert a.to_json() == b.to_json()
    assert c.satisfied(a.best)
    assert a.best_lambda == pytest.approx(np.linalg.eigvalsh(a.best.adjacency_matrix(float))[-1])


def test_search_unconstrained_finds_complete():
    rec = local_search(8, ConstraintSet(), budget=20000, seed=0, restarts=2)
    assert rec.best == G.complete_graph(8)
    assert rec.best_lambda == pytest.approx(7.0)


def test_search_progress_callback():
    seen = []
    local_search(6, ConstraintSet([K3]), budget=500, seed=1, restarts=1,
                 progress=lambda step, lam: seen.append((step, lam)), log_every=100)
    assert [s for s, _ in seen] == [100, 200, 300, 400, 500]
    assert all(b >= a for (_, a), (_, b) in zip(seen, seen[1:]))


def test_search_power_route_large_n():
    # n above dense_below exercises the warm-start power iteration
    sched = {"dense_below": 4, "refresh_every": 50}
    rec = local_search(12, ConstraintSet([K3]), budget=2000, seed=2, restarts=2, schedule=sched)
    assert ConstraintSet([K3]).satisfied(rec.best)
    assert rec.best_lambda == pytest.approx(
        np.linalg.eigvalsh(rec.best.adjacency_matrix(float))[-1], abs=1e-9)


@pytest.mark.parametrize("pats,induced,n,expected", [
    ([K3], [], 5, math.sqrt(6)),
    ([], [], 4, 3.0),
    ([C4], [], 5, None),
    ([C5], [G.complete_bipartite(2, 2)], 5, None),
])
def test_exhaustive_against_networkx(pats, induced, n, expected):
    c = ConstraintSet(list(pats), [], list(induced))
    got = S.exhaustive_scan(n, c, n_min=n)[0]
    oracle = _nx_optimum(n, pats, induced)
    assert got["best_lambda"] == pytest.approx(oracle, abs=1e-9)
    if expected is not None:
        assert got["best_lambda"] == pytest.approx(expected, abs=1e-9)
    g = parse_graph6(got["best_graph6"])
    assert c.satisfied(g)


def test_exhaustive_verify_inequalities():
    out = S.exhaustive_scan(5, ConstraintSet([C5]), "verify_inequalities",
                            checks=["c5pair", "prop1"], n_min=5)
    assert out[0]["scanned"] == 1024 and out[0]["total_violations"] == 0
    assert out[0]["applicable"]["c5pair"] == out[0]["applicable"]["prop1"]
    with pytest.raises(ValueError):
        S.exhaustive_scan(5, None, "verify_inequalities", checks=["nope"])
    with pytest.raises(ValueError):
        S.exhaustive_scan(8)


@pytest.mark.parametrize("pats", [[K3], [C4]])
def test_search_matches_exhaustive_small(pats):
    c = ConstraintSet(pats)
    for n in (4, 5):
        opt = S.exhaustive_scan(n, c, n_min=n)[0]["best_lambda"]
        rec = local_search(n, c, budget=4000, seed=3, restarts=4)
        assert rec.best_lambda == pytest.approx(opt, abs=1e-9)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_pp_incidence_construction(q):
    g = S.construct("pp_incidence", q=q)
    assert count_c4(g) == 0
    lam = float(np.linalg.eigvalsh(g.adjacency_matrix(float))[-1])
    assert lam == pytest.approx(q + 1, abs=1e-8)
    assert lam <= nikiforov_kst_bound(2, 2, g.n)


def test_construct_families():
    assert S.construct("petersen") == G.petersen_graph()
    assert S.girth(S.construct("petersen")) == 5
    assert S.girth(S.construct("pp_incidence", q=2)) == 6
    assert S.girth(G.path_graph(4)) == math.inf
    k = S.construct("kneser", m=5, k=2)
    assert nx.is_isomorphic(to_nx(k), nx.petersen_graph())
    with pytest.raises(ValueError):
        S.construct("moebius", n=8)


def test_record_shape():
    rec = local_search(5, ConstraintSet([K3]), budget=200, seed=0, restarts=1)
    d = rec.to_dict()
    assert d["kind"] == "search_record" and d["n"] == 5
    assert parse_graph6(d["best_graph6"]) == rec.best
    assert d["edges"] == rec.best.edge_count
