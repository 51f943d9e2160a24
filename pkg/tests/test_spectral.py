import math

import numpy as np
import pytest
from hypothesis import given, settings

from spectral_turan import graph as G
from spectral_turan.counting import count_triangles
from spectral_turan.spectral import (
    ConvergenceError,
    closed_walks_4,
    full_spectrum,
    hofmeister_margin,
    power_iteration,
    spectral_radius,
    symmetric_eigenvalues,
)

from conftest import graphs


@pytest.mark.parametrize("name,expected", [("k88", 8.0), ("c5", 2.0), ("petersen", 3.0),
                                           ("heawood", 3.0), ("k4", 3.0)])
@pytest.mark.parametrize("mode", ["dense_full", "power_iteration"])
def test_spectral_radius_examples(named, name, expected, mode):
    s = spectral_radius(named[name], mode=mode)
    assert abs(s.lam - expected) <= 1e-8
    assert s.residual <= 1e-8 * max(1, s.lam)
    assert (s.perron > 0).all()
    assert abs(np.linalg.norm(s.perron) - 1) < 1e-12


def test_full_spectrum_examples():
    ev = full_spectrum(G.complete_bipartite(3, 3)).eigenvalues
    assert np.allclose(ev, [3, 0, 0, 0, 0, -3], atol=1e-10)
    ev = full_spectrum(G.cycle_graph(5)).eigenvalues
    ref = sorted((2 * math.cos(2 * math.pi * k / 5) for k in range(5)), reverse=True)
    assert np.allclose(ev, ref, atol=1e-10)
    assert np.allclose(full_spectrum(G.complete_graph(4)).eigenvalues, [3, -1, -1, -1], atol=1e-10)


def test_closed_walks_examples():
    assert closed_walks_4(G.complete_graph(3)) == 18
    assert closed_walks_4(G.cycle_graph(5)) == 30
    assert closed_walks_4(G.complete_bipartite(3, 3)) == 162


def test_hofmeister_examples():
    assert abs(hofmeister_margin(G.petersen_graph())) < 1e-9
    assert abs(hofmeister_margin(G.complete_bipartite(1, 4))) < 1e-9
    assert abs(hofmeister_margin(G.path_graph(3))) < 1e-9


def test_null_graph_rejected():
    with pytest.raises(G.GraphError):
        spectral_radius(G.empty_graph(0))


def test_disconnected_perron_on_one_component():
    g = G.from_edge_list(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)])
    s = spectral_radius(g)
    assert abs(s.lam - 2) < 1e-9
    support = np.flatnonzero(s.perron > 1e-12)
    assert set(support) in ({0, 1, 2}, {3, 4, 5, 6})


def test_power_iteration_budget_error():
    a = G.complete_bipartite(3, 4).adjacency_matrix(float)
    with pytest.raises(ConvergenceError) as info:
        power_iteration(a, max_iter=2, shift=0.0, tol=1e-15)
    assert info.value.residual > 0


def test_warm_start_converges_faster():
    g = G.pp_incidence(3)
    a = g.adjacency_matrix(float)
    lam, x, _, it_cold = power_iteration(a)
    _, _, _, it_warm = power_iteration(a, x0=x)
    assert it_warm <= it_cold


def test_dense_cap(monkeypatch):
    monkeypatch.setenv("BTR_DENSE_CAP", "5")
    with pytest.raises(G.GraphError):
        full_spectrum(G.cycle_graph(6))
    assert spectral_radius(G.cycle_graph(6)).method == "power_iteration"


@settings(max_examples=60)
@given(graphs(min_n=1, max_n=14))
def test_eigensolver_matches_lapack(g):
    a = g.adjacency_matrix(float)
    ours = symmetric_eigenvalues(a)
    ref = np.linalg.eigvalsh(a)[::-1]
    assert np.allclose(ours, ref, atol=1e-9)


@settings(max_examples=60)
@given(graphs(min_n=1, max_n=12))
def test_spectral_invariants(g):
    s = full_spectrum(g)
    ev = s.eigenvalues
    n, e = g.n, g.edge_count
    tol = 1e-8
    assert 2 * e / n - tol <= s.lam <= g.max_degree() + tol
    assert abs(ev.sum()) <= tol * max(1, n)
    assert abs((ev ** 2).sum() - 2 * e) <= tol * max(1, 2 * e)
    assert abs((ev ** 3).sum() - 6 * count_triangles(g)) <= tol * max(1, 6 * count_triangles(g))
    cw4 = closed_walks_4(g)
    assert abs((ev ** 4).sum() - cw4) <= tol * max(1, cw4)
    assert (s.perron >= 0).all()
    assert hofmeister_margin(g, s.lam) >= -1e-9 * max(1, s.lam ** 2)


@settings(max_examples=40)
@given(graphs(min_n=1, max_n=12))
def test_backends_agree(g):
    d = spectral_radius(g, mode="dense_full").lam
    p = spectral_radius(g, mode="power_iteration").lam
    assert abs(d - p) <= 1e-8 * max(1, d)


def test_large_cw4_float_path():
    g = G.pp_incidence(17)  # 614 vertices, above the int64 matmul cutoff
    deg = 18
    assert closed_walks_4(g) == g.n * (deg * deg + deg * (deg - 1))
