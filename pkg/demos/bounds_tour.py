"""Walk through the bound checks on a handful of named graphs.

Run: python3 demos/bounds_tour.py
"""

from spectral_turan import bounds as B
from spectral_turan import graph as G
from spectral_turan.bounds import BoundParams
from spectral_turan.spectral import full_spectrum

K3 = G.complete_graph(3)

graphs = {
    "petersen": G.petersen_graph(),
    "heawood": G.heawood_graph(),
    "K4": G.complete_graph(4),
    "K8,8": G.complete_bipartite(8, 8),
}


def show(rep):
    print(f"  {rep.which:<28} {rep.verdict:<14} lhs={float(rep.lhs):<12.6g} rhs={float(rep.rhs):.6g}")


for name, g in graphs.items():
    spec = full_spectrum(g)
    print(f"{name}: n={g.n} e={g.edge_count} lambda={spec.lam:.6g}")
    show(B.verify_proposition1(g, spec))
    show(B.verify_proposition2(g, 2, spec))
    show(B.verify_proposition4(g, K3, 2))
    show(B.lemma1_rhs(g, K3, 2, spec=spec))
    show(B.verify_c5_pair_count(g))
    show(B.theorem_verdict(g, BoundParams(r=2, t=2), "th0", spec=spec))
    print()

# complete graphs clear the K_{2,s} count threshold easily
for n in (27, 64):
    show(B.verify_proposition3(G.complete_graph(n), 3, 2.0))

# regular K_{2,t}-free bipartite graphs against the leading C5-free term
for q, t in [(4, 2), (5, 3), (7, 4)]:
    rep = B.furedi_check(q, t)
    d = rep.details
    print(f"  q={q} t={t} n={d['n']}: radius {d['spectral_radius']:.4g} "
          f"vs 2x leading term {d['twice_th3_leading_t2']:.4g}")
