"""Local search for the largest spectral radius on 10 vertices with no
triangle and no induced C4; the Petersen graph (lambda = 3) is optimal.

Run: python3 demos/petersen_hunt.py
Same run through the CLI: btr search demos/configs/petersen-hunt.json
"""

import json
from pathlib import Path

import networkx as nx

from spectral_turan import graph as G
from spectral_turan.search import ConstraintSet, local_search

cfg = json.loads((Path(__file__).parent / "configs" / "petersen-hunt.json").read_text())
c = ConstraintSet.from_json(cfg["constraints"])

rec = local_search(cfg["n"], c, cfg["budget"], cfg["seed"], cfg["restarts"],
                   progress=lambda step, lam: print(f"step {step:>6}  best {lam:.6f}"),
                   log_every=10_000)
print("best lambda:", rec.best_lambda, "edges:", rec.best.edge_count)

found = nx.Graph(list(rec.best.edges()))
pet = nx.Graph(list(G.petersen_graph().edges()))
print("isomorphic to Petersen:", nx.is_isomorphic(found, pet))
