"""Extremal search: maximise lambda(G) over graphs avoiding given patterns.

Three tools:

* :func:`local_search` -- feasible-only annealing over single edge toggles.
* :func:`exhaustive_scan` -- every labelled graph of order <= 7 (ground truth).
* :func:`construct` -- named families with post-construction checks.
"""

from __future__ import annotations

import json
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import graph as G
from .counting import PatternQuery, count_c4, find_pattern
from .graph import Graph
from .io import encode_graph6, parse_graph6
from .spectral import POWER_MAX_ITER, power_iteration

log = logging.getLogger(__name__)

SCHEMA = "btr/1"


@dataclass
class ConstraintSet:
    """Forbidden subgraphs, forbidden induced K_{s,t}, other forbidden induced graphs."""

    forbidden_subgraphs: list = field(default_factory=list)
    forbidden_induced: list = field(default_factory=list)  # (s, t) pairs
    forbidden_induced_graphs: list = field(default_factory=list)

    def queries(self) -> list[PatternQuery]:
        out = [PatternQuery(h, "subgraph") for h in self.forbidden_subgraphs]
        out += [PatternQuery(G.complete_bipartite(s, t), "induced") for s, t in self.forbidden_induced]
        out += [PatternQuery(h, "induced") for h in self.forbidden_induced_graphs]
        return out

    def violation(self, g: Graph, anchor=None, added: bool = True):
        """First violated query (with its witness) or None.

        With ``anchor=(u, v)`` only copies through the just-toggled pair are
        examined; ``added`` says whether uv became an edge.  Removing an edge
        cannot create a subgraph copy, so those queries are skipped then.
        """
        for q in self.queries():
            if anchor is not None and q.mode == "subgraph" and not added:
                continue
            hit = find_pattern(g, q, anchor=anchor)
            if hit is not None:
                return q, hit
        return None

    def satisfied(self, g: Graph) -> bool:
        return self.violation(g) is None

    def to_json(self) -> list:
        out = [{"type": "subgraph", "graph6": encode_graph6(h)} for h in self.forbidden_subgraphs]
        out += [{"type": "induced_kst", "s": s, "t": t} for s, t in self.forbidden_induced]
        out += [{"type": "induced", "graph6": encode_graph6(h)} for h in self.forbidden_induced_graphs]
        return out

    @classmethod
    def from_json(cls, items) -> "ConstraintSet":
        c = cls()
        for it in items:
            kind = it.get("type")
            if kind == "subgraph":
                c.forbidden_subgraphs.append(_pattern(it))
            elif kind == "induced":
                c.forbidden_induced_graphs.append(_pattern(it))
            elif kind == "induced_kst":
                s, t = int(it["s"]), int(it["t"])
                if s < 1 or t < 1:
                    raise ValueError("induced_kst needs s, t >= 1")
                c.forbidden_induced.append((s, t))
            else:
                raise ValueError(f"unknown constraint type {kind!r}")
        return c


def _pattern(item: dict) -> Graph:
    if "graph6" in item:
        return parse_graph6(item["graph6"])
    if "name" in item:
        from .io import named_graph

        return named_graph(item["name"])
    raise ValueError("constraint needs 'graph6' or 'name'")


@dataclass
class Schedule:
    t0: float = 0.5
    ratio: float = 0.999
    tabu: int = 50
    plateau: int = 2000
    dense_below: int = 64
    power_tol: float = 1e-8
    refresh_every: int = 1000

    @classmethod
    def from_dict(cls, d: dict | None) -> "Schedule":
        d = dict(d or {})
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown schedule keys {sorted(unknown)}")
        return cls(**d)


@dataclass
class SearchRecord:
    best: Graph
    best_lambda: float
    trace: list
    seed: int
    moves_used: int
    config: dict
    improved: bool = True

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "kind": "search_record", "n": self.best.n,
                "best_graph6": encode_graph6(self.best), "best_lambda": self.best_lambda,
                "edges": self.best.edge_count, "trace": [[s, l] for s, l in self.trace],
                "seed": self.seed, "moves_used": self.moves_used, "improved": self.improved,
                "config": self.config}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _LambdaEval:
    """lambda of the current state; dense for small n, warm power iteration otherwise."""

    def __init__(self, n: int, sched: Schedule):
        self.n = n
        self.sched = sched
        self.x = None
        self.calls = 0

    def __call__(self, adj: np.ndarray) -> float:
        if self.n < self.sched.dense_below:
            return float(np.linalg.eigvalsh(adj)[-1])
        self.calls += 1
        if self.calls % self.sched.refresh_every == 0:
            self.x = None
            w, v = np.linalg.eigh(adj)
            self.x = np.abs(v[:, -1])
            return float(w[-1])
        lam, x, _, _ = power_iteration(adj, self.x, tol=self.sched.power_tol,
                                       max_iter=POWER_MAX_ITER)
        self.x = x
        return lam


def _toggle(g: Graph, u: int, v: int) -> Graph:
    rows = list(g.rows)
    rows[u] ^= 1 << v
    rows[v] ^= 1 << u
    m = g.edge_count + (-1 if g.has_edge(u, v) else 1)
    return Graph._trusted(g.n, tuple(rows), m)


def _better(lam: float, g6: str, best_lam: float, best_g6: str | None) -> bool:
    if best_g6 is None or lam > best_lam + 1e-12:
        return True
    return abs(lam - best_lam) <= 1e-12 and g6 < best_g6


def local_search(n: int, c: ConstraintSet, budget: int = 100_000, seed: int = 0,
                 restarts: int = 20, schedule: Schedule | dict | None = None,
                 progress=None, log_every: int = 0) -> SearchRecord:
    """Maximise lambda over graphs on ``n`` vertices satisfying ``c``.

    ``budget`` is the total number of proposed toggles, split evenly across
    restarts; restart ``k`` draws from the stream ``SeedSequence([seed, k])``.
    Each restart starts from the edgeless graph and anneals with temperature
    ``t0 * ratio**accepted``; after ``plateau`` consecutive rejections it
    resets to the edgeless graph.  Deterministic in ``(seed, config)``.
    ``progress(step, best_lambda)`` is called every ``log_every`` moves.
    """
    if n < 2:
        raise ValueError("local search needs n >= 2")
    if budget <= 0:
        raise ValueError("budget must be positive")
    if restarts <= 0:
        raise ValueError("restarts must be positive")
    sched = schedule if isinstance(schedule, Schedule) else Schedule.from_dict(schedule)
    start = G.empty_graph(n)
    if not c.satisfied(start):
        raise ValueError("infeasible start: the edgeless graph violates the constraint set")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    tabu_len = min(sched.tabu, len(pairs) // 2)
    config = {"n": n, "constraints": c.to_json(), "budget": budget, "restarts": restarts,
              "seed": seed, "schedule": sched.__dict__.copy()}

    best_g, best_lam, best_g6 = start, 0.0, None
    best_g6 = encode_graph6(start)
    trace = [(0, 0.0)]
    step = 0
    per = [budget // restarts + (1 if k < budget % restarts else 0) for k in range(restarts)]
    for k in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
        lam_of = _LambdaEval(n, sched)
        g, adj, lam = start, np.zeros((n, n)), 0.0
        tabu: deque = deque(maxlen=tabu_len or None)
        accepted = rejected = 0
        for _ in range(per[k]):
            step += 1
            if progress is not None and log_every and step % log_every == 0:
                progress(step, best_lam)
            i = int(rng.integers(len(pairs)))
            u, v = pairs[i]
            is_tabu = bool(tabu_len) and i in tabu
            added = not g.has_edge(u, v)
            cand = _toggle(g, u, v)
            accept = False
            if c.violation(cand, anchor=(u, v), added=added) is None:
                adj[u, v] = adj[v, u] = 1.0 if added else 0.0
                new_lam = lam_of(adj)
                if is_tabu:
                    # aspiration: a tabu toggle is allowed only if it beats the best so far
                    accept = new_lam > best_lam + 1e-12
                else:
                    delta = new_lam - lam
                    temp = sched.t0 * sched.ratio ** accepted
                    accept = delta >= 0 or rng.random() < math.exp(delta / max(temp, 1e-300))
                if not accept:
                    adj[u, v] = adj[v, u] = 0.0 if added else 1.0
            if accept:
                g, lam = cand, new_lam
                accepted += 1
                rejected = 0
                if tabu_len:
                    tabu.append(i)
                if lam >= best_lam - 1e-12:
                    g6 = encode_graph6(g)
                    if _better(lam, g6, best_lam, best_g6):
                        if lam > best_lam + 1e-12:
                            trace.append((step, lam))
                        best_g, best_lam, best_g6 = g, lam, g6
            else:
                rejected += 1
            if rejected >= sched.plateau:
                g, adj, lam = start, np.zeros((n, n)), 0.0
                lam_of.x = None
                tabu.clear()
                rejected = 0
    # emit-time full (non-incremental) re-check
    if not c.satisfied(best_g):
        raise AssertionError("best graph violates the constraint set (incremental check bug)")
    best_lam = float(np.linalg.eigvalsh(best_g.adjacency_matrix(np.float64))[-1]) if n else 0.0
    return SearchRecord(best=best_g, best_lambda=best_lam, trace=trace, seed=seed,
                        moves_used=step, config=config, improved=len(trace) > 1)


# -- exhaustive ground truth ------------------------------------------------------

def _feasible_mask(batch, c: ConstraintSet) -> np.ndarray:
    ok = np.ones(len(batch), dtype=bool)
    for h in c.forbidden_subgraphs:
        ok &= ~batch.contains(h)
    for s, t in c.forbidden_induced:
        ok &= ~batch.contains_induced(G.complete_bipartite(s, t))
    for h in c.forbidden_induced_graphs:
        ok &= ~batch.contains_induced(h)
    return ok


def default_verify_checks():
    from . import corpus as C
    from .ramsey import ramsey_lookup

    k3, p3, c5 = G.complete_graph(3), G.path_graph(3), G.cycle_graph(5)
    r = {(h.n, h.edge_count, s): ramsey_lookup(h, s).upper for h in (k3, p3) for s in (2, 3)}
    r_c5 = min(ramsey_lookup(G.delete_vertices(c5, [x]), 2).upper for x in range(5))
    return {
        "identity-c4": C.check_identity_c4,
        "identity-in": C.check_identity_in,
        "identity-in3": C.check_identity_in3,
        "identity-walk": C.check_identity_walk,
        "identity-cw4": C.check_cw4_spectrum,
        "moments": C.check_moments,
        "prop1": C.check_prop1,
        "prop2": lambda b: [C.check_prop2(b, k) for k in (2, 3, 4)],
        "prop4": lambda b: [C.check_prop4(b, h, s, r[(h.n, h.edge_count, s)])
                            for h in (k3, p3) for s in (2, 3)],
        "hofmeister": C.check_hofmeister,
        "spectral-range": C.check_spectral_range,
        "motzkin": C.check_motzkin,
        "c5pair": C.check_c5pair,
        "lemma1": lambda b: C.check_lemma1(b, c5, 2, r_c5),
        "turan-step": lambda b: [C.check_turan_step(b, r_) for r_ in (2, 3, 4)],
    }


def exhaustive_scan(n_max: int, c: ConstraintSet | None = None, objective: str = "max_lambda",
                    checks=None, n_min: int = 1) -> list[dict]:
    """Scan all labelled graphs of orders ``n_min..n_max`` (``n_max <= 7``).

    ``max_lambda``: per order, the feasible graph of largest lambda (ties
    broken by the smaller graph6 string).  ``verify_inequalities``: run the
    batch checks (names from :func:`default_verify_checks`) on the feasible
    graphs and report counts and violations.
    """
    from . import corpus as C

    if n_max > 7:
        raise ValueError(f"n_max={n_max} > 7: order 8 has 2^28 labelled graphs")
    if objective not in ("max_lambda", "verify_inequalities"):
        raise ValueError(f"unknown objective {objective!r}")
    c = c or ConstraintSet()
    out = []
    registry = default_verify_checks() if objective == "verify_inequalities" else {}
    if checks is not None and objective == "verify_inequalities":
        unknown = set(checks) - set(registry)
        if unknown:
            raise ValueError(f"unknown checks {sorted(unknown)}")
        registry = {k: registry[k] for k in checks}
    for n in range(max(1, n_min), n_max + 1):
        if objective == "max_lambda":
            best = (-1.0, None)
            feasible = 0
            for b in C.iter_exhaustive(n):
                ok = _feasible_mask(b, c)
                feasible += int(ok.sum())
                if not ok.any():
                    continue
                lam = np.where(ok, b.lam, -1.0)
                top = lam.max()
                for k in np.flatnonzero(lam >= top - 1e-9):
                    g6 = encode_graph6(b.graph(int(k)))
                    if top > best[0] + 1e-9 or (abs(top - best[0]) <= 1e-9 and g6 < best[1]):
                        best = (float(max(top, best[0])), g6)
            rec = {"n": n, "scanned": 1 << comb(n, 2), "feasible": feasible,
                   "best_lambda": best[0] if best[1] else None, "best_graph6": best[1]}
            out.append(rec)
        else:
            summ = C.CorpusSummary(f"n={n}")
            for b in C.iter_exhaustive(n):
                ok = _feasible_mask(b, c)
                summ.scanned += len(b)
                for chk in registry.values():
                    res = chk(b)
                    for r in (res if isinstance(res, list) else [res]):
                        r.applicable = r.applicable & ok
                        summ.add(r, b)
            d = summ.to_dict()
            d["n"] = n
            out.append(d)
    return out


# -- constructions ------------------------------------------------------------------

FAMILIES = ("complete_bipartite", "complete", "cycle", "path", "petersen", "kneser",
            "pp_incidence", "empty")


def construct(family: str, **params) -> Graph:
    """Build a named family member and verify its defining properties."""
    if family == "complete_bipartite":
        a, b = int(params["a"]), int(params["b"])
        g = G.complete_bipartite(a, b)
        _post(g.edge_count == a * b, "edge count")
    elif family == "complete":
        n = int(params["n"])
        g = G.complete_graph(n)
        _post(g.edge_count == comb(n, 2), "edge count")
    elif family == "cycle":
        n = int(params["n"])
        g = G.cycle_graph(n)
        _post(all(d == 2 for d in g.degrees()) and g.is_connected(), "2-regular connected")
    elif family == "path":
        g = G.path_graph(int(params["n"]))
    elif family == "empty":
        g = G.empty_graph(int(params["n"]))
    elif family == "petersen":
        g = G.petersen_graph()
        _post(g.n == 10 and all(d == 3 for d in g.degrees()), "cubic on 10 vertices")
        _post(_girth(g) == 5, "girth 5")
    elif family == "kneser":
        m, k = int(params["m"]), int(params["k"])
        g = G.kneser_graph(m, k)
        _post(g.n == comb(m, k), "order")
        _post(all(d == comb(m - k, k) for d in g.degrees()), "regularity")
    elif family == "pp_incidence":
        q = int(params["q"])
        g = G.pp_incidence(q)
        pts = q * q + q + 1
        _post(g.n == 2 * pts, "order")
        _post(g.edge_count == pts * (q + 1), "edge count")
        _post(all(d == q + 1 for d in g.degrees()), "regularity")
        _post(count_c4(g) == 0, "C4-free")
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    return g


def _post(ok: bool, what: str) -> None:
    if not ok:
        raise AssertionError(f"post-construction check failed: {what}")


def _girth(g: Graph) -> float:
    """Shortest cycle length by BFS from every vertex."""
    best = math.inf
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def girth(g: Graph) -> float:
    return _girth(g)
