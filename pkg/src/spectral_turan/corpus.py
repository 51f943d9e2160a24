"""Vectorised evaluation over whole graph corpora.

A :class:`GraphBatch` holds many graphs of the same order as a stack of
adjacency matrices.  For orders up to 11 every graph also has an edge
*mask*: bit ``k`` is the ``k``-th pair of ``combinations(range(n), 2)``.
Pattern containment on masks is a subset test against the precomputed masks
of every copy of the pattern in K_n, which is what makes the exhaustive
labelled scans (2^21 graphs at order 7) affordable.

These routines are deliberately written without the per-graph code in
:mod:`counting` / :mod:`bounds`, so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from math import comb

import numpy as np

from .counting import clique_number
from .graph import Graph, complete_bipartite, complete_graph, cycle_graph, path_graph

MASK_MAX_ORDER = 11  # 55 pair bits fit in uint64
CHUNK = 1 << 15


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict:
    return {p: k for k, p in enumerate(pair_list(n))}


def graph_to_mask(g: Graph) -> int:
    idx = _pair_index(g.n)
    m = 0
    for e in g.edges():
        m |= 1 << idx[e]
    return m


def mask_to_graph(n: int, mask: int) -> Graph:
    return Graph.from_edges(n, [p for k, p in enumerate(pair_list(n)) if mask >> k & 1])


@lru_cache(maxsize=None)
def copy_masks(pattern_key: tuple, n: int) -> np.ndarray:
    """Distinct edge masks of all copies of a pattern inside K_n."""
    pn, pedges = pattern_key
    idx = _pair_index(n)
    out = set()
    if pn <= n:
        for img in permutations(range(n), pn):
            m = 0
            for a, b in pedges:
                x, y = img[a], img[b]
                m |= 1 << idx[(x, y) if x < y else (y, x)]
            out.add(m)
    return np.array(sorted(out), dtype=np.uint64)


@lru_cache(maxsize=None)
def induced_copy_masks(pattern_key: tuple, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(support, edges) mask pairs: a graph has an induced copy iff
    ``mask & support == edges`` for some pair."""
    pn, pedges = pattern_key
    idx = _pair_index(n)
    out = set()
    if pn <= n:
        for img in permutations(range(n), pn):
            sup = 0
            for x, y in combinations(sorted(img), 2):
                sup |= 1 << idx[(x, y)]
            m = 0
            for a, b in pedges:
                x, y = img[a], img[b]
                m |= 1 << idx[(x, y) if x < y else (y, x)]
            out.add((sup, m))
    out = sorted(out)
    return (np.array([s for s, _ in out], dtype=np.uint64),
            np.array([m for _, m in out], dtype=np.uint64))


def pattern_key(p: Graph) -> tuple:
    return (p.n, tuple(p.edges()))


@lru_cache(maxsize=None)
def subset_masks(n: int, k: int) -> np.ndarray:
    idx = _pair_index(n)
    out = []
    for sub in combinations(range(n), k):
        m = 0
        for pr in combinations(sub, 2):
            m |= 1 << idx[pr]
        out.append(m)
    return np.array(out, dtype=np.uint64)


def masks_to_adjacency(n: int, masks: np.ndarray) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.uint64)
    npairs = n * (n - 1) // 2
    bits = ((masks[:, None] >> np.arange(npairs, dtype=np.uint64)) & np.uint64(1)).astype(np.int8)
    a = np.zeros((len(masks), n, n), dtype=np.int8)
    iu = np.triu_indices(n, 1)
    a[:, iu[0], iu[1]] = bits
    a[:, iu[1], iu[0]] = bits
    return a


class GraphBatch:
    """Many graphs of a common order ``n``."""

    def __init__(self, n: int, adjacency: np.ndarray, masks: np.ndarray | None = None):
        self.n = n
        self.adj = adjacency.astype(np.int64)
        self.masks = masks

    @classmethod
    def from_masks(cls, n: int, masks) -> "GraphBatch":
        masks = np.asarray(masks, dtype=np.uint64)
        return cls(n, masks_to_adjacency(n, masks), masks)

    @classmethod
    def from_graphs(cls, graphs: list[Graph]) -> "GraphBatch":
        n = graphs[0].n
        adj = np.stack([g.adjacency_matrix(np.int64) for g in graphs])
        masks = None
        if n <= MASK_MAX_ORDER:
            masks = np.array([graph_to_mask(g) for g in graphs], dtype=np.uint64)
        return cls(n, adj, masks)

    @classmethod
    def random(cls, n: int, p: float, size: int, rng: np.random.Generator) -> "GraphBatch":
        upper = rng.random((size, n, n)) < p
        upper = np.triu(upper, 1)
        adj = (upper | upper.transpose(0, 2, 1)).astype(np.int64)
        return cls(n, adj)

    def __len__(self) -> int:
        return self.adj.shape[0]

    def graph(self, k: int) -> Graph:
        return Graph.from_adjacency(self.adj[k])

    # -- basic quantities --
    @cached_property
    def deg(self) -> np.ndarray:
        return self.adj.sum(axis=2)

    @cached_property
    def edges(self) -> np.ndarray:
        return self.deg.sum(axis=1) // 2

    @cached_property
    def codeg(self) -> np.ndarray:
        return self.adj @ self.adj

    @cached_property
    def _iu(self):
        return np.triu_indices(self.n, 1)

    @cached_property
    def pair_codeg(self) -> np.ndarray:
        return self.codeg[:, self._iu[0], self._iu[1]]

    @cached_property
    def pair_adj(self) -> np.ndarray:
        return self.adj[:, self._iu[0], self._iu[1]].astype(bool)

    @cached_property
    def trace_a4(self) -> np.ndarray:
        c = self.codeg
        return (c * c).sum(axis=(1, 2))

    @cached_property
    def trace_a3(self) -> np.ndarray:
        return np.einsum("bij,bji->b", self.codeg, self.adj)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        if "_eigh" in self.__dict__:
            return self._eigh[0][:, ::-1]
        return np.linalg.eigvalsh(self.adj.astype(np.float64))[:, ::-1]

    @cached_property
    def _eigh(self):
        return np.linalg.eigh(self.adj.astype(np.float64))

    @cached_property
    def lam(self) -> np.ndarray:
        return self.eigenvalues[:, 0]

    @cached_property
    def perron(self) -> np.ndarray:
        x = np.abs(self._eigh[1][:, :, -1])
        return x / np.linalg.norm(x, axis=1, keepdims=True)

    # -- mask-based structure (n <= MASK_MAX_ORDER) --
    def _need_masks(self):
        if self.masks is None:
            raise ValueError("operation needs edge masks (order <= 11 corpora)")

    def contains(self, p: Graph) -> np.ndarray:
        self._need_masks()
        out = np.zeros(len(self), dtype=bool)
        g = self.masks
        for c in copy_masks(pattern_key(p), self.n):
            out |= (g & c) == c
        return out

    def contains_induced(self, p: Graph) -> np.ndarray:
        self._need_masks()
        sup, edg = induced_copy_masks(pattern_key(p), self.n)
        out = np.zeros(len(self), dtype=bool)
        g = self.masks
        for s, e in zip(sup, edg):
            out |= (g & s) == e
        return out

    def count_copies(self, p: Graph) -> np.ndarray:
        self._need_masks()
        out = np.zeros(len(self), dtype=np.int64)
        g = self.masks
        for c in copy_masks(pattern_key(p), self.n):
            out += (g & c) == c
        return out

    @cached_property
    def c4(self) -> np.ndarray:
        return self.count_copies(cycle_graph(4)) if self.n >= 4 else np.zeros(len(self), np.int64)

    @cached_property
    def k3(self) -> np.ndarray:
        return self.trace_a3 // 6

    @cached_property
    def omega(self) -> np.ndarray:
        if self.masks is None:
            raise ValueError("clique number needs edge masks")
        om = np.where(self.n > 0, 1, 0) * np.ones(len(self), dtype=np.int64)
        g = self.masks
        for k in range(2, self.n + 1):
            has = np.zeros(len(self), dtype=bool)
            for m in subset_masks(self.n, k):
                has |= (g & m) == m
            if not has.any():
                break
            om[has] = k
        return om

    def omega_lower(self, starts: int = 8) -> np.ndarray:
        """Greedy clique size from the ``starts`` highest-degree vertices; a
        lower bound on omega."""
        if self.n == 0:
            return np.zeros(len(self), dtype=np.int64)
        a = self.adj.astype(bool)
        af = self.adj.astype(np.float32)
        rows = np.arange(len(self))
        order = np.argsort(-self.deg, axis=1, kind="stable")[:, :starts]
        best = np.zeros(len(self), dtype=np.int64)
        for k in range(order.shape[1]):
            cand = a[rows, order[:, k], :].copy()
            size = np.ones(len(self), dtype=np.int64)
            while True:
                alive = cand.any(axis=1)
                if not alive.any():
                    break
                # candidate with most neighbours inside the candidate set
                inner = np.matmul(af, cand.astype(np.float32)[:, :, None])[:, :, 0]
                pick = np.where(cand, inner, -1.0).argmax(axis=1)
                size += alive
                cand &= a[rows, pick, :]
            best = np.maximum(best, size)
        return best

    def independent_count(self, s: int) -> np.ndarray:
        n = self.n
        if self.masks is not None:
            out = np.zeros(len(self), dtype=np.int64)
            g = self.masks
            for m in subset_masks(n, s):
                out += (g & m) == 0
            return out
        if s == 1:
            return np.full(len(self), n, dtype=np.int64)
        if s == 2:
            return comb(n, 2) - self.edges
        if s == 3:
            d = self.deg
            return (comb(n, 3) - self.edges * (n - 2) + (d * (d - 1) // 2).sum(axis=1) - self.k3)
        raise ValueError("independent counts beyond s=3 need edge masks")

    def contains_simple(self, p: Graph) -> np.ndarray:
        """H-containment without masks for K_3 and P_3; masks otherwise."""
        if self.masks is not None:
            return self.contains(p)
        if p.n == 3 and p.edge_count == 3:
            return self.trace_a3 > 0
        if p.n == 3 and p.edge_count == 2:
            return self.deg.max(axis=1) >= 2
        raise ValueError("containment of this pattern needs edge masks")

    def independent_set_codegrees(self, s: int):
        """Yield, per s-subset, (is_independent, common-neighbourhood size) arrays."""
        bool_adj = self.adj.astype(bool)
        sub_masks = subset_masks(self.n, s) if self.masks is not None else None
        for k, sub in enumerate(combinations(range(self.n), s)):
            common = bool_adj[:, :, list(sub)].all(axis=2).sum(axis=1)
            if sub_masks is not None:
                indep = (self.masks & sub_masks[k]) == 0
            else:
                indep = np.ones(len(self), dtype=bool)
                for i, j in combinations(sub, 2):
                    indep &= self.adj[:, i, j] == 0
            yield indep, common


def all_masks(n: int) -> np.ndarray:
    return np.arange(1 << (n * (n - 1) // 2), dtype=np.uint64)


def iter_exhaustive(n: int, chunk: int = CHUNK):
    """All 2^binom(n,2) labelled graphs on n vertices, in mask order, batched."""
    if n > 7:
        raise ValueError("exhaustive enumeration is capped at order 7")
    total = 1 << (n * (n - 1) // 2)
    for start in range(0, total, chunk):
        yield GraphBatch.from_masks(n, np.arange(start, min(total, start + chunk), dtype=np.uint64))


# -- batch checks ----------------------------------------------------------------

@dataclass
class BatchResult:
    name: str
    lhs: np.ndarray
    rhs: np.ndarray
    applicable: np.ndarray
    sense: str = "ge"
    rel_tol: float = 1e-9

    @property
    def margin(self) -> np.ndarray:
        lhs = self.lhs.astype(float)
        rhs = self.rhs.astype(float)
        if self.sense == "ge":
            return lhs - rhs
        if self.sense == "le":
            return rhs - lhs
        return -np.abs(lhs - rhs)

    @property
    def violations(self) -> np.ndarray:
        lhs = np.abs(self.lhs.astype(float))
        rhs = np.abs(self.rhs.astype(float))
        tol = self.rel_tol * np.maximum(1.0, np.maximum(lhs, rhs))
        if self.sense == "eq" and self.rel_tol == 0.0:
            bad = self.lhs != self.rhs
        else:
            bad = self.margin < -tol
        return self.applicable & bad


def _all(b: GraphBatch) -> np.ndarray:
    return np.ones(len(b), dtype=bool)


def check_identity_c4(b: GraphBatch) -> BatchResult:
    d = b.pair_codeg
    lhs = (d * (d - 1) // 2).sum(axis=1)
    return BatchResult("identity-c4", lhs, 2 * b.c4, _all(b), "eq", 0.0)


def check_identity_in(b: GraphBatch) -> BatchResult:
    lhs = (b.pair_codeg ** 2).sum(axis=1)
    rhs = 4 * b.c4 + (b.deg * (b.deg - 1) // 2).sum(axis=1)
    return BatchResult("identity-in", lhs, rhs, _all(b), "eq", 0.0)


def check_identity_in3(b: GraphBatch) -> BatchResult:
    lhs = 2 * (b.pair_codeg ** 2).sum(axis=1)
    rhs = b.trace_a4 - (b.deg ** 2).sum(axis=1)
    return BatchResult("identity-in3", lhs, rhs, _all(b), "eq", 0.0)


def check_identity_walk(b: GraphBatch) -> BatchResult:
    """CW4 == 8 C4 + 2 sum d^2 - 2e."""
    rhs = 8 * b.c4 + 2 * (b.deg ** 2).sum(axis=1) - 2 * b.edges
    return BatchResult("identity-walk", b.trace_a4, rhs, _all(b), "eq", 0.0)


def check_cw4_spectrum(b: GraphBatch) -> BatchResult:
    return BatchResult("identity-cw4", b.trace_a4, (b.eigenvalues ** 4).sum(axis=1),
                       _all(b), "eq", 1e-8)


def check_moments(b: GraphBatch) -> list[BatchResult]:
    ev = b.eigenvalues
    allb = _all(b)
    return [
        BatchResult("moment-1", np.zeros(len(b)), ev.sum(axis=1), allb, "eq", 1e-8),
        BatchResult("moment-2", 2 * b.edges, (ev ** 2).sum(axis=1), allb, "eq", 1e-8),
        BatchResult("moment-3", 6 * b.k3, (ev ** 3).sum(axis=1), allb, "eq", 1e-8),
    ]


def check_prop1(b: GraphBatch) -> BatchResult:
    lam = b.lam
    lhs = (b.pair_codeg ** 2).sum(axis=1)
    return BatchResult("prop1", lhs, 0.5 * (lam ** 4 - b.n * lam ** 2), _all(b), "ge")


def check_prop2(b: GraphBatch, k: int) -> BatchResult:
    lam, n = b.lam, b.n
    premise = lam >= np.sqrt(n) * (1 - 1e-9)
    lhs = (b.pair_codeg.astype(np.float64) ** k).sum(axis=1)
    rhs = lam ** k * np.maximum(lam ** 2 - n, 0.0) ** (k / 2) / (2 * float(n) ** (k - 2))
    return BatchResult(f"prop2[k={k}]", lhs, rhs, premise, "ge")


def check_prop4(b: GraphBatch, h: Graph, s: int, ramsey_upper: int) -> BatchResult:
    free = ~b.contains_simple(h)
    lhs = b.independent_count(s)
    rhs = np.full(len(b), comb(b.n, s) / comb(ramsey_upper, s) - 1)
    return BatchResult(f"prop4[{h.n}:{h.edge_count},s={s}]", lhs, rhs, free, "ge")


def check_hofmeister(b: GraphBatch) -> BatchResult:
    return BatchResult("hofmeister", b.lam ** 2, (b.deg ** 2).sum(axis=1) / b.n, _all(b), "ge")


def check_spectral_range(b: GraphBatch) -> list[BatchResult]:
    allb = _all(b)
    return [BatchResult("lambda>=2e/n", b.lam, 2 * b.edges / b.n, allb, "ge"),
            BatchResult("lambda<=maxdeg", b.lam, b.deg.max(axis=1), allb, "le")]


def _motzkin_rhs(om: np.ndarray) -> np.ndarray:
    return np.where(om > 0, (om - 1) / (2 * np.maximum(om, 1)), 0.0)


def check_motzkin(b: GraphBatch) -> BatchResult:
    """Perron vector x: sum over edges x_i^2 x_j^2 <= (w-1)/(2w).

    Without edge masks omega is first bounded below greedily; the bound is
    increasing in omega, so a pass there is a pass.  Graphs left undecided
    get the exact clique number.
    """
    y = b.perron ** 2
    val = np.einsum("bi,bij,bj->b", y, b.adj.astype(float), y) / 2
    if b.masks is not None:
        om = b.omega
    else:
        om = b.omega_lower()
        tol = 1e-9 * np.maximum(1.0, val)
        for k in np.flatnonzero(val > _motzkin_rhs(om) + tol):
            om[k] = clique_number(b.graph(int(k)))
    return BatchResult("motzkin", val, _motzkin_rhs(om), _all(b), "le")


def check_c5pair(b: GraphBatch) -> BatchResult:
    free = ~b.contains(cycle_graph(5))
    d = b.pair_codeg
    lhs = (np.where(b.pair_adj, d * (d - 1) // 2, 0)).sum(axis=1)
    return BatchResult("c5pair", lhs, np.full(len(b), comb(b.n, 2)), free, "le")


def check_lemma1(b: GraphBatch, h: Graph, t: int, ramsey_upper: int,
                 doubled: bool = True) -> BatchResult:
    """Premise: H-free and no induced K_{2,t}; ``ramsey_upper`` bounds R(H-x, K_t)."""
    ok = ~b.contains(h) & ~b.contains_induced(complete_bipartite(2, t))
    d = b.pair_codeg
    sq = np.where(b.pair_adj, d * d, 0).sum(axis=1).astype(float)
    ms = _motzkin_rhs(b.omega)
    factor = 2.0 if doubled else 1.0
    rhs = (ramsey_upper + 1) * b.n + factor * np.sqrt(sq) * np.sqrt(ms)
    name = "lemma1" if doubled else "lemma1-as-stated"
    return BatchResult(name, b.lam ** 2, rhs, ok, "le")


def check_turan_step(b: GraphBatch, r: int) -> BatchResult:
    """Worst pair per graph: e(G[Gamma(X)]) <= (r-2)/(2(r-1)) d(X)^2 for K_{r+1}-free G."""
    free = ~b.contains(complete_graph(r + 1))
    a = b.adj
    worst = np.full(len(b), np.inf)
    lhs_w = np.zeros(len(b))
    rhs_w = np.zeros(len(b))
    coef = (r - 2) / (2 * (r - 1))
    for i, j in combinations(range(b.n), 2):
        c = a[:, i, :] * a[:, j, :]
        e = np.einsum("bi,bij,bj->b", c, a, c) // 2
        d = c.sum(axis=1)
        margin = coef * d * d - e
        upd = margin < worst
        worst = np.where(upd, margin, worst)
        lhs_w = np.where(upd, e, lhs_w)
        rhs_w = np.where(upd, coef * d * d, rhs_w)
    return BatchResult(f"turan_step[r={r}]", lhs_w, rhs_w, free, "le")


def _binom_array(d: np.ndarray, s: int) -> np.ndarray:
    out = np.ones_like(d)
    for i in range(s):
        out = out * np.maximum(d - i, 0)
    return out // np.prod(np.arange(1, s + 1))


def check_in6(b: GraphBatch, h: Graph, s: int, ramsey_upper: int) -> BatchResult:
    free = ~b.contains(h)
    lhs = np.zeros(len(b), dtype=np.int64)
    for indep, common in b.independent_set_codegrees(s):
        lhs += np.where(indep, common * (common - 1) // 2, 0)
    d = b.pair_codeg
    k2s = _binom_array(d, s).sum(axis=1)
    rhs = -comb(b.n, 2) + k2s / comb(ramsey_upper, s)
    return BatchResult(f"in6[s={s}]", lhs, rhs, free, "ge")


@dataclass
class CorpusSummary:
    name: str
    scanned: int = 0
    applicable: dict = field(default_factory=dict)
    violations: dict = field(default_factory=dict)
    worst_margin: dict = field(default_factory=dict)
    examples: dict = field(default_factory=dict)

    def add(self, res: BatchResult, batch: GraphBatch):
        self.applicable[res.name] = self.applicable.get(res.name, 0) + int(res.applicable.sum())
        bad = res.violations
        self.violations[res.name] = self.violations.get(res.name, 0) + int(bad.sum())
        if res.applicable.any():
            m = float(res.margin[res.applicable].min())
            self.worst_margin[res.name] = min(self.worst_margin.get(res.name, np.inf), m)
        if bad.any() and res.name not in self.examples:
            k = int(np.flatnonzero(bad)[0])
            from .io import encode_graph6

            self.examples[res.name] = encode_graph6(batch.graph(k))

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    def to_dict(self) -> dict:
        return {"name": self.name, "scanned": self.scanned, "applicable": self.applicable,
                "violations": self.violations,
                "worst_margin": {k: float(v) for k, v in self.worst_margin.items()},
                "examples": self.examples, "total_violations": self.total_violations}


def run_checks(batches, checks, name: str = "corpus") -> CorpusSummary:
    """Apply ``checks`` (callables batch -> BatchResult or list) to every batch."""
    summ = CorpusSummary(name)
    for b in batches:
        summ.scanned += len(b)
        for chk in checks:
            res = chk(b)
            for r in (res if isinstance(res, list) else [res]):
                summ.add(r, b)
    return summ


def random_corpus(orders=(8, 16, 32), probs=(0.1, 0.5, 0.9), per_order: int = 100_000,
                  seed: int = 0, chunk: int = 5000):
    """Batches of G(n, p) graphs: ``per_order`` graphs per order, split over ``probs``."""
    rng = np.random.default_rng(seed)
    for n in orders:
        left = per_order
        share = [per_order // len(probs) + (1 if i < per_order % len(probs) else 0)
                 for i in range(len(probs))]
        for p, cnt in zip(probs, share):
            while cnt > 0:
                size = min(chunk, cnt)
                yield GraphBatch.random(n, p, size, rng)
                cnt -= size
                left -= size


STANDARD = {
    "K3": complete_graph(3),
    "P3": path_graph(3),
    "C5": cycle_graph(5),
}
