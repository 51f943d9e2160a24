"""Exact counts and pattern detection on bitset graphs.

Everything here is exact integer arithmetic on ``rows[u] & rows[v]``
popcounts.  Enumerations take a node ``budget``; exceeding it raises
:class:`BudgetExceeded` instead of returning a possibly wrong answer.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .graph import Graph, GraphError, VertexSet, bits_of, complement, mask_of

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    pass


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit: int):
        self.limit = limit
        self.left = limit

    def tick(self, k: int = 1):
        self.left -= k
        if self.left < 0:
            raise BudgetExceeded(f"search budget of {self.limit} nodes exceeded")


# -- pair co-degrees ----------------------------------------------------------

def _codegree_matrix(g: Graph) -> np.ndarray:
    a = g.adjacency_matrix(np.float64)
    return np.rint(a @ a).astype(np.int64)


def pair_degree_histogram(g: Graph, which: str = "all") -> Counter:
    """Histogram of d(X) over unordered pairs X.

    ``which`` selects ``"all"`` pairs, only ``"edges"`` or only ``"nonedges"``.
    """
    if which not in ("all", "edges", "nonedges"):
        raise ValueError(which)
    rows = g.rows
    hist: Counter = Counter()
    if g.n <= 400:
        for i in range(g.n):
            ri = rows[i]
            for j in range(i + 1, g.n):
                adj = ri >> j & 1
                if (which == "edges" and not adj) or (which == "nonedges" and adj):
                    continue
                hist[(ri & rows[j]).bit_count()] += 1
        return hist
    d = _codegree_matrix(g)
    iu = np.triu_indices(g.n, 1)
    vals = d[iu]
    if which != "all":
        adj = g.adjacency_matrix(np.int8)[iu].astype(bool)
        vals = vals[adj] if which == "edges" else vals[~adj]
    for v, c in zip(*np.unique(vals, return_counts=True)):
        hist[int(v)] = int(c)
    return hist


def pair_degree_moment(g: Graph, k: int, which: str = "all") -> int:
    """Sum over unordered pairs X of d(X)**k, exactly."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    return sum(c * d ** k for d, c in pair_degree_histogram(g, which).items())


def pair_binomial_sum(g: Graph, s: int, which: str = "all") -> int:
    """Sum over pairs X of binom(d(X), s)."""
    return sum(c * comb(d, s) for d, c in pair_degree_histogram(g, which).items())


def count_k2s(g: Graph, s: int) -> int:
    """Number of K_{2,s} subgraphs, sum over pairs of binom(d(X), s); needs s >= 3.

    For s = 2 the sum counts every 4-cycle twice, so it is refused.
    """
    if s < 3:
        raise ValueError("K_{2,s} count via pair co-degrees requires s >= 3")
    return pair_binomial_sum(g, s)


# -- small structures ------------------------------------------------------

def _c4_by_wedges(g: Graph) -> int:
    # each 4-cycle v0 v1 v2 v3 is listed once: v0 minimal, v1 < v3
    rows = g.rows
    total = 0
    for v0 in range(g.n):
        above = ~((1 << (v0 + 1)) - 1)
        nb = list(bits_of(rows[v0] & above))
        for x, v1 in enumerate(nb):
            r1 = rows[v1] & above
            for v3 in nb[x + 1:]:
                total += (r1 & rows[v3]).bit_count()
    return total


def count_c4(g: Graph, check: bool = True) -> int:
    """Number of 4-cycles.

    Computed as half of sum over pairs of binom(d(X), 2); with ``check`` it is
    also counted by explicit wedge enumeration and the two must agree.
    """
    twice = pair_binomial_sum(g, 2)
    if twice % 2:
        raise ArithmeticError("pair aggregate of 4-cycles is odd")
    c4 = twice // 2
    if check:
        direct = _c4_by_wedges(g)
        if direct != c4:
            raise ArithmeticError(f"4-cycle count mismatch: pairs {c4} vs wedges {direct}")
    return c4


def count_triangles(g: Graph) -> int:
    rows = g.rows
    total = sum((rows[u] & rows[v]).bit_count() for u, v in g.edges())
    return total // 3


def _greedy_color_order(rows, cand: int):
    # greedy sequential colouring; returns vertices with their colour bound
    order, bounds = [], []
    colour = 0
    uncoloured = cand
    while uncoloured:
        colour += 1
        avail = uncoloured
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~rows[v] & ~(1 << v)
            uncoloured &= ~(1 << v)
            order.append(v)
            bounds.append(colour)
    return order, bounds


def max_clique(g: Graph, budget: int = DEFAULT_BUDGET) -> list[int]:
    """A maximum clique (branch and bound, greedy colouring bound)."""
    rows = g.rows
    best: list[int] = []
    bud = _Budget(budget)

    def expand(cur: list[int], cand: int):
        nonlocal best
        order, bounds = _greedy_color_order(rows, cand)
        for idx in range(len(order) - 1, -1, -1):
            if len(cur) + bounds[idx] <= len(best):
                return
            bud.tick()
            v = order[idx]
            cur.append(v)
            new = cand & rows[v]
            if new:
                expand(cur, new)
            elif len(cur) > len(best):
                best = cur.copy()
            cur.pop()
            cand &= ~(1 << v)

    if g.n:
        expand([], (1 << g.n) - 1)
    return sorted(best)


def clique_number(g: Graph, budget: int = DEFAULT_BUDGET) -> int:
    return len(max_clique(g, budget))


# -- cliques / independent sets of fixed size ------------------------------

def _count_cliques(rows, cand: int, k: int, bud: _Budget) -> int:
    if k == 0:
        return 1
    if cand.bit_count() < k:
        return 0
    if k == 1:
        return cand.bit_count()
    total = 0
    while cand:
        v = (cand & -cand).bit_length() - 1
        cand &= ~(1 << v)
        bud.tick()
        total += _count_cliques(rows, cand & rows[v], k - 1, bud)
    return total


def clique_count(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of k-cliques, by ordered extension over bitset candidates."""
    if k < 0:
        raise ValueError("size must be non-negative")
    return _count_cliques(g.rows, (1 << g.n) - 1, k, _Budget(budget))


def independent_set_count(g: Graph, s: int, budget: int = DEFAULT_BUDGET) -> int:
    """i_s(G): independent s-sets, counted as s-cliques of the complement."""
    if s < 1:
        raise ValueError("s must be at least 1")
    return clique_count(complement(g), s, budget)


def iter_independent_sets(g: Graph, s: int, budget: int = DEFAULT_BUDGET):
    """Yield ``(mask, common_neighbourhood_mask)`` for each independent s-set."""
    rows = g.rows
    full = (1 << g.n) - 1
    non = [full & ~r & ~(1 << i) for i, r in enumerate(rows)]
    bud = _Budget(budget)

    def rec(chosen: int, gamma: int, cand: int, k: int):
        if k == 0:
            yield chosen, gamma
            return
        while cand:
            if cand.bit_count() < k:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            bud.tick()
            yield from rec(chosen | 1 << v, gamma & rows[v], cand & non[v], k - 1)

    yield from rec(0, full, full, s)


def independent_pair_degree_sum(g: Graph, s: int, budget: int = DEFAULT_BUDGET) -> int:
    """Sum over independent s-sets I of binom(d(I), 2)."""
    if s < 1:
        raise ValueError("s must be at least 1")
    return sum(comb(gamma.bit_count(), 2) for _, gamma in iter_independent_sets(g, s, budget))


def edges_in_common_neighborhood(g: Graph, x) -> int:
    """e(G[Gamma(X)]) for a pair X."""
    bits = x.bits if isinstance(x, VertexSet) else mask_of(x)
    if bits.bit_count() != 2:
        raise GraphError("expected a pair of vertices")
    u, v = bits_of(bits)
    gamma = g.rows[u] & g.rows[v]
    return sum((g.rows[w] & gamma).bit_count() for w in bits_of(gamma)) // 2


def motzkin_straus_value(g: Graph, x, tol: float = 1e-9) -> float:
    """Sum over edges ij of x_i^2 x_j^2 for a unit vector x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise ValueError("vector length does not match graph order")
    if abs(float(x @ x) - 1.0) > tol:
        raise ValueError("vector is not unit-normalised")
    if (x < -tol).any():
        raise ValueError("vector has negative entries")
    y = x * x
    return float(sum(y[i] * y[j] for i, j in g.edges()))


# -- pattern search ------------------------------------------------------------

@dataclass(frozen=True)
class PatternQuery:
    pattern: Graph
    mode: str = "subgraph"

    def __post_init__(self):
        if self.mode not in ("subgraph", "induced"):
            raise ValueError(f"mode must be 'subgraph' or 'induced', not {self.mode!r}")


def bipartition_if_complete_bipartite(p: Graph):
    """``(side_a, side_b)`` vertex lists if ``p`` is K_{a,b} with a, b >= 1."""
    if p.n < 2 or not p.rows[0]:
        return None
    b = p.rows[0]
    a = ((1 << p.n) - 1) & ~b
    for v in bits_of(a):
        if p.rows[v] != b:
            return None
    for v in bits_of(b):
        if p.rows[v] != a:
            return None
    sa, sb = list(bits_of(a)), list(bits_of(b))
    return (sa, sb) if len(sa) <= len(sb) else (sb, sa)


def _extend_independent(rows, cand: int, k: int, induced: bool, bud: _Budget) -> int | None:
    # some k-subset of cand, independent when induced; returns its mask
    if k == 0:
        return 0
    if cand.bit_count() < k:
        return None
    if not induced:
        out = 0
        for v in bits_of(cand):
            out |= 1 << v
            k -= 1
            if k == 0:
                return out
    while cand:
        if cand.bit_count() < k:
            return None
        v = (cand & -cand).bit_length() - 1
        cand &= ~(1 << v)
        bud.tick()
        rest = _extend_independent(rows, cand & ~rows[v], k - 1, induced, bud)
        if rest is not None:
            return rest | 1 << v
    return None


def _kst_search(g: Graph, a_size: int, b_size: int, induced: bool,
                force_a: int, force_b: int, bud: _Budget):
    rows, n = g.rows, g.n
    full = (1 << n) - 1
    if force_a.bit_count() > a_size or force_b.bit_count() > b_size or force_a & force_b:
        return None
    gamma_b = full
    for v in bits_of(force_b):
        gamma_b &= rows[v]
    if force_a & ~gamma_b:
        return None
    gamma_a = full
    for v in bits_of(force_a):
        gamma_a &= rows[v]
    if force_b & ~gamma_a:
        return None
    nonadj_fa = full
    nonadj_fb = full
    if induced:
        for v in bits_of(force_a):
            if rows[v] & force_a:
                return None
            nonadj_fa &= ~rows[v]
        for v in bits_of(force_b):
            if rows[v] & force_b:
                return None
            nonadj_fb &= ~rows[v]
    cand_a = gamma_b & nonadj_fa & ~force_a & ~force_b
    need_b = b_size - force_b.bit_count()

    def grow(a_mask: int, gamma: int, cand: int, k: int):
        if (gamma & ~force_b).bit_count() < need_b or force_b & ~gamma:
            return None
        if k == 0:
            pool = gamma & ~force_b & nonadj_fb & ~a_mask
            b_rest = _extend_independent(rows, pool, need_b, induced, bud)
            if b_rest is None:
                return None
            return a_mask, force_b | b_rest
        while cand:
            if cand.bit_count() < k:
                return None
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            bud.tick()
            nxt = cand & ~rows[v] if induced else cand
            hit = grow(a_mask | 1 << v, gamma & rows[v], nxt, k - 1)
            if hit is not None:
                return hit
        return None

    return grow(force_a, gamma_a, cand_a, a_size - force_a.bit_count())


def find_kst(g: Graph, s: int, t: int, induced: bool = True, anchor=None,
             budget: int = DEFAULT_BUDGET):
    """Specialised K_{s,t} search.

    Returns ``(side_s, side_t)`` as sorted vertex lists, or ``None``.  With
    ``anchor=(u, v)`` only copies containing both ``u`` and ``v`` are sought.
    """
    if s < 1 or t < 1:
        raise ValueError("K_{s,t} needs s, t >= 1")
    if s + t > g.n:
        return None
    bud = _Budget(budget)
    if anchor is None:
        placements = [(0, 0)]
    else:
        u, v = anchor
        bu, bv = 1 << u, 1 << v
        placements = []
        if g.has_edge(u, v):
            placements += [(bu, bv), (bv, bu)]
        if not induced or not g.has_edge(u, v):
            placements += [(bu | bv, 0), (0, bu | bv)]
    for fa, fb in placements:
        hit = _kst_search(g, s, t, induced, fa, fb, bud)
        if hit is not None:
            return list(bits_of(hit[0])), list(bits_of(hit[1]))
    return None


def _backtrack(g: Graph, p: Graph, induced: bool, init: dict[int, int], bud: _Budget):
    hrows, prows = g.rows, p.rows
    hdeg = g.degrees()
    base = []
    for a in range(p.n):
        da = p.degree(a)
        base.append(mask_of(w for w in range(g.n) if hdeg[w] >= da))
    mapping = dict(init)
    for a, w in mapping.items():
        if not base[a] >> w & 1:
            return None
        for b, z in mapping.items():
            if a < b:
                if prows[a] >> b & 1 and not hrows[w] >> z & 1:
                    return None
                if induced and not prows[a] >> b & 1 and hrows[w] >> z & 1:
                    return None
    used = mask_of(mapping.values())
    if len(mapping) != used.bit_count():
        return None

    def candidates(a: int, used: int) -> int:
        c = base[a] & ~used
        pa = prows[a]
        for b, w in mapping.items():
            if pa >> b & 1:
                c &= hrows[w]
            elif induced:
                c &= ~hrows[w]
        return c

    def rec(used: int):
        if len(mapping) == p.n:
            return dict(mapping)
        pick, pick_c = -1, 0
        for a in range(p.n):
            if a in mapping:
                continue
            c = candidates(a, used)
            if not c:
                return None
            if pick < 0 or c.bit_count() < pick_c.bit_count():
                pick, pick_c = a, c
        for w in bits_of(pick_c):
            bud.tick()
            mapping[pick] = w
            hit = rec(used | 1 << w)
            if hit is not None:
                return hit
            del mapping[pick]
        return None

    return rec(used)


def find_pattern(g: Graph, q: PatternQuery, anchor=None, budget: int = DEFAULT_BUDGET,
                 method: str = "auto"):
    """Embed ``q.pattern`` into ``g``; returns ``{pattern_vertex: host_vertex}`` or None.

    ``method`` is ``"generic"`` (backtracking), ``"kst"`` (specialised
    complete-bipartite search) or ``"auto"``.  With ``anchor=(u, v)`` the
    search is restricted to embeddings that use the host pair ``u, v``; in
    subgraph mode with ``uv`` an edge, only pattern edges are put on it.
    """
    p = q.pattern
    induced = q.mode == "induced"
    if p.n > g.n:
        log.debug("pattern of order %d larger than host of order %d", p.n, g.n)
        return None
    if p.n == 0:
        return {}
    sides = bipartition_if_complete_bipartite(p)
    if method == "kst" or (method == "auto" and sides is not None):
        if sides is None:
            raise ValueError("pattern is not complete bipartite")
        sa, sb = sides
        hit = find_kst(g, len(sa), len(sb), induced, anchor, budget)
        if hit is None:
            return None
        return dict(zip(sa + sb, hit[0] + hit[1]))
    if method not in ("auto", "generic", "kst"):
        raise ValueError(method)

    bud = _Budget(budget)
    if anchor is None:
        return _backtrack(g, p, induced, {}, bud)
    u, v = anchor
    host_adj = g.has_edge(u, v)
    for a in range(p.n):
        for b in range(p.n):
            if a == b:
                continue
            p_adj = p.has_edge(a, b)
            if induced and p_adj != host_adj:
                continue
            if not induced and (p_adj and not host_adj or host_adj and not p_adj):
                continue
            hit = _backtrack(g, p, induced, {a: u, b: v}, bud)
            if hit is not None:
                return hit
    return None


def contains(g: Graph, pattern: Graph, induced: bool = False, **kw) -> bool:
    mode = "induced" if induced else "subgraph"
    return find_pattern(g, PatternQuery(pattern, mode), **kw) is not None


# -- summary -----------------------------------------------------------------

@dataclass
class CountSummary:
    c4: int
    k3: int
    omega: int
    pair_moments: dict[int, int] = field(default_factory=dict)
    is_counts: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"c4": self.c4, "k3": self.k3, "omega": self.omega,
                "pair_moments": {str(k): v for k, v in self.pair_moments.items()},
                "is_counts": {str(k): v for k, v in self.is_counts.items()}}


def count_summary(g: Graph, moments=(1, 2), sizes=(1, 2, 3),
                  budget: int = DEFAULT_BUDGET) -> CountSummary:
    hist = pair_degree_histogram(g)
    return CountSummary(
        c4=count_c4(g),
        k3=count_triangles(g),
        omega=clique_number(g, budget),
        pair_moments={k: sum(c * d ** k for d, c in hist.items()) for k in moments},
        is_counts={s: independent_set_count(g, s, budget) for s in sizes},
    )


def brute_independent_set_count(g: Graph, s: int) -> int:
    """Reference count over all s-subsets; exponential, for tests."""
    return sum(1 for c in combinations(range(g.n), s)
               if all(not g.has_edge(u, v) for u, v in combinations(c, 2)))
