"""Simple undirected graphs stored as bitset rows.

Each adjacency row is a Python ``int`` whose bit ``j`` is set when the vertex
is joined to ``j``.  Vertices are ``0..n-1``.  Every counting routine in the
package works on row intersections (``rows[u] & rows[v]``) and popcounts.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_MAX_ORDER = 4096
_max_order = int(os.environ.get("BTR_MAX_ORDER", DEFAULT_MAX_ORDER))


def max_order() -> int:
    return _max_order


def set_max_order(cap: int) -> None:
    """Change the hard cap on graph order (default 4096)."""
    global _max_order
    if cap < 0:
        raise ValueError("order cap must be non-negative")
    _max_order = int(cap)


class GraphError(ValueError):
    pass


def bits_of(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``0..n-1`` held as a bitmask."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise GraphError(f"vertex set {self.bits:#x} not inside 0..{self.n - 1}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        vs = list(vertices)
        for v in vs:
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range for order {n}")
        return cls(n, mask_of(vs))

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return bits_of(self.bits)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self.bits >> v & 1)

    def to_list(self) -> list[int]:
        return list(bits_of(self.bits))

    def __repr__(self) -> str:
        return f"VertexSet({self.to_list()})"


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph.

    Use :meth:`from_edges` or :func:`from_edge_list` rather than the raw
    constructor; the constructor trusts ``rows`` only after validating them.
    """

    n: int
    rows: tuple[int, ...]
    edge_count: int = field(default=-1)

    def __post_init__(self):
        if not 0 <= self.n <= _max_order:
            raise GraphError(f"order {self.n} outside 0..{_max_order}")
        if len(self.rows) != self.n:
            raise GraphError("row count does not match order")
        full = (1 << self.n) - 1
        total = 0
        for i, row in enumerate(self.rows):
            if row < 0 or row & ~full:
                raise GraphError(f"row {i} has bits outside 0..{self.n - 1}")
            if row >> i & 1:
                raise GraphError(f"self-loop at vertex {i}")
            for j in bits_of(row):
                if not self.rows[j] >> i & 1:
                    raise GraphError(f"asymmetric adjacency between {i} and {j}")
            total += row.bit_count()
        if self.edge_count == -1:
            object.__setattr__(self, "edge_count", total // 2)
        elif self.edge_count != total // 2:
            raise GraphError("cached edge count is wrong")

    @classmethod
    def _trusted(cls, n: int, rows: Sequence[int], m: int | None = None) -> "Graph":
        # skip validation; callers guarantee symmetric, loop-free rows
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "rows", tuple(rows))
        if m is None:
            m = sum(r.bit_count() for r in rows) // 2
        object.__setattr__(g, "edge_count", m)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return from_edge_list(n, edges)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_adjacency(cls, a) -> "Graph":
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphError("adjacency matrix must be square")
        n = a.shape[0]
        rows = []
        for i in range(n):
            rows.append(mask_of(int(j) for j in np.flatnonzero(a[i])))
        return cls(n, tuple(rows))

    @property
    def order(self) -> int:
        return self.n

    @property
    def size(self) -> int:
        return self.edge_count

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def neighbors(self, v: int) -> list[int]:
        return list(bits_of(self.rows[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.rows):
            for j in bits_of(row >> (i + 1)):
                yield i, i + 1 + j

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1
        return a

    def vertex_set(self, vertices: Iterable[int] = ()) -> VertexSet:
        return VertexSet.of(self.n, vertices)

    def components(self) -> list[int]:
        """Connected components as bitmasks, ordered by smallest vertex."""
        seen = 0
        comps = []
        for v in range(self.n):
            if seen >> v & 1:
                continue
            comp = frontier = 1 << v
            while frontier:
                nxt = 0
                for u in bits_of(frontier):
                    nxt |= self.rows[u]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from vertex pairs; duplicates collapse."""
    if n < 0:
        raise GraphError("negative order")
    if n > _max_order:
        raise GraphError(f"order {n} exceeds cap {_max_order}")
    rows = [0] * n
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph._trusted(n, rows)


def _as_mask(g: Graph, x) -> int:
    if isinstance(x, VertexSet):
        if x.n != g.n:
            raise GraphError("vertex set built for a different order")
        return x.bits
    if isinstance(x, int):
        return x
    return g.vertex_set(x).bits


def common_neighborhood(g: Graph, x) -> VertexSet:
    """Vertices joined to every vertex of ``x``; ``len`` of the result is d(X)."""
    bits = _as_mask(g, x)
    if bits == 0:
        raise GraphError("common neighbourhood of the empty set is undefined")
    if bits >> g.n:
        raise GraphError("vertex set not inside the graph")
    acc = (1 << g.n) - 1
    for v in bits_of(bits):
        acc &= g.rows[v]
    return VertexSet(g.n, acc)


def induced_subgraph(g: Graph, s) -> Graph:
    """G[S], with vertex i of the result being the i-th smallest member of S."""
    bits = _as_mask(g, s)
    members = list(bits_of(bits))
    if members and members[-1] >= g.n:
        raise GraphError("vertex set not inside the graph")
    index = {v: i for i, v in enumerate(members)}
    rows = []
    for v in members:
        r = 0
        for w in bits_of(g.rows[v] & bits):
            r |= 1 << index[w]
        rows.append(r)
    return Graph._trusted(len(members), rows)


def delete_vertices(g: Graph, vertices: Iterable[int]) -> Graph:
    drop = mask_of(vertices)
    return induced_subgraph(g, ((1 << g.n) - 1) & ~drop)


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    rows = [full & ~r & ~(1 << i) for i, r in enumerate(g.rows)]
    return Graph._trusted(g.n, rows, g.n * (g.n - 1) // 2 - g.edge_count)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Graph with vertex ``v`` renamed ``perm[v]``."""
    rows = [0] * g.n
    for u, v in g.edges():
        a, b = perm[u], perm[v]
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    return Graph._trusted(g.n, rows, g.edge_count)


# -- families ---------------------------------------------------------------

def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph._trusted(n, [full & ~(1 << i) for i in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph.empty(n)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    """Path on ``n`` vertices (so P3 has two edges)."""
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return from_edge_list(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def kneser_graph(m: int, k: int) -> Graph:
    subsets = [frozenset(c) for c in combinations(range(m), k)]
    edges = [(i, j) for i, j in combinations(range(len(subsets)), 2)
             if not subsets[i] & subsets[j]]
    return from_edge_list(len(subsets), edges)


def petersen_graph() -> Graph:
    return kneser_graph(5, 2)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def projective_plane_points(q: int) -> list[tuple[int, int, int]]:
    """Nonzero triples over GF(q) with first nonzero coordinate 1."""
    pts = []
    for a in range(q):
        for b in range(q):
            for c in range(q):
                v = (a, b, c)
                lead = next((x for x in v if x), 0)
                if lead == 1:
                    pts.append(v)
    return pts


def pp_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q) for a prime ``q``.

    Points occupy vertices ``0..N-1`` and lines ``N..2N-1`` with
    ``N = q^2 + q + 1``.  The graph is (q+1)-regular with girth 6.
    """
    if not _is_prime(q):
        raise GraphError(f"q={q} is not prime; only prime fields are supported")
    pts = projective_plane_points(q)
    num = len(pts)
    if 2 * num > _max_order:
        raise GraphError(f"PG(2,{q}) incidence graph exceeds the order cap")
    edges = []
    for i, p in enumerate(pts):
        for j, line in enumerate(pts):
            if (p[0] * line[0] + p[1] * line[1] + p[2] * line[2]) % q == 0:
                edges.append((i, num + j))
    return from_edge_list(2 * num, edges)


def heawood_graph() -> Graph:
    return pp_incidence(2)
