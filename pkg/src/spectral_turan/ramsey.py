"""Ramsey numbers R(H, K_t): curated values, closed forms, brute force, bounds.

Every value is an interval ``[lower, upper]``.  Threshold formulas only ever
consume ``upper``; substituting an upper bound for R keeps the theorems true
because their constants only need to be *at least* a Ramsey number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations, permutations
from math import comb, factorial

import numpy as np

from .graph import Graph, bits_of
from .counting import clique_number

BRUTE_MAX_ORDER = 7


@dataclass(frozen=True)
class RamseyValue:
    lower: int
    upper: int
    source: str
    note: str = ""
    pattern: str = ""
    t: int = 0

    def __post_init__(self):
        if not 1 <= self.lower <= self.upper:
            raise ValueError(f"bad Ramsey interval [{self.lower}, {self.upper}]")
        if self.source not in ("table", "closed_form", "brute_force", "user_bound", "bound"):
            raise ValueError(f"unknown source {self.source!r}")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_dict(self) -> dict:
        return {"pattern": self.pattern, "t": self.t, "lower": self.lower,
                "upper": self.upper, "exact": self.exact, "source": self.source,
                "note": self.note}


def load_table(text: str | None = None) -> dict[tuple[int, int], tuple[int, str]]:
    """Parse ``Kp t value note`` lines into ``{(p, t): (value, note)}`` (both orders)."""
    if text is None:
        text = resources.files("spectral_turan").joinpath("data/ramsey_table.txt").read_text()
    table = {}
    for no, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 3)
        if len(parts) < 3 or not parts[0].upper().startswith("K"):
            raise ValueError(f"ramsey table line {no}: expected 'Kp t value note'")
        p, t, val = int(parts[0][1:]), int(parts[1]), int(parts[2])
        note = parts[3] if len(parts) > 3 else ""
        table[(p, t)] = table[(t, p)] = (val, note)
    return table


CANON_MAX_PERMS = 200_000


def _refined_classes(h: Graph) -> list[list[int]]:
    # colour refinement: split by (colour, sorted neighbour colours) until stable
    colour = [0] * h.n
    while True:
        sig = [(colour[v], tuple(sorted(colour[w] for w in h.neighbors(v)))) for v in range(h.n)]
        ranks = {s: k for k, s in enumerate(sorted(set(sig)))}
        new = [ranks[sig[v]] for v in range(h.n)]
        if len(set(new)) == len(set(colour)):
            break
        colour = new
    classes: dict[int, list[int]] = {}
    for v in range(h.n):
        classes.setdefault(colour[v], []).append(v)
    return [classes[c] for c in sorted(classes)]


def canonical_key(h: Graph) -> str | None:
    """Isomorphism-invariant key, or None when classification is too costly.

    Vertices are split into colour-refinement classes (an invariant ordered
    partition); the key is the minimal edge code over all orderings that
    permute within classes.  Gives up above ``CANON_MAX_PERMS`` orderings.
    """
    from .io import encode_graph6

    classes = _refined_classes(h)
    cost = 1
    for c in classes:
        cost *= factorial(len(c))
        if cost > CANON_MAX_PERMS:
            return None
    best = None

    def rec(ci: int, order: list[int]):
        nonlocal best
        if ci == len(classes):
            pos = {v: i for i, v in enumerate(order)}
            code = tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in h.edges()))
            if best is None or code < best:
                best = code
            return
        for perm in permutations(classes[ci]):
            rec(ci + 1, order + list(perm))

    rec(0, [])
    canon = Graph.from_edges(h.n, best or ())
    return encode_graph6(canon)


def _is_complete(h: Graph) -> bool:
    return h.edge_count == h.n * (h.n - 1) // 2


def _is_p3(h: Graph) -> bool:
    return h.n == 3 and h.edge_count == 2


class RamseyOracle:
    """Lookup with the curated table plus optional user-supplied upper bounds."""

    def __init__(self, table=None):
        self.table = load_table() if table is None else table
        self.user: dict[tuple[str, int], int] = {}

    def set_upper(self, h: Graph, t: int, value: int) -> None:
        key = canonical_key(h)
        if key is None:
            raise ValueError("pattern too symmetric to classify; user bound not recorded")
        lower = self._lookup(h, t).lower
        if int(value) < lower:
            raise ValueError(f"user bound {value} below proven lower bound {lower}")
        self.user[(key, t)] = int(value)

    def clique_upper(self, p: int, q: int) -> tuple[int, str]:
        return _clique_upper(p, q, tuple(sorted(self.table.items())))

    def lookup(self, h: Graph, t: int) -> RamseyValue:
        if h.n < 1:
            raise ValueError("pattern must have at least one vertex")
        if t < 1:
            raise ValueError("t must be at least 1")
        from .io import encode_graph6

        key = canonical_key(h) if self.user else None
        rv = self._lookup(h, t)
        note = rv.note
        if self.user and key is None:
            note += "; pattern not classified, user bounds ignored"
        rv = RamseyValue(rv.lower, rv.upper, rv.source, note, key or encode_graph6(h), t)
        if key is not None and (key, t) in self.user:
            ub = self.user[(key, t)]
            if ub < rv.lower:
                raise ValueError(f"user bound {ub} below proven lower bound {rv.lower}")
            if ub < rv.upper:
                rv = RamseyValue(rv.lower, ub, "user_bound", "supplied via --ramsey-upper", key, t)
        return rv

    def _lookup(self, h: Graph, t: int) -> RamseyValue:
        v = h.n
        if t == 1:
            return RamseyValue(1, 1, "closed_form", "R(H,K_1)=1")
        if h.edge_count == 0:
            return RamseyValue(v, v, "closed_form", "edgeless H: R=v(H)")
        if t == 2:
            return RamseyValue(v, v, "closed_form", "R(H,K_2)=v(H)")
        if _is_complete(h):
            if v == 2:
                return RamseyValue(t, t, "closed_form", "R(K_2,K_t)=t")
            if (v, t) in self.table:
                val, note = self.table[(v, t)]
                return RamseyValue(val, val, "table", note)
            ub, how = self.clique_upper(v, t)
            lb = max(v, t, (v - 1) * (t - 1) + 1)
            return RamseyValue(lb, ub, "bound", how)
        if _is_p3(h):
            return RamseyValue(2 * t - 1, 2 * t - 1, "closed_form", "R(P3,K_t)=2t-1")
        omega = clique_number(h)
        lb = max(v, t, (omega - 1) * (t - 1) + 1)
        if (v, t) in self.table:
            ub, how = self.table[(v, t)][0], f"H in K_{v}; table"
        else:
            ub, how = self.clique_upper(v, t)
            how = f"H in K_{v}; {how}"
        return RamseyValue(lb, ub, "bound", how)


@lru_cache(maxsize=None)
def _clique_upper(p: int, q: int, table_items) -> tuple[int, str]:
    table = dict(table_items)

    @lru_cache(maxsize=None)
    def up(a: int, b: int) -> int:
        if a == 1 or b == 1:
            return 1
        if a == 2:
            return b
        if b == 2:
            return a
        if (a, b) in table:
            return table[(a, b)][0]
        return up(a - 1, b) + up(a, b - 1)

    ub = up(p, q)
    cap = comb(p + q - 2, p - 1)
    return min(ub, cap), "R(p,q)<=R(p-1,q)+R(p,q-1) over table, capped by binom(p+q-2,p-1)"


_default = RamseyOracle()


def default_oracle() -> RamseyOracle:
    return _default


def ramsey_lookup(h: Graph, t: int, oracle: RamseyOracle | None = None) -> RamseyValue:
    """R(H, K_t) as an interval with its provenance."""
    return (oracle or _default).lookup(h, t)


# -- brute force --------------------------------------------------------------

def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(combinations(range(n), 2))}


def embedding_masks(h: Graph, n: int) -> np.ndarray:
    """Distinct edge masks of copies of ``h`` in K_n (as uint64)."""
    idx = _pair_index(n)
    hedges = list(h.edges())
    masks = set()
    for img in permutations(range(n), h.n):
        m = 0
        for a, b in hedges:
            x, y = img[a], img[b]
            m |= 1 << idx[(x, y) if x < y else (y, x)]
        masks.add(m)
    return np.array(sorted(masks), dtype=np.uint64)


def subset_pair_masks(n: int, k: int) -> np.ndarray:
    """For each k-subset of range(n), the mask of its internal pairs."""
    idx = _pair_index(n)
    out = []
    for sub in combinations(range(n), k):
        m = 0
        for pair in combinations(sub, 2):
            m |= 1 << idx[pair]
        out.append(m)
    return np.array(out, dtype=np.uint64)


def _all_have_h_or_independent(h: Graph, t: int, n: int, chunk: int = 1 << 16) -> bool:
    npairs = n * (n - 1) // 2
    copies = embedding_masks(h, n) if h.n <= n else np.zeros(0, dtype=np.uint64)
    tsets = subset_pair_masks(n, t) if t <= n else np.zeros(0, dtype=np.uint64)
    total = 1 << npairs
    for start in range(0, total, chunk):
        gs = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        ok = np.zeros(gs.shape, dtype=bool)
        for m in tsets:
            ok |= (gs & m) == 0
        for c in copies:
            if ok.all():
                break
            ok |= (gs & c) == c
        if not ok.all():
            return False
    return True


def ramsey_brute_force(h: Graph, t: int, n_max: int = BRUTE_MAX_ORDER,
                       oracle: RamseyOracle | None = None) -> RamseyValue:
    """Smallest n <= n_max at which every labelled n-vertex graph contains H or
    an independent t-set; interval ``[n_max+1, known upper]`` if none."""
    if n_max > BRUTE_MAX_ORDER:
        raise ValueError(f"n_max={n_max} > {BRUTE_MAX_ORDER}: order 8 alone has "
                         f"2^28 labelled graphs, beyond the exhaustive budget")
    if t < 1:
        raise ValueError("t must be at least 1")
    from .io import encode_graph6

    key = encode_graph6(h)
    for n in range(1, n_max + 1):
        if _all_have_h_or_independent(h, t, n):
            return RamseyValue(n, n, "brute_force", f"exhaustive over orders <= {n}", key, t)
    known = ramsey_lookup(h, t, oracle)
    return RamseyValue(max(n_max + 1, known.lower), max(known.upper, n_max + 1), "brute_force",
                       f"no order <= {n_max} forces H or an independent {t}-set", key, t)
