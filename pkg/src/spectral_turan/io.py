"""graph6 and edge-list reading/writing, plus named built-in graphs."""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Iterator

from . import graph as _g
from .graph import Graph, GraphError

HEADER = ">>graph6<<"


class Graph6Error(GraphError):
    """Malformed graph6 record; ``offset`` is the byte position of the fault."""

    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} (byte {offset})")
        self.offset = offset


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def encode_graph6(g: Graph) -> str:
    """graph6 record of ``g`` (no header, no newline)."""
    out = [_encode_n(g.n)]
    acc = nbits = 0
    rows = g.rows
    for j in range(1, g.n):
        rj = rows[j]
        for i in range(j):
            acc = (acc << 1) | (rj >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str | bytes) -> Graph:
    """Decode one graph6 record; an optional ``>>graph6<<`` header is skipped."""
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise Graph6Error("non-ASCII byte", exc.start) from None
    data = text.rstrip("\r\n")
    base = 0
    if data.startswith(HEADER):
        base = len(HEADER)
    for k in range(base, len(data)):
        if not 63 <= ord(data[k]) <= 126:
            raise Graph6Error(f"non-printable or out-of-range byte {ord(data[k])!r}", k)
    if len(data) == base:
        raise Graph6Error("empty record", base)

    pos = base
    if data[pos] != "~":
        n = ord(data[pos]) - 63
        pos += 1
    else:
        if pos + 1 < len(data) and data[pos + 1] == "~":
            width, pos = 6, pos + 2
        else:
            width, pos = 3, pos + 1
        if pos + width > len(data):
            raise Graph6Error("truncated length prefix", pos)
        n = 0
        for k in range(width):
            n = (n << 6) | (ord(data[pos + k]) - 63)
        pos += width
        if (width == 3 and n < 63) or (width == 6 and n < 258048):
            raise Graph6Error("non-canonical length prefix", base)
    if n > _g.max_order():
        raise Graph6Error(f"order {n} exceeds cap {_g.max_order()}", base)

    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    payload = data[pos:]
    if len(payload) < need:
        raise Graph6Error(f"payload too short: {len(payload)} of {need} bytes", pos + len(payload))
    if len(payload) > need:
        raise Graph6Error("trailing garbage", pos + need)

    rows = [0] * n
    i, j = 0, 1
    k = 0
    for c_idx, ch in enumerate(payload):
        val = ord(ch) - 63
        for shift in range(5, -1, -1):
            bit = val >> shift & 1
            if k >= nbits:
                if bit:
                    raise Graph6Error("non-zero padding bits", pos + c_idx)
                continue
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph._trusted(n, rows)


class InputError(GraphError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``; errors carry line numbers."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [(no, ln) for no, ln in enumerate(lines, 1) if ln]
    if not lines:
        raise InputError("empty edge-list input", 1)
    no, head = lines[0]
    try:
        n, m = (int(x) for x in head.split())
    except ValueError:
        raise InputError("expected 'n m' header", no) from None
    if n < 0 or n > _g.max_order():
        raise InputError(f"order {n} outside 0..{_g.max_order()}", no)
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else no
        raise InputError(f"header announces {m} edges but {len(body)} lines follow", last)
    edges = []
    for no, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise InputError("expected 'u v'", no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError("non-integer vertex", no) from None
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"endpoint out of range 0..{n - 1}", no)
        if u == v:
            raise InputError(f"self-loop at {u}", no)
        edges.append((u, v))
    return _g.from_edge_list(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


_EDGE_HEADER = re.compile(r"^\s*\d+\s+\d+\s*$")


def iter_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    for no, line in enumerate(lines, 1):
        s = line.strip()
        if not s:
            continue
        if s == HEADER:
            continue
        try:
            yield parse_graph6(s)
        except GraphError as exc:
            raise InputError(str(exc), no) from None


def read_graphs(source: str | Path) -> list[Graph]:
    """Load graphs from a file (graph6 lines or one edge list) or a built-in name."""
    name = str(source)
    if not Path(name).exists():
        try:
            return [named_graph(name)]
        except KeyError:
            raise FileNotFoundError(name) from None
    text = Path(name).read_text()
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    if _EDGE_HEADER.match(first):
        return [parse_edge_list(text)]
    return list(iter_graph6_lines(text.splitlines()))


def write_graph6(graphs: Iterable[Graph], path: str | Path, header: bool = False) -> None:
    with open(path, "w") as fh:
        for g in graphs:
            fh.write((HEADER if header else "") + encode_graph6(g) + "\n")


_NAMED = re.compile(r"^(?P<fam>[kcpe])_?\{?(?P<a>\d+)(?:,(?P<b>\d+))?\}?$")


def named_graph(name: str) -> Graph:
    """Built-in graphs: petersen, heawood, and K<n>, C<n>, P<n>, E<n>, K<a>,<b>.

    ``k33`` and ``k88`` are accepted as K_{3,3} and K_{8,8}.
    """
    key = name.strip().lower()
    if key == "petersen":
        return _g.petersen_graph()
    if key == "heawood":
        return _g.heawood_graph()
    if key in ("k33", "k88", "k22", "k23", "k44"):
        return _g.complete_bipartite(int(key[1]), int(key[2]))
    m = _NAMED.match(key)
    if not m:
        raise KeyError(name)
    fam, a, b = m["fam"], int(m["a"]), m["b"]
    if b is not None:
        if fam != "k":
            raise KeyError(name)
        return _g.complete_bipartite(a, int(b))
    if fam == "k":
        return _g.complete_graph(a)
    if fam == "c":
        return _g.cycle_graph(a)
    if fam == "p":
        return _g.path_graph(a)
    return _g.empty_graph(a)
