"""Extended DIMACS shortest-path format: ``p sp n m`` then ``a tail head w``
lines, 1-indexed, ``c`` comments."""

from __future__ import annotations

import math

from .graph import Graph, from_edges


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_graph(text: str) -> Graph:
    n = m = None
    arcs: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(parts) != 4 or parts[1] != "sp":
                raise ParseError(lineno, "expected 'p sp <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(lineno, "non-integer header field") from None
            if n < 0 or m < 0:
                raise ParseError(lineno, "negative header field")
        elif tag == "a":
            if n is None:
                raise ParseError(lineno, "arc before header")
            if len(parts) != 4:
                raise ParseError(lineno, "expected 'a <tail> <head> <weight>'")
            try:
                u, v, w = int(parts[1]), int(parts[2]), float(parts[3])
            except ValueError:
                raise ParseError(lineno, "malformed arc") from None
            if not math.isfinite(w):
                raise ParseError(lineno, "weight must be finite")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(lineno, f"vertex {x} out of range 1..{n}")
            arcs.append((u - 1, v - 1, w))
        else:
            raise ParseError(lineno, f"unknown line type {tag!r}")
    if n is None:
        raise ParseError(0, "missing header")
    if len(arcs) != m:
        raise ParseError(0, f"header promises {m} arcs, found {len(arcs)}")
    return from_edges(n, arcs)


def fmt_num(x: float) -> str:
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def serialize_graph(g: Graph) -> str:
    """Canonical form: arcs sorted by (tail, head, weight)."""
    arcs = sorted((u, v, w) for u, v, w, _ in g.edges())
    lines = [f"p sp {g.n} {len(arcs)}"]
    lines += [f"a {u + 1} {v + 1} {fmt_num(w)}" for u, v, w in arcs]
    return "\n".join(lines) + "\n"


def format_distances(dist) -> str:
    return "".join(f"d {v + 1} {fmt_num(x)}\n" for v, x in enumerate(dist))


def format_cycle(walk, total: float) -> str:
    return "negcycle " + " ".join(str(v + 1) for v in walk) + f" {fmt_num(total)}\n"


def parse_distances(text: str, n: int) -> list[float]:
    dist: list[float | None] = [None] * n
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] != "d" or len(parts) != 3:
            raise ParseError(lineno, "expected 'd <v> <dist>'")
        try:
            v, x = int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(lineno, "malformed distance line") from None
        if not 1 <= v <= n:
            raise ParseError(lineno, f"vertex {v} out of range 1..{n}")
        if dist[v - 1] is not None:
            raise ParseError(lineno, f"vertex {v} listed twice")
        dist[v - 1] = x
    missing = [i + 1 for i, x in enumerate(dist) if x is None]
    if missing:
        raise ParseError(0, f"no distance for vertices {missing[:5]}")
    return dist  # type: ignore[return-value]
