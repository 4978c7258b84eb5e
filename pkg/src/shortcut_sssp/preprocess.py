"""Vertex splitting so that every vertex touches at most one negative edge."""

from __future__ import annotations

from .graph import NEGATIVE_CLASSES, Graph, GraphError, NegClass, Provenance

SplitMap = dict  # new vertex u' -> origin vertex u


def thaw(g: Graph) -> int:
    """Reclassify RealNegative edges whose weight is no longer negative as
    NonNegative. Mutates ``g``; returns the number of edges moved."""
    moved = 0
    for u, row in enumerate(g.out[NegClass.REAL]):
        for v, w in [(v, w) for v, w in row.items() if w >= 0]:
            prov = g.prov.get((u, v, int(NegClass.REAL)))
            g.remove_edge(u, v, NegClass.REAL)
            g.add_edge(u, v, w, NegClass.NONNEG, prov)
            moved += 1
    return moved


def split_negative_vertices(g: Graph) -> tuple[Graph, SplitMap]:
    """Split every negative vertex u into u -> u'.

    (u, u') carries the minimum negative out-weight w1 and stays RealNegative;
    each negative out-edge (u, v) moves to (u', v) with weight w - w1 as a
    NonNegative edge. u' is a copy of u's base with shift delta(u) + w1.
    NonNegative out-edges stay on u.
    """
    if any(row for row in g.out[NegClass.IMAG]):
        raise GraphError("imaginary edges must be removed before splitting")
    out = g.copy()
    thaw(out)
    smap: SplitMap = {}
    for u in sorted(out.negative_vertices()):
        row = out.out[NegClass.REAL][u]
        heads = sorted(row, key=lambda v: (row[v], v))
        v1 = heads[0]
        w1 = row[v1]
        moved = [(v, row[v]) for v in heads]
        for v, _ in moved:
            out.remove_edge(u, v, NegClass.REAL)
        up = out.add_vertex(base=out.base(u), shift=out.shift(u) + w1)
        smap[up] = u
        out.add_edge(u, up, w1, NegClass.REAL, Provenance("split", (u, v1), (w1,)))
        for v, w in moved:
            out.add_edge(up, v, w - w1, NegClass.NONNEG,
                         Provenance("split-out", (u, v), (w, w1)))
    bad = split_form_violations(out)
    assert not bad, f"split post-condition failed at {bad[:5]}"
    return out, smap


def split_form_violations(g: Graph) -> list[int]:
    """Vertices incident to more than one negative-class edge."""
    count = [0] * g.n
    for u, v, _, _ in g.edges(NEGATIVE_CLASSES):
        count[u] += 1
        count[v] += 1
    return [v for v, c in enumerate(count) if c > 1]
