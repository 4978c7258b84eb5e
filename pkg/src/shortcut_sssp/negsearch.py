"""Balanced forward/backward searches from each negative vertex.

Both searches run Dijkstra on implicit layered graphs whose nodes are
(vertex, layer) pairs, i in 0..h. The out graph follows edges forward, the in
graph follows them backward; a negative-class edge moves one layer up, a
NonNegative edge stays in the layer, and every vertex has a free self-edge
to the next layer. Reweighting by ``phi_out(v_i) = -d^{h-i}(v, V)`` (resp.
``phi_in(v_i) = -d^{h-i}(V, v)``) makes every edge non-negative, so Dijkstra
applies. Edges are generated on demand and inserted lazily: a processed node
keeps exactly one candidate edge in the heap at a time.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import NEGATIVE_CLASSES, Graph, NegClass
from .hop import hop_sssp, hop_sssp_reverse

INF = math.inf
OUT, IN = "out", "in"


@dataclass
class LayeredSearchContext:
    g: Graph
    h: int
    d_out_layers: np.ndarray   # [j][v] = d^j(v, V)
    d_in_layers: np.ndarray    # [j][v] = d^j(V, v)
    _adj: dict = field(default_factory=dict, repr=False)

    def phi_out(self, v: int, i: int) -> float:
        return -self.d_out_layers[self.h - i][v]

    def phi_in(self, v: int, i: int) -> float:
        return -self.d_in_layers[self.h - i][v]

    def edges(self, side: str, v: int, i: int) -> list[tuple[float, int, int]]:
        """Reweighted out-edges of node (v, i), sorted by (weight, layer, vertex)."""
        key = (side, v, i)
        hit = self._adj.get(key)
        if hit is not None:
            return hit
        g, h = self.g, self.h
        if side == OUT:
            d, nn, ng = self.d_out_layers, g.out[NegClass.NONNEG][v], _neg_row(g.out, v)
        else:
            d, nn, ng = self.d_in_layers, g.inn[NegClass.NONNEG][v], _neg_row(g.inn, v)
        here = d[h - i]
        pv = here[v]
        lst = [(w - pv + here[x], i, x) for x, w in nn.items()]
        if i < h:
            up = d[h - i - 1]
            lst.extend((w - pv + up[x], i + 1, x) for x, w in ng)
            lst.append((up[v] - pv, i + 1, v))
        lst.sort()
        self._adj[key] = lst
        return lst


def _neg_row(adj, v):
    return [(x, w) for cls in NEGATIVE_CLASSES for x, w in adj[cls][v].items()]


def build_context(g: Graph, h: int, stats=None) -> LayeredSearchContext:
    everything = range(g.n)
    d_out = hop_sssp_reverse(g, everything, h, stats).layers
    d_in = hop_sssp(g, everything, h, stats).layers
    return LayeredSearchContext(g, h, d_out, d_in)


def context_violations(ctx: LayeredSearchContext) -> list[tuple]:
    """Layered edges whose reweighted weight is negative (should be none)."""
    bad = []
    for side in (OUT, IN):
        for v in range(ctx.g.n):
            for i in range(ctx.h + 1):
                for w, j, x in ctx.edges(side, v, i):
                    if w < 0:
                        bad.append((side, v, i, x, j, w))
    return bad


def unique_negative_head(g: Graph, r: int) -> tuple[int, float]:
    row = g.out[NegClass.REAL][r]
    if len(row) != 1:
        raise ValueError(f"vertex {r} needs exactly one RealNegative out-edge, has {len(row)}")
    (rp, w), = row.items()
    return rp, w


@dataclass
class SearchResult:
    r: int
    delta: float
    v_out_tilde: dict[int, float]     # v -> min decoded out value over processed copies
    v_in_tilde: dict[int, float]      # v -> min decoded d^i(v, r) over processed copies
    strict_side: str | None
    exhausted: bool = False
    out_values: dict = field(default_factory=dict)   # (v, i) -> decoded value
    in_values: dict = field(default_factory=dict)
    scans: int = 0
    heap_ops: int = 0

    @property
    def size(self) -> int:
        return len(self.v_out_tilde) + len(self.v_in_tilde)


class _LazyDijkstra:
    """Dijkstra from initial node labels over ctx edges, with one heap entry
    per processed node."""

    def __init__(self, ctx: LayeredSearchContext, side: str, seeds):
        self.ctx, self.side = ctx, side
        self.dist: dict[tuple[int, int], float] = {}
        self.ptr: dict[tuple[int, int], int] = {}
        self.heap = [(d, i, x, ()) for d, i, x in seeds]
        heapq.heapify(self.heap)
        self.scans = 0
        self.heap_ops = len(self.heap)

    def _list(self, node):
        return self.ctx.edges(self.side, node[0], node[1])

    def _push_next(self, node):
        lst = self._list(node)
        p = self.ptr[node]
        d = self.dist[node]
        while p < len(lst):
            w, i, x = lst[p]
            self.scans += 1
            if (x, i) not in self.dist:
                heapq.heappush(self.heap, (d + w, i, x, node))
                self.heap_ops += 1
                self.ptr[node] = p
                return
            p += 1
        self.ptr[node] = p

    def top(self) -> float:
        heap = self.heap
        while heap:
            key, i, x, src = heap[0]
            if (x, i) not in self.dist:
                return key
            heapq.heappop(heap)
            if src:
                self.ptr[src] += 1
                self._push_next(src)
        return INF

    def step(self) -> tuple[int, int, float]:
        key, i, x, src = heapq.heappop(self.heap)
        node = (x, i)
        self.dist[node] = key
        self.ptr[node] = 0
        self._push_next(node)
        if src:
            self.ptr[src] += 1
            self._push_next(src)
        return x, i, key


def search_from(ctx: LayeredSearchContext, r: int) -> SearchResult:
    g = ctx.g
    if not g.out[NegClass.REAL][r]:
        raise ValueError(f"{r} is not a negative vertex")
    rp, wr = unique_negative_head(g, r)
    # The extra edge (r_0, r'_0) may be negative. Seeding r'_0 with its weight
    # instead of relaxing it from r_0 keeps pops in non-decreasing order.
    special = wr + ctx.phi_out(r, 0) - ctx.phi_out(rp, 0)
    out = _LazyDijkstra(ctx, OUT, [(0.0, 0, r), (special, 0, rp)])
    inn = _LazyDijkstra(ctx, IN, [(0.0, 0, r)])
    phi_out_r, phi_in_r = ctx.phi_out(r, 0), ctx.phi_in(r, 0)
    bound = phi_out_r + phi_in_r
    v_out: dict[int, float] = {}
    v_in: dict[int, float] = {}
    out_vals: dict = {}
    in_vals: dict = {}
    last = None
    while True:
        d_out, d_in = out.top(), inn.top()
        if d_out + d_in >= bound:
            break
        if len(v_in) < len(v_out):
            v, i, d = inn.step()
            val = d - phi_in_r + ctx.phi_in(v, i)
            in_vals[(v, i)] = val
            if val < v_in.get(v, INF):
                v_in[v] = val
            last = IN
        else:
            v, i, d = out.step()
            val = d + ctx.phi_out(v, i) - phi_out_r
            out_vals[(v, i)] = val
            if val < v_out.get(v, INF):
                v_out[v] = val
            last = OUT
    d_out, d_in = out.top(), inn.top()
    if last == IN:
        delta = -d_out + phi_out_r
    else:
        delta = d_in - phi_in_r
    exhausted = d_out == INF or d_in == INF
    return SearchResult(r, delta, v_out, v_in, last, exhausted, out_vals, in_vals,
                        out.scans + inn.scans, out.heap_ops + inn.heap_ops)


# -- verification -------------------------------------------------------------

def search_quantities(g: Graph, h: int, r: int, D=None):
    """Brute-force (P_out, P_in) per vertex.

    P_out(v) = min_i D_out(v, i) + d^{h-i}(v, V) where D_out(v, i) is
    min(d^i(r, v), w(r, r') + d^i(r', v)); P_in(v) = min_i d^i(v, r) + d^{h-i}(V, v).
    """
    from .oracle import brute_hop_all
    if D is None:
        D = brute_hop_all(g, h)
    rp, wr = unique_negative_head(g, r)
    to_any = D.min(axis=2)     # [j][v] = d^j(v, V)
    from_any = D.min(axis=1)   # [j][v] = d^j(V, v)
    n = g.n
    p_out = np.full(n, INF)
    p_in = np.full(n, INF)
    for i in range(h + 1):
        dout = np.minimum(D[i, r, :], wr + D[i, rp, :])
        p_out = np.minimum(p_out, dout + to_any[h - i])
        p_in = np.minimum(p_in, D[i, :, r] + from_any[h - i])
    return p_out, p_in


def verify_search(g: Graph, h: int, res: SearchResult, D=None) -> list[str]:
    p_out, p_in = search_quantities(g, h, res.r, D)
    delta = res.delta
    bad = []
    for v in range(g.n):
        if v in res.v_out_tilde:
            if not p_out[v] <= -delta:
                bad.append(f"(1) v={v}: {p_out[v]} > {-delta}")
            elif res.strict_side == OUT and not p_out[v] < -delta:
                bad.append(f"(5) v={v}: out side not strict")
        elif not p_out[v] >= -delta:
            bad.append(f"(2) v={v}: {p_out[v]} < {-delta}")
        if v in res.v_in_tilde:
            if not p_in[v] <= delta:
                bad.append(f"(3) v={v}: {p_in[v]} > {delta}")
            elif res.strict_side == IN and not p_in[v] < delta:
                bad.append(f"(5) v={v}: in side not strict")
        elif not p_in[v] >= delta:
            bad.append(f"(4) v={v}: {p_in[v]} < {delta}")
    if (res.v_out_tilde or res.v_in_tilde) and res.strict_side not in (OUT, IN):
        bad.append("(5) strict side missing")
    if abs(len(res.v_out_tilde) - len(res.v_in_tilde)) > 1:
        bad.append("(6) unbalanced")
    return bad
