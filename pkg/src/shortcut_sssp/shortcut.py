"""Auxiliary graph with Steiner hubs, and three shortcutting strategies.

For every negative vertex r a Steiner vertex r~ is added. Edges into r~ carry
d^0(v, r) - Delta_r and edges out of r~ carry d1(r, v) + Delta_r, where d1 only
counts walks that leave r through its negative edge (r, r'). Negative edges at
a Steiner vertex are imaginary. A strategy then adds NonNegative edges (and
vertex copies) until every two-edge path made of one imaginary edge and one
NonNegative edge of Gamma with non-negative total has a NonNegative-only
replacement of at most the same weight, and finally drops the imaginary edges.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .graph import Graph, NegClass, Provenance, add_copy
from .negsearch import SearchResult, unique_negative_head

INF = math.inf
NN, REAL, IMAG = NegClass.NONNEG, NegClass.REAL, NegClass.IMAG


@dataclass
class AuxGraph:
    graph: Graph
    n_gamma: int
    steiner_of: dict[int, int]
    delta: dict[int, float]
    v_out: dict[int, dict[int, float]]     # r -> {v: d1(r, v)} with d1 < -Delta
    v_in: dict[int, dict[int, float]]      # r -> {v: d0(v, r)} with d0 < Delta
    tilde_out: dict[int, set[int]]
    tilde_in: dict[int, set[int]]
    imaginary: list[tuple[int, int]] = field(default_factory=list)

    def size(self, r: int) -> int:
        return len(self.tilde_out[r]) + len(self.tilde_in[r])


@dataclass(frozen=True)
class LocallyNegativePath:
    u: int
    mid: int
    w: int
    weight: float
    side: str          # "in": u -> v -> r~, "out": r~ -> v -> w


def _bounded_dijkstra(g: Graph, src: int, bound: float, reverse: bool, n_lim: int) -> dict[int, float]:
    """NonNegative-only distances from (or, reversed, to) ``src`` that are
    strictly below ``bound``, restricted to vertices < n_lim."""
    adj = g.inn[NN] if reverse else g.out[NN]
    dist = {src: 0.0}
    done: dict[int, float] = {}
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done or d > dist[u]:
            continue
        if d >= bound:
            break
        done[u] = d
        for v, w in adj[u].items():
            nd = d + w
            if v < n_lim and nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return done


def build_aux_graph(gamma: Graph, results: dict[int, SearchResult], stats=None) -> AuxGraph:
    """Steps (S1)-(S5) on the reweighted graph ``gamma``."""
    g = gamma.copy()
    n0 = gamma.n
    N = sorted(results)
    aux = AuxGraph(g, n0, {}, {}, {}, {}, {}, {})
    for r in N:
        res = results[r]
        rp, wr = unique_negative_head(gamma, r)
        delta = res.delta
        # V_out: d1(r, v) = min(w(r, r') + d0(r', v), 0 if v == r) < -delta
        reach = _bounded_dijkstra(gamma, rp, -delta - wr, False, n0)
        vout = {v: wr + d for v, d in reach.items()}
        if 0.0 < -delta:
            vout[r] = min(vout.get(r, INF), 0.0)
        vin = _bounded_dijkstra(gamma, r, delta, True, n0)
        assert set(vout) <= set(res.v_out_tilde), f"V_out not inside search set for r={r}"
        assert set(vin) <= set(res.v_in_tilde), f"V_in not inside search set for r={r}"
        aux.delta[r] = delta
        aux.v_out[r] = vout
        aux.v_in[r] = vin
        aux.tilde_out[r] = set(res.v_out_tilde)
        aux.tilde_in[r] = set(res.v_in_tilde)
        rt = g.add_vertex(steiner=True)
        aux.steiner_of[r] = rt
        # (S2)
        s2 = dict(vout)
        s2[rp] = min(s2.get(rp, INF), wr)
        for v, d1 in s2.items():
            w = d1 + delta
            cls = IMAG if w < 0 else NN
            g.add_edge(rt, v, w, cls, Provenance("S2", (r, v), (d1, delta)))
            if cls == IMAG:
                aux.imaginary.append((rt, v))
        # (S3)
        s3 = dict(vin)
        s3.setdefault(r, 0.0)
        for v, d0 in s3.items():
            w = d0 - delta
            cls = IMAG if w < 0 else NN
            g.add_edge(v, rt, w, cls, Provenance("S3", (v, r), (d0, delta)))
            if cls == IMAG:
                aux.imaginary.append((v, rt))
        s4 = s5 = 0
        # (S4)
        for v, d1 in vout.items():
            for vp, w in gamma.out[REAL][v].items():
                g.add_edge(r, vp, d1 + w, REAL, Provenance("S4", (r, v, vp), (d1, w)))
                s4 += 1
        # (S5)
        for up, d0 in vin.items():
            for u, w in gamma.inn[REAL][up].items():
                g.add_edge(u, rp, w + d0 + wr, REAL, Provenance("S5", (u, up, r, rp), (w, d0, wr)))
                s5 += 1
        if stats is not None:
            stats.add("S4_edges", s4)
            stats.add("S5_edges", s5)
            stats.add("S2_edges", len(s2))
            stats.add("S3_edges", len(s3))
    return aux


# -- locally-negative paths ---------------------------------------------------

def enumerate_locally_negative(aux: AuxGraph) -> list[LocallyNegativePath]:
    g, n0 = aux.graph, aux.n_gamma
    paths = []
    for a, b in aux.imaginary:
        w_ab = g.out[IMAG][a][b]
        if a < n0:          # (v, r~): prepend a NonNegative Gamma edge (u, v)
            for u, w in g.inn[NN][a].items():
                if u < n0 and w + w_ab >= 0:
                    paths.append(LocallyNegativePath(u, a, b, w + w_ab, "in"))
        else:               # (r~, v): append a NonNegative Gamma edge (v, w)
            for x, w in g.out[NN][b].items():
                if x < n0 and w_ab + w >= 0:
                    paths.append(LocallyNegativePath(a, b, x, w_ab + w, "out"))
    return paths


def is_shortcut(g_next: Graph, p: LocallyNegativePath) -> bool:
    """True iff a NonNegative-only u -> w path of weight <= p.weight exists."""
    reach = _bounded_dijkstra(g_next, p.u, p.weight + 1, False, g_next.n)
    return reach.get(p.w, INF) <= p.weight


def _drop_imaginary(g: Graph) -> None:
    for u, row in enumerate(g.out[IMAG]):
        for v in list(row):
            g.remove_edge(u, v, IMAG)


def _add_shortcut(g: Graph, u: int, w: int, weight: float, rule: str, wit, stats) -> None:
    if g.add_edge(u, w, weight, NN, Provenance(rule, wit)) and stats is not None:
        stats.add(f"{rule}_edges", 1)


def _brute_in(aux: AuxGraph, g: Graph, r: int, rule: str, stats) -> None:
    rt, n0 = aux.steiner_of[r], aux.n_gamma
    scans = 0
    for v in aux.v_in[r]:
        w_v = g.out[IMAG][v].get(rt)
        if w_v is None:
            continue
        row = list(g.inn[NN][v].items())
        scans += len(row)
        for u, w in row:
            if u < n0 and w + w_v >= 0:
                _add_shortcut(g, u, rt, w + w_v, rule, (u, v, rt), stats)
    if stats is not None:
        stats.add("edge_scans", scans)


def _brute_out(aux: AuxGraph, g: Graph, r: int, rule: str, stats) -> None:
    rt, n0 = aux.steiner_of[r], aux.n_gamma
    scans = 0
    for v in aux.v_out[r]:
        w_v = g.out[IMAG][rt].get(v)
        if w_v is None:
            continue
        row = list(g.out[NN][v].items())
        scans += len(row)
        for x, w in row:
            if x < n0 and w_v + w >= 0:
                _add_shortcut(g, rt, x, w_v + w, rule, (rt, v, x), stats)
    if stats is not None:
        stats.add("edge_scans", scans)


def shortcut_reference(aux: AuxGraph, stats=None) -> Graph:
    """Brute force over full neighbourhoods of every imaginary edge."""
    g = aux.graph.copy()
    for r in sorted(aux.steiner_of):
        _brute_in(aux, g, r, "ref", stats)
        _brute_out(aux, g, r, "ref", stats)
    _drop_imaginary(g)
    return g


def _copy_round(aux: AuxGraph, g: Graph, rows: list[int], rule: str, stats) -> None:
    """One v_in / v_out copy per original vertex for the negative vertices in
    ``rows``, followed by witness-restricted enumeration."""
    n0 = aux.n_gamma
    # candidates keyed by base vertex: (value, r, j)
    best_in: dict[int, tuple[float, int, int]] = {}
    best_out: dict[int, tuple[float, int, int]] = {}
    for r in rows:
        rt = aux.steiner_of[r]
        for v in aux.v_in[r]:
            w = g.out[IMAG][v].get(rt)
            if w is None:
                continue
            key = (w + g.shift(v), r, v)
            b = g.base(v)
            if b not in best_in or key < best_in[b]:
                best_in[b] = key
        for v in aux.v_out[r]:
            w = g.out[IMAG][rt].get(v)
            if w is None:
                continue
            val = -w + g.shift(v)
            b = g.base(v)
            cur = best_out.get(b)
            # max value, ties to smallest (r, j)
            if cur is None or val > cur[0] or (val == cur[0] and (r, v) < cur[1:]):
                best_out[b] = (val, r, v)
    for b in sorted(best_in):
        add_copy(g, b, best_in[b][0], stats)
    for b in sorted(best_out):
        add_copy(g, b, best_out[b][0], stats)
    # u -> v_j -> r~ with u in the in-search set of the witness, and mirror
    scans = 0
    for r in rows:
        rt = aux.steiner_of[r]
        for v in aux.v_in[r]:
            w_v = g.out[IMAG][v].get(rt)
            if w_v is None:
                continue
            wit = best_in[g.base(v)][1]
            row = g.inn[NN][v]
            scans += len(aux.tilde_in[wit])
            for u in aux.tilde_in[wit]:
                w = row.get(u)
                if w is not None and u < n0 and w + w_v >= 0:
                    _add_shortcut(g, u, rt, w + w_v, rule + "_in", (u, v, rt), stats)
        for v in aux.v_out[r]:
            w_v = g.out[IMAG][rt].get(v)
            if w_v is None:
                continue
            wit = best_out[g.base(v)][1]
            row = g.out[NN][v]
            scans += len(aux.tilde_out[wit])
            for x in aux.tilde_out[wit]:
                w = row.get(x)
                if w is not None and x < n0 and w_v + w >= 0:
                    _add_shortcut(g, rt, x, w_v + w, rule + "_out", (rt, v, x), stats)
    if stats is not None:
        stats.add("edge_scans", scans)


def default_kappa(n: int) -> int:
    return max(1, math.ceil(n ** (2 / 3)))


def shortcut_simple(aux: AuxGraph, kappa: int | None = None, stats=None) -> Graph:
    """Brute force for large searches, one v_in/v_out copy round for the rest."""
    g = aux.graph.copy()
    if kappa is None:
        kappa = default_kappa(aux.n_gamma)
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    N = sorted(aux.steiner_of)
    big = [r for r in N if aux.size(r) >= kappa]
    small = [r for r in N if aux.size(r) < kappa]
    for r in big:
        _brute_in(aux, g, r, "step1", stats)
        _brute_out(aux, g, r, "step1", stats)
    if small:
        _copy_round(aux, g, small, "step3", stats)
    _drop_imaginary(g)
    return g


def bucket_schedule(n_aux: int) -> list[int]:
    """kappa_1 .. kappa_{L+1}; rounds i = 1..L handle N_{i+1} minus N_i."""
    top = 2 * n_aux + 1
    L = math.floor(math.log2(top)) + 1
    return [top // 2 ** (i - 1) for i in range(1, L + 2)]


def shortcut_bucketed(aux: AuxGraph, stats=None) -> Graph:
    g = aux.graph.copy()
    kappas = bucket_schedule(aux.graph.n)
    N = sorted(aux.steiner_of)
    for i in range(len(kappas) - 1):
        hi, lo = kappas[i], kappas[i + 1]
        rows = [r for r in N if lo <= aux.size(r) < hi]
        if rows:
            _copy_round(aux, g, rows, f"round{i + 1}", stats)
    _drop_imaginary(g)
    return g


STRATEGIES = {
    "reference": shortcut_reference,
    "simple": shortcut_simple,
    "bucketed": shortcut_bucketed,
}


def copy_bound(n_aux: int) -> int:
    """Allowed new copies per base vertex in one iteration (bucketed rounds
    plus the re-split)."""
    return 2 * math.ceil(math.log2(2 * n_aux + 1) + 1) + 3
