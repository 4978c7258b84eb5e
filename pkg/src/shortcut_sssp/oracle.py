"""Reference oracles: Bellman-Ford with cycle extraction, brute-force hop DP
and Floyd-Warshall. None of these share code with the hop kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import CLASSES, NEGATIVE_CLASSES, Graph, NegClass

INF = math.inf


@dataclass(frozen=True)
class CycleCertificate:
    """Closed walk ``walk[0] -> ... -> walk[-1] == walk[0]`` of negative weight."""

    walk: tuple[int, ...]
    total_weight: float

    def verify(self, g: Graph) -> bool:
        if len(self.walk) < 2 or self.walk[0] != self.walk[-1]:
            return False
        total = 0.0
        for a, b in zip(self.walk, self.walk[1:]):
            w = g.min_weight(a, b)
            if w is None:
                return False
            total += w
        return total == self.total_weight and total < 0


def _min_edges(g: Graph) -> list[tuple[int, int, float]]:
    best: dict[tuple[int, int], float] = {}
    for u, v, w, _ in g.edges():
        if w < best.get((u, v), INF):
            best[(u, v)] = w
    return sorted((u, v, w) for (u, v), w in best.items())


def bellman_ford(g: Graph, source: int | None = None) -> list[float] | CycleCertificate:
    """Exact distances from ``source`` (or from a virtual source joined to every
    vertex with weight 0 when ``source`` is None), or a negative cycle reachable
    from it."""
    n = g.n
    edges = _min_edges(g)
    dist = [INF] * n
    pred = [-1] * n
    if source is None:
        dist = [0.0] * n
    else:
        dist[source] = 0.0
    last = -1
    for _ in range(n + 1):
        last = -1
        for u, v, w in edges:
            du = dist[u]
            if du != INF and du + w < dist[v]:
                dist[v] = du + w
                pred[v] = u
                last = v
        if last < 0:
            return dist
    # still relaxing after n passes: walk back into the predecessor cycle
    v = last
    for _ in range(n):
        v = pred[v]
    cyc = [v]
    u = pred[v]
    while u != v:
        cyc.append(u)
        u = pred[u]
    cyc.append(v)
    cyc.reverse()
    total = sum(g.min_weight(a, b) for a, b in zip(cyc, cyc[1:]))
    return CycleCertificate(tuple(cyc), total)


def brute_hop_distance(g: Graph, s: int, t: int, h: int) -> float:
    """d^h(s, t) by an unpruned DP over (vertex, hops used)."""
    n = g.n
    nn = [(u, v, w) for u, v, w, _ in g.edges((NegClass.NONNEG,))]
    ng = [(u, v, w) for u, v, w, _ in g.edges(NEGATIVE_CLASSES)]
    cur = [INF] * n
    cur[s] = 0.0
    for i in range(h + 1):
        if i:
            nxt = list(cur)
            for u, v, w in ng:
                if cur[u] + w < nxt[v]:
                    nxt[v] = cur[u] + w
            cur = nxt
        for _ in range(n):
            changed = False
            for u, v, w in nn:
                if cur[u] + w < cur[v]:
                    cur[v] = cur[u] + w
                    changed = True
            if not changed:
                break
    return cur[t]


def _matrix(g: Graph, classes) -> np.ndarray:
    m = np.full((g.n, g.n), INF)
    for u, v, w, _ in g.edges(classes):
        if w < m[u, v]:
            m[u, v] = w
    return m


def _minplus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, :, None] + b[None, :, :]).min(axis=1)


def _closure(d: np.ndarray) -> np.ndarray:
    d = d.copy()
    np.fill_diagonal(d, np.minimum(np.diag(d), 0.0))
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def brute_hop_all(g: Graph, h: int) -> np.ndarray:
    """``D[i, s, t] = d^i(s, t)`` for all pairs and i in 0..h.

    Walks with at most i hops are C (W C)^{<=i}, with C the NonNegative
    closure and W the negative-class adjacency.
    """
    c = _closure(_matrix(g, (NegClass.NONNEG,)))
    w = _matrix(g, NEGATIVE_CLASSES)
    out = np.empty((h + 1, g.n, g.n))
    out[0] = c
    for i in range(1, h + 1):
        out[i] = np.minimum(out[i - 1], _minplus(_minplus(out[i - 1], w), c))
    return out


def floyd_warshall(g: Graph) -> tuple[np.ndarray, bool]:
    """All-pairs distances over every edge class; the flag is True when a
    negative cycle exists (the matrix is then meaningless)."""
    d = _closure(_matrix(g, CLASSES))
    return d, bool((np.diag(d) < 0).any())
