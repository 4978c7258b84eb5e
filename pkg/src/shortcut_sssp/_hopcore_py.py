"""Pure-Python hop-layer kernel; same contract as the compiled ``_hopcore``."""

from heapq import heappop, heappush
import math

import numpy as np

INF = math.inf


def _dijkstra(dist, seeds, ptr, idx, wts):
    heap = [(dist[v], v) for v in seeds]
    heap.sort()
    done = set()
    scans = 0
    while heap:
        d, u = heappop(heap)
        if u in done or d > dist[u]:
            continue
        done.add(u)
        lo, hi = ptr[u], ptr[u + 1]
        scans += hi - lo
        for e in range(lo, hi):
            v = idx[e]
            nd = d + wts[e]
            if nd < dist[v]:
                dist[v] = nd
                heappush(heap, (nd, v))
    return scans


def hop_layers(n, nn_ptr, nn_idx, nn_w, ng_ptr, ng_idx, ng_w, init, h):
    """Layer i holds the minimum weight of a walk from the seeded labels that
    uses at most i edges of the negative adjacency."""
    nn_ptr, nn_idx, nn_w = nn_ptr.tolist(), nn_idx.tolist(), nn_w.tolist()
    ng_ptr, ng_idx, ng_w = ng_ptr.tolist(), ng_idx.tolist(), ng_w.tolist()
    cur = [float(x) for x in init]
    scans = _dijkstra(cur, [v for v in range(n) if cur[v] < INF], nn_ptr, nn_idx, nn_w)
    out = np.empty((h + 1, n), dtype=np.float64)
    out[0] = cur
    for i in range(1, h + 1):
        nxt = list(cur)
        improved = []
        for u in range(n):
            du = cur[u]
            if du == INF:
                continue
            lo, hi = ng_ptr[u], ng_ptr[u + 1]
            scans += hi - lo
            for e in range(lo, hi):
                v = ng_idx[e]
                nd = du + ng_w[e]
                if nd < nxt[v]:
                    if nxt[v] == cur[v]:
                        improved.append(v)
                    nxt[v] = nd
        scans += _dijkstra(nxt, improved, nn_ptr, nn_idx, nn_w)
        out[i] = nxt
        cur = nxt
    return out, scans
