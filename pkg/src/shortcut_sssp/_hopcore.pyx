# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hop-layer kernel (Dijkstra rounds interleaved with one relaxation
pass over negative-class edges)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.vector cimport vector

cnp.import_array()

ctypedef pair[double, long] entry


cdef long _dijkstra(double[::1] dist, vector[long]& seeds, const long[::1] ptr,
                    const long[::1] idx, const double[::1] wts, char[::1] done) nogil:
    # max-heap on (-dist, -v): pops smallest distance, then smallest id
    cdef priority_queue[entry] heap
    cdef long scans = 0, u, v, e, k
    cdef double d, nd
    for k in range(<long>seeds.size()):
        v = seeds[k]
        heap.push(entry(-dist[v], -v))
    while not heap.empty():
        d = -heap.top().first
        u = -heap.top().second
        heap.pop()
        if done[u] or d > dist[u]:
            continue
        done[u] = 1
        scans += ptr[u + 1] - ptr[u]
        for e in range(ptr[u], ptr[u + 1]):
            v = idx[e]
            nd = d + wts[e]
            if nd < dist[v]:
                dist[v] = nd
                heap.push(entry(-nd, -v))
    return scans


def hop_layers(long n, const long[::1] nn_ptr, const long[::1] nn_idx, const double[::1] nn_w,
               const long[::1] ng_ptr, const long[::1] ng_idx, const double[::1] ng_w,
               init, long h):
    out_arr = np.empty((h + 1, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cur_arr = np.array(init, dtype=np.float64)
    cdef double[::1] cur = cur_arr
    nxt_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] nxt = nxt_arr
    done_arr = np.zeros(n, dtype=np.int8)
    cdef char[::1] done = done_arr
    cdef vector[long] seeds
    cdef long scans = 0, i, u, v, e
    cdef double du, nd
    with nogil:
        for u in range(n):
            if cur[u] < INFINITY:
                seeds.push_back(u)
        scans += _dijkstra(cur, seeds, nn_ptr, nn_idx, nn_w, done)
        for u in range(n):
            out[0, u] = cur[u]
        for i in range(1, h + 1):
            seeds.clear()
            for u in range(n):
                nxt[u] = cur[u]
                done[u] = 0
            for u in range(n):
                du = cur[u]
                if du == INFINITY:
                    continue
                scans += ng_ptr[u + 1] - ng_ptr[u]
                for e in range(ng_ptr[u], ng_ptr[u + 1]):
                    v = ng_idx[e]
                    nd = du + ng_w[e]
                    if nd < nxt[v]:
                        if nxt[v] == cur[v]:
                            seeds.push_back(v)
                        nxt[v] = nd
            scans += _dijkstra(nxt, seeds, nn_ptr, nn_idx, nn_w, done)
            for u in range(n):
                out[i, u] = nxt[u]
                cur[u] = nxt[u]
    return out_arr, scans
