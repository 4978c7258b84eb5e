"""End-to-end solver: shortcut until two negative hops suffice, then unwind the potentials."""

from __future__ import annotations

import json
import math
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .betweenness import BetweennessConfig, strong_betweenness_reduce
from .graph import (CLASSES, Graph, add_copy_links, apply_potential, from_edges)
from .hop import hop_sssp
from .negsearch import build_context, search_from
from .oracle import CycleCertificate, bellman_ford
from .preprocess import split_negative_vertices
from .shortcut import STRATEGIES, build_aux_graph

INF = math.inf


class RunStats:
    """Monotone named counters plus wall time."""

    def __init__(self):
        self.counters: Counter = Counter()
        self.max_depth = 0
        self._t0 = time.perf_counter()

    def add(self, key: str, n: int = 1) -> None:
        self.counters[key] += n

    def __getitem__(self, key: str) -> int:
        return self.counters[key]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "counters": dict(sorted(self.counters.items())),
            "recursion_depth": self.max_depth,
            "wall_time_s": time.perf_counter() - self._t0,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class NegativeCycleError(Exception):
    """A negative cycle exists in the current instance."""


class SolverError(RuntimeError):
    pass


def _sqrt_log_pow(n: int) -> int:
    return 2 ** math.ceil(math.sqrt(math.log2(max(n, 2))))


def default_base_threshold(n: int) -> int:
    return max(4, _sqrt_log_pow(n))


def default_b_rule(k: int, n: int) -> float:
    return k / _sqrt_log_pow(n)


@dataclass
class SolveConfig:
    base_threshold: int | None = None
    max_iterations: int = 64
    strategy: str = "bucketed"
    rng_seed: int = 0
    b_rule: Callable[[int, int], float] = default_b_rule
    sample_constant: float = 4.0
    callback: str = "recursive"        # or "bellman_ford" for debugging
    verify: bool = True

    def __post_init__(self):
        if self.base_threshold is not None and self.base_threshold < 1:
            raise ValueError("base_threshold must be >= 1")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")

    def threshold(self, n: int) -> int:
        return self.base_threshold if self.base_threshold is not None else default_base_threshold(n)


@dataclass
class IterationOutput:
    graph: Graph
    phi: np.ndarray
    stats: RunStats = field(default_factory=RunStats)
    aux: object = None
    gamma: Graph | None = None


def _seed(cfg: SolveConfig, depth: int, tau: int) -> int:
    return (cfg.rng_seed * 1_000_003 + depth * 7919 + tau) & 0x7FFFFFFF


def shortcut_iteration(g: Graph, cfg: SolveConfig, callback=None, stats: RunStats | None = None,
                       depth: int = 0, tau: int = 0) -> IterationOutput:
    """One round: betweenness reweighting, searches, aux graph, shortcutting
    and re-splitting. ``g`` must be in split form."""
    stats = stats if stats is not None else RunStats()
    N = g.negative_vertices()
    if not N:
        return IterationOutput(g, np.zeros(g.n), stats, None, g)
    h_tau = add_copy_links(g)
    k, n = len(N), g.n
    b = min(max(cfg.b_rule(k, n), 1.0), float(k))
    bcfg = BetweennessConfig(h=2, b=b, sample_constant=cfg.sample_constant,
                             rng_seed=_seed(cfg, depth, tau))
    if callback is None:
        k_bound = math.ceil(cfg.sample_constant * b * math.log(max(n, 2)))
        callback = _make_callback(cfg, stats, depth, k, k_bound)
    res = strong_betweenness_reduce(h_tau, N, bcfg, callback)
    stats.add("edge_scans", h_tau.m * (4 * bcfg.h + 1))
    if res.has_cycle:
        raise NegativeCycleError("negative cycle found by betweenness reduction")
    return shortcut_step(g, res.phi, cfg, stats, h_tau)


def shortcut_step(g: Graph, phi, cfg: SolveConfig, stats: RunStats | None = None,
                  h_tau: Graph | None = None) -> IterationOutput:
    """Everything after the betweenness reweighting. Any valid ``phi`` works;
    the reweighting only bounds search sizes, not correctness."""
    stats = stats if stats is not None else RunStats()
    phi = np.asarray(phi, dtype=np.float64)
    if h_tau is None:
        h_tau = add_copy_links(g)
    gamma = apply_potential(g, phi)
    H = apply_potential(h_tau, phi)
    ctx = build_context(H, 1, stats)
    results = {}
    for r in sorted(g.negative_vertices()):
        sr = search_from(ctx, r)
        stats.add("edge_scans", sr.scans)
        stats.add("heap_ops", sr.heap_ops)
        stats.add("search_size_sq", sr.size ** 2)
        results[r] = sr
    try:
        aux = build_aux_graph(gamma, results, stats)
    except AssertionError as e:
        # containment can only fail if the instance has a negative cycle
        raise NegativeCycleError(str(e)) from e
    out = STRATEGIES[cfg.strategy](aux, stats=stats)
    g_next, _ = split_negative_vertices(out)
    stats.add("iterations", 1)
    return IterationOutput(g_next, phi, stats, aux, gamma)


def _make_callback(cfg: SolveConfig, stats: RunStats, depth: int, parent_k: int,
                   k_bound: int):
    def callback(H: Graph):
        kh = len(H.negative_vertices())
        assert kh <= k_bound, f"recursive instance has {kh} > {k_bound} negative vertices"
        if cfg.callback == "bellman_ford":
            return bellman_ford(H)
        sub = RunStats()
        try:
            dist = _solve_core(H, {v: 0.0 for v in range(H.n)}, cfg, sub, depth + 1,
                               parent_k=parent_k)
        except NegativeCycleError:
            dist = None
        finally:
            stats.add("callback_edge_scans", sub["edge_scans"] + sub["callback_edge_scans"])
            stats.add("recursive_calls", 1 + sub["recursive_calls"])
            stats.max_depth = max(stats.max_depth, sub.max_depth, depth + 1)
        if dist is None:
            return CycleCertificate((), -INF)
        return dist
    return callback


def _hop_exact(g: Graph, init: dict, k: int, stats: RunStats) -> np.ndarray:
    """Distances with the k+1 vs k layer fixpoint test for negative cycles."""
    hd = hop_sssp(g, init, k + 1, stats)
    if not np.array_equal(hd.layers[k], hd.layers[k + 1]):
        raise NegativeCycleError("hop layers did not converge")
    return hd.layers[k]


def _solve_core(g: Graph, sources: dict[int, float], cfg: SolveConfig, stats: RunStats,
                depth: int = 0, parent_k: int | None = None) -> np.ndarray:
    """min_s label(s) + d(s, v) for the first g.n vertices; raises
    NegativeCycleError if a negative cycle is reachable from the sources."""
    n0 = g.n
    cur, _ = split_negative_vertices(g)
    k = len(cur.negative_vertices())
    if parent_k is not None:
        # recursive instances must shrink; otherwise solve them directly
        if k >= parent_k:
            stats.add("progress_guard", 1)
            return _hop_exact(cur, sources, k, stats)[:n0]
    phi_sum = np.zeros(n0)
    k0 = k
    bound = math.ceil(math.log(max(k0, 2), 1.5)) + 2
    tau = 0
    while True:
        k = len(cur.negative_vertices())
        init = {s: x - phi_sum[s] for s, x in sources.items()}
        if k <= cfg.threshold(cur.n):
            d = _hop_exact(cur, init, k, stats)[:n0]
            break
        hd = hop_sssp(cur, init, 3, stats)
        if np.array_equal(hd.layers[2], hd.layers[3]):
            d = hd.layers[2][:n0]
            stats.add("audit_exit", 1)
            break
        if tau >= bound:
            stats.add("hop_audit_fallback", 1)
            d = _hop_exact(cur, init, k, stats)[:n0]
            break
        if tau >= cfg.max_iterations:
            raise SolverError(f"no convergence after {tau} iterations (k={k}, n={cur.n})")
        try:
            it = shortcut_iteration(cur, cfg, None, stats, depth, tau)
        except NegativeCycleError:
            # settle it with the exact test so a verdict never rests on sampling
            stats.add("cycle_checks", 1)
            d = _hop_exact(cur, init, k, stats)[:n0]
            stats.add("cycle_check_refuted", 1)
            break
        phi_sum += it.phi[:n0]
        cur = it.graph
        tau += 1
    return d + phi_sum


def reachable_from(g: Graph, source: int) -> list[int]:
    seen = {source}
    q = deque([source])
    while q:
        u = q.popleft()
        for cls in CLASSES:
            for v in g.out[cls][u]:
                if v not in seen:
                    seen.add(v)
                    q.append(v)
    return sorted(seen)


def induced_subgraph(g: Graph, keep: list[int]) -> Graph:
    idx = {v: i for i, v in enumerate(keep)}
    edges = []
    for u, v, w, _ in g.edges():
        if u in idx and v in idx:
            edges.append((idx[u], idx[v], w))
    return from_edges(len(keep), edges)


@dataclass
class SolveResult:
    dist: list[float] | None
    cycle: CycleCertificate | None
    stats: RunStats

    @property
    def has_cycle(self) -> bool:
        return self.cycle is not None


def solve(g0: Graph, source: int, cfg: SolveConfig | None = None) -> SolveResult:
    """Distances from ``source`` or a negative cycle reachable from it."""
    cfg = cfg or SolveConfig()
    if not (0 <= source < g0.n) or not g0.is_base(source):
        raise ValueError(f"source {source} is not a base vertex of the input")
    stats = RunStats()
    keep = reachable_from(g0, source)
    sub = induced_subgraph(g0, keep)
    try:
        d = _solve_core(sub, {0: 0.0}, cfg, stats)
    except NegativeCycleError:
        cert = bellman_ford(sub, 0)
        if not isinstance(cert, CycleCertificate):
            raise SolverError("solver reported a negative cycle that Bellman-Ford refutes")
        walk = tuple(keep[v] for v in cert.walk)
        mapped = CycleCertificate(walk, cert.total_weight)
        if not mapped.verify(g0):
            raise SolverError("negative cycle certificate failed verification")
        return SolveResult(None, mapped, stats)
    dist = [INF] * g0.n
    for i, v in enumerate(keep):
        dist[v] = float(d[i])
    if cfg.verify and not verify_distances(g0, source, dist):
        raise SolverError("distance certificate check failed")
    return SolveResult(dist, None, stats)


def unwind_distances(dist_final, potential_stack, source: int) -> list[float]:
    """d(s, t) = d_final(s, t) - sum over iterations of (phi(s) - phi(t))."""
    out = [float(x) for x in dist_final]
    for phi in potential_stack:
        if len(phi) < len(out):
            raise ValueError("potential does not cover every original vertex")
        ps = phi[source]
        for t in range(len(out)):
            out[t] -= ps - phi[t]
    return out


def shortest_path_tree(g0: Graph, source: int, dist) -> dict[int, int]:
    """Predecessors along tight edges. Vertices join in BFS order over tight
    edges and take the smallest tight in-neighbour already placed, so
    zero-weight cycles cannot close a loop."""
    pred: dict[int, int] = {}
    placed = {source}
    frontier = [source]
    while frontier:
        cand: dict[int, int] = {}
        for u in frontier:
            for v, w, _ in g0.out_edges(u):
                if v not in placed and dist[u] + w == dist[v]:
                    if v not in cand or u < cand[v]:
                        cand[v] = u
        pred.update(cand)
        placed.update(cand)
        frontier = sorted(cand)
    missing = [t for t in range(g0.n) if dist[t] != INF and t not in placed]
    if missing:
        raise SolverError(f"no tight path to vertex {missing[0]}")
    return pred


def verify_distances(g0: Graph, source: int, dist) -> bool:
    """No edge can be relaxed, and every finite vertex is reached from the
    source over tight edges (plain per-vertex tightness would accept values
    lowered along a zero-weight cycle)."""
    if dist[source] != 0:
        return False
    for u, v, w, _ in g0.edges():
        if dist[u] != INF and dist[u] + w < dist[v]:
            return False
    reach = set(reachable_from(g0, source))
    if any((dist[t] != INF) != (t in reach) for t in range(g0.n)):
        return False
    try:
        shortest_path_tree(g0, source, dist)
    except SolverError:
        return False
    return True
