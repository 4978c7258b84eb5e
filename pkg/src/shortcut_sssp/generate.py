"""Seeded random instances."""

from __future__ import annotations

import random

from .graph import Graph, from_edges


def gen_random(n: int, density: float, weight_range: tuple[int, int] = (-8, 8),
               neg_fraction: float = 0.3, seed: int = 0) -> Graph:
    """Directed G(n, p) without self-loops. Each arc is negative with
    probability ``neg_fraction``, drawing from [lo, -1]; the rest draw from
    [0, hi]. Integer weights only, so every comparison downstream is exact."""
    if not 0 <= density <= 1 or not 0 <= neg_fraction <= 1:
        raise ValueError("density and neg_fraction must lie in [0, 1]")
    lo, hi = weight_range
    if lo > hi:
        raise ValueError("empty weight range")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(n):
            if u == v or rng.random() >= density:
                continue
            if lo < 0 and rng.random() < neg_fraction:
                w = rng.randint(lo, -1)
            else:
                w = rng.randint(max(lo, 0), max(hi, 0))
            edges.append((u, v, w))
    return from_edges(n, edges)


def gen_shifted(n: int, density: float, max_weight: int = 8, spread: int = 8,
                seed: int = 0) -> Graph:
    """Non-negative G(n, p) reweighted by a random integer potential: many
    negative arcs, never a negative cycle."""
    rng = random.Random(seed)
    p = [rng.randint(0, spread) for _ in range(n)]
    edges = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                edges.append((u, v, rng.randint(0, max_weight) + p[u] - p[v]))
    return from_edges(n, edges)
