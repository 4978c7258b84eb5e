"""Strong betweenness reduction through a layered auxiliary graph.

Layer 0 is the base copy of G+, layers 1..2h are the forward copies and
layers 2h+1..4h the backward copies (Backward(i) is layer 2h+i). Vertex v of
layer L has id L*n + v.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graph import NEGATIVE_CLASSES, Graph, NegClass, Provenance, validate_potential
from .oracle import CycleCertificate, brute_hop_all

SSSPCallback = Callable[[Graph], "np.ndarray | CycleCertificate"]


@dataclass
class BetweennessConfig:
    h: int = 2
    b: float = 1.0
    sample_constant: float = 4.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("h must be >= 1")
        if self.b < 1:
            raise ValueError("b must be >= 1")


@dataclass
class BetweennessResult:
    phi: np.ndarray | None
    cycle: CycleCertificate | None
    sample: list[int] = field(default_factory=list)
    layered_n: int = 0

    @property
    def has_cycle(self) -> bool:
        return self.phi is None


def sample_size(k: int, n: int, cfg: BetweennessConfig) -> int:
    return min(k, math.ceil(cfg.sample_constant * cfg.b * math.log(max(n, 2))))


def sample_hitting_set(N, cfg: BetweennessConfig, n: int | None = None) -> list[int]:
    """Uniform seeded sample of N; ``n`` defaults to |N| for the log factor."""
    pool = sorted(N)
    if not pool:
        raise ValueError("cannot sample from an empty negative set")
    size = sample_size(len(pool), n if n is not None else len(pool), cfg)
    if size >= len(pool):
        return pool
    return sorted(random.Random(cfg.rng_seed).sample(pool, size))


def layer_of(x: int, n: int) -> int:
    return x // n


def build_betweenness_graph(g: Graph, S, h: int) -> Graph:
    n = g.n
    big_m = 1.0 + g.weight_bound
    H = Graph(n * (4 * h + 1))
    nn = list(g.edges((NegClass.NONNEG,)))
    neg = list(g.edges(NEGATIVE_CLASSES))
    fwd = lambda i: i            # noqa: E731
    bwd = lambda i: 2 * h + i    # noqa: E731
    for layer in range(4 * h + 1):
        off = layer * n
        for u, v, w, _ in nn:
            H.add_edge(off + u, off + v, w, NegClass.NONNEG)
    # chains Base -> F1 -> ... -> F2h and B2h -> ... -> B1 -> Base
    hops = [(0, fwd(1))] + [(fwd(i), fwd(i + 1)) for i in range(1, 2 * h)]
    hops += [(bwd(1), 0)] + [(bwd(i + 1), bwd(i)) for i in range(1, 2 * h)]
    for la, lb in hops:
        for u in range(n):
            H.add_edge(la * n + u, lb * n + u, big_m, NegClass.NONNEG)
        for u, v, w, _ in neg:
            H.add_edge(la * n + u, lb * n + v, w + big_m, NegClass.NONNEG)
    for x in S:
        H.add_edge(fwd(2 * h) * n + x, bwd(2 * h) * n + x, -4 * h * big_m, NegClass.REAL,
                   Provenance("hub", (x,)))
    return H


def project_walk(walk, n: int) -> list[int]:
    """Map a closed walk of the layered graph to g, dropping the self-edges
    that only change layer."""
    out: list[int] = []
    for x in walk:
        v = x % n
        if not out or out[-1] != v:
            out.append(v)
    if len(out) > 1 and out[0] != out[-1]:
        out.append(out[0])
    return out


def _simple_cycles(walk):
    """Split a closed walk into the simple cycles it is made of."""
    stack: list[int] = []
    pos: dict[int, int] = {}
    for v in walk:
        if v in pos:
            i = pos[v]
            yield stack[i:] + [v]
            for x in stack[i + 1:]:
                del pos[x]
            del stack[i + 1:]
        else:
            pos[v] = len(stack)
            stack.append(v)


def _map_cycle(g: Graph, cert: CycleCertificate, n: int) -> CycleCertificate | None:
    """Project an H-cycle onto g and keep its most negative simple cycle."""
    walk = project_walk(cert.walk, n)
    if len(walk) < 2:
        return None
    best = None
    for cyc in _simple_cycles(walk):
        total = 0.0
        for a, b in zip(cyc, cyc[1:]):
            w = g.min_weight(a, b)
            if w is None:
                return None
            total += w
        if total < 0 and (best is None or total < best.total_weight):
            best = CycleCertificate(tuple(cyc), total)
    return best


def strong_betweenness_reduce(g: Graph, N, cfg: BetweennessConfig,
                              callback: SSSPCallback) -> BetweennessResult:
    """Valid potential phi for ``g`` (or a negative cycle) after which every
    pair has small h-hop strong betweenness w.h.p."""
    n = g.n
    if not N:
        return BetweennessResult(np.zeros(n), None, [], 0)
    S = sample_hitting_set(N, cfg, n)
    H = build_betweenness_graph(g, S, cfg.h)
    res = callback(H)
    if isinstance(res, CycleCertificate):
        # cycle stays None if projection failed; has_cycle still reports it
        return BetweennessResult(None, _map_cycle(g, res, n), S, H.n)
    phi = np.asarray(res[:n], dtype=np.float64)
    assert validate_potential(g, phi), "betweenness potential is not valid"
    return BetweennessResult(phi, None, S, H.n)


def sbw_matrix(g: Graph, N, h: int, D=None) -> np.ndarray:
    """SBW(s, t) for all pairs by brute-force hop distances."""
    if D is None:
        D = brute_hop_all(g, h)[h]
    A = D.min(axis=0)                 # min over s' of d^h(s', s)
    B = D.min(axis=1)                 # min over t' of d^h(t, t')
    count = np.zeros((g.n, g.n), dtype=np.int64)
    with np.errstate(invalid="ignore"):
        for v in N:
            tot = A[:, None] + D[:, v][:, None] + D[v, :][None, :] + B[None, :]
            count += tot < 0
    return count


def brute_sbw(g: Graph, N, h: int, s: int, t: int) -> int:
    return int(sbw_matrix(g, N, h)[s, t])
