"""Hop-bounded shortest paths.

``d^h`` counts only negative-class edges as hops, whatever their current sign.
The kernel runs one Dijkstra over NonNegative edges per layer and a single
relaxation pass over negative-class edges between layers. A compiled kernel is
used when it was built; set ``SHORTCUT_SSSP_PURE=1`` to force the Python one.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import NEGATIVE_CLASSES, Graph, NegClass

if os.environ.get("SHORTCUT_SSSP_PURE", "") not in ("", "0"):
    from ._hopcore_py import hop_layers as _kernel
    KERNEL = "python"
else:
    try:
        from ._hopcore import hop_layers as _kernel
        KERNEL = "cython"
    except ImportError:  # extension not built
        from ._hopcore_py import hop_layers as _kernel
        KERNEL = "python"

_NN = (NegClass.NONNEG,)


@dataclass
class HopDistances:
    """``layers[i][v]`` is d^i from the source set to v (or from v to the sink
    set when ``reverse``)."""

    h: int
    layers: np.ndarray
    scans: int
    reverse: bool = False

    def dist(self, v: int, i: int | None = None) -> float:
        return float(self.layers[self.h if i is None else i][v])

    def final(self) -> np.ndarray:
        return self.layers[self.h]


def hop_layers_csr(n: int, nn, neg, init, h: int):
    """Run the kernel on raw CSR triples; returns (layers, scans)."""
    if h < 0:
        raise ValueError("hop bound must be non-negative")
    return _kernel(n, nn[0], nn[1], nn[2], neg[0], neg[1], neg[2],
                   np.asarray(init, dtype=np.float64), h)


def _init(n: int, sources) -> np.ndarray:
    init = np.full(n, math.inf)
    if isinstance(sources, dict):
        for v, x in sources.items():
            init[v] = min(init[v], x)
    else:
        for v in sources:
            init[v] = 0.0
    return init


def hop_sssp(g: Graph, sources: Iterable[int] | dict, h: int, stats=None) -> HopDistances:
    """d^i(S, v) for i in 0..h. ``sources`` may map vertices to start labels."""
    layers, scans = hop_layers_csr(g.n, g.csr(_NN), g.csr(NEGATIVE_CLASSES),
                                   _init(g.n, sources), h)
    if stats is not None:
        stats.add("edge_scans", scans)
    return HopDistances(h, layers, scans)


def hop_sssp_reverse(g: Graph, sinks: Iterable[int] | dict, h: int, stats=None) -> HopDistances:
    """d^i(v, T) for i in 0..h, computed on the reversed adjacency."""
    layers, scans = hop_layers_csr(g.n, g.csr(_NN, reverse=True),
                                   g.csr(NEGATIVE_CLASSES, reverse=True),
                                   _init(g.n, sinks), h)
    if stats is not None:
        stats.add("edge_scans", scans)
    return HopDistances(h, layers, scans, reverse=True)
