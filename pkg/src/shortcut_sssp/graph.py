"""Graph representation with shifted vertex copies and frozen negativity classes.

Vertices are dense integers that are never deleted. Every vertex is either a
base vertex or a copy of one; copies carry a shift ``delta`` describing how far
"above" their base they sit. Edges are stored per class so that parallel edges
of different classes may coexist while each class keeps only the cheapest edge
per ordered pair.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Sequence

import numpy as np

log = logging.getLogger(__name__)

UNREACHABLE = math.inf


class NegClass(IntEnum):
    NONNEG = 0
    REAL = 1
    IMAG = 2


CLASSES = (NegClass.NONNEG, NegClass.REAL, NegClass.IMAG)
NEGATIVE_CLASSES = (NegClass.REAL, NegClass.IMAG)


@dataclass(frozen=True)
class VertexMeta:
    base: int
    shift: float = 0.0
    is_steiner: bool = False


@dataclass(frozen=True)
class Provenance:
    """Construction rule that produced an edge, with witness vertices and the
    component weights that were summed."""

    rule: str
    witnesses: tuple = ()
    weights: tuple = ()


class GraphError(ValueError):
    pass


class InvalidPotentialError(GraphError):
    def __init__(self, violations):
        self.violations = violations
        super().__init__(f"potential makes {len(violations)} non-negative edge(s) negative")


Potential = Sequence[float]


class Graph:
    """Directed multigraph keyed by (tail, head, class)."""

    def __init__(self, n: int = 0):
        self.meta: list[VertexMeta] = []
        self.out: tuple[list[dict], ...] = ([], [], [])
        self.inn: tuple[list[dict], ...] = ([], [], [])
        self.prov: dict[tuple[int, int, int], Provenance] = {}
        self.weight_bound = 0.0
        self._copies: dict[int, list[int]] = {}
        self._version = 0
        self._csr_cache: dict = {}
        for _ in range(n):
            self.add_vertex()

    # -- vertices -----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.meta)

    def add_vertex(self, base: int | None = None, shift: float = 0.0, steiner: bool = False) -> int:
        v = len(self.meta)
        if base is None or base == v:
            if shift != 0.0:
                raise GraphError("base vertices have shift 0")
            self.meta.append(VertexMeta(v, 0.0, steiner))
            self._copies[v] = [v]
        else:
            if base not in self._copies:
                raise GraphError(f"vertex {base} is not a base vertex")
            if not math.isfinite(shift):
                raise GraphError("shift must be finite")
            self.meta.append(VertexMeta(base, float(shift), False))
            self._copies[base].append(v)
        for cls in CLASSES:
            self.out[cls].append({})
            self.inn[cls].append({})
        self._version += 1
        return v

    def base(self, v: int) -> int:
        return self.meta[v].base

    def shift(self, v: int) -> float:
        return self.meta[v].shift

    def is_base(self, v: int) -> bool:
        return self.meta[v].base == v

    def copies_of(self, base: int) -> list[int]:
        """All copies of ``base`` including the base itself, oldest first."""
        return self._copies[base]

    def base_vertices(self) -> list[int]:
        return list(self._copies)

    # -- edges --------------------------------------------------------------

    def add_edge(self, u: int, v: int, w: float, cls: NegClass | None = None,
                 prov: Provenance | None = None) -> bool:
        """Insert an edge, keeping the minimum weight per (u, v, class).

        Returns True if the stored edge changed.
        """
        if cls is None:
            cls = NegClass.REAL if w < 0 else NegClass.NONNEG
        if cls == NegClass.NONNEG and w < 0:
            raise GraphError(f"non-negative class edge ({u},{v}) has weight {w}")
        row = self.out[cls][u]
        old = row.get(v)
        if old is not None and old <= w:
            return False
        row[v] = w
        self.inn[cls][v][u] = w
        if prov is not None:
            self.prov[(u, v, int(cls))] = prov
        elif old is not None:
            self.prov.pop((u, v, int(cls)), None)
        aw = abs(w)
        if aw > self.weight_bound:
            self.weight_bound = aw
        self._version += 1
        return True

    def remove_edge(self, u: int, v: int, cls: NegClass) -> None:
        del self.out[cls][u][v]
        del self.inn[cls][v][u]
        self.prov.pop((u, v, int(cls)), None)
        self._version += 1

    def weight(self, u: int, v: int, cls: NegClass) -> float | None:
        return self.out[cls][u].get(v)

    def min_weight(self, u: int, v: int) -> float | None:
        ws = [self.out[c][u][v] for c in CLASSES if v in self.out[c][u]]
        return min(ws) if ws else None

    def out_edges(self, u: int) -> Iterator[tuple[int, float, NegClass]]:
        for cls in CLASSES:
            for v, w in self.out[cls][u].items():
                yield v, w, cls

    def in_edges(self, v: int) -> Iterator[tuple[int, float, NegClass]]:
        for cls in CLASSES:
            for u, w in self.inn[cls][v].items():
                yield u, w, cls

    def edges(self, classes=CLASSES) -> Iterator[tuple[int, int, float, NegClass]]:
        for cls in classes:
            for u, row in enumerate(self.out[cls]):
                for v, w in row.items():
                    yield u, v, w, cls

    @property
    def m(self) -> int:
        return sum(len(row) for cls in CLASSES for row in self.out[cls])

    def negative_vertices(self) -> set[int]:
        return {u for u, row in enumerate(self.out[NegClass.REAL]) if row}

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g.meta = list(self.meta)
        g.out = tuple([dict(r) for r in rows] for rows in self.out)
        g.inn = tuple([dict(r) for r in rows] for rows in self.inn)
        g.prov = dict(self.prov)
        g.weight_bound = self.weight_bound
        g._copies = {b: list(c) for b, c in self._copies.items()}
        g._version = 0
        g._csr_cache = {}
        return g

    def csr(self, classes, reverse: bool = False):
        """(indptr, indices, weights) arrays for the edges of the given classes."""
        key = (tuple(int(c) for c in classes), reverse, self._version)
        hit = self._csr_cache.get(key)
        if hit is not None:
            return hit
        adj = self.inn if reverse else self.out
        n = self.n
        indptr = np.zeros(n + 1, dtype=np.int64)
        idx: list[int] = []
        wts: list[float] = []
        for u in range(n):
            for cls in classes:
                row = adj[cls][u]
                idx.extend(row.keys())
                wts.extend(row.values())
            indptr[u + 1] = len(idx)
        out = (indptr, np.asarray(idx, dtype=np.int64), np.asarray(wts, dtype=np.float64))
        if any(k[2] != self._version for k in self._csr_cache):
            self._csr_cache = {}
        self._csr_cache[key] = out
        return out

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, |N|={len(self.negative_vertices())})"


def from_edges(n: int, edges) -> Graph:
    """Build a base graph; edges with negative weight become RealNegative."""
    g = Graph(n)
    for u, v, w in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        g.add_edge(u, v, float(w))
    return g


def add_copy(g: Graph, base: int, shift: float, stats=None) -> int:
    """Add a shifted copy of ``base`` together with every admissible edge.

    For each in-neighbour u of some existing copy v_i the candidate weight is
    w(u, v_i) + shift - delta(v_i); the minimum non-negative candidate becomes
    the edge (u, v_new). Out-edges are symmetric. All added edges are
    NonNegative class.
    """
    if base >= g.n or not g.is_base(base):
        raise GraphError(f"{base} is not a base vertex")
    copies = list(g.copies_of(base))
    best_in: dict[int, tuple[float, int]] = {}
    best_out: dict[int, tuple[float, int]] = {}
    scans = 0
    for vi in copies:
        dvi = g.shift(vi)
        for cls in CLASSES:
            row = g.inn[cls][vi]
            scans += len(row)
            for u, w in row.items():
                val = w + shift - dvi
                if val >= 0:
                    cur = best_in.get(u)
                    if cur is None or val < cur[0]:
                        best_in[u] = (val, vi)
            row = g.out[cls][vi]
            scans += len(row)
            for x, w in row.items():
                val = w + dvi - shift
                if val >= 0:
                    cur = best_out.get(x)
                    if cur is None or val < cur[0]:
                        best_out[x] = (val, vi)
    v_new = g.add_vertex(base=base, shift=shift)
    for u, (val, vi) in best_in.items():
        g.add_edge(u, v_new, val, NegClass.NONNEG, Provenance("copy-in", (u, vi)))
    for x, (val, vi) in best_out.items():
        g.add_edge(v_new, x, val, NegClass.NONNEG, Provenance("copy-out", (vi, x)))
    if stats is not None:
        stats.add("edge_scans", scans)
        stats.add("copies_added", 1)
    return v_new


def potential_violations(g: Graph, phi: Potential) -> list[tuple[int, int, float]]:
    bad = []
    for u, row in enumerate(g.out[NegClass.NONNEG]):
        pu = phi[u]
        for v, w in row.items():
            if w + pu - phi[v] < 0:
                bad.append((u, v, w + pu - phi[v]))
    return bad


def validate_potential(g: Graph, phi: Potential) -> bool:
    return not potential_violations(g, phi)


def apply_potential(g: Graph, phi: Potential, strict: bool = True) -> Graph:
    """Reweight every edge by w + phi(tail) - phi(head), keeping classes frozen.

    Copy shifts become delta - phi(v_i) + phi(v_0). With ``strict=False`` an
    invalid potential is logged and offending edges are demoted to
    RealNegative instead of raising.
    """
    if len(phi) < g.n:
        raise GraphError(f"potential covers {len(phi)} of {g.n} vertices")
    bad = potential_violations(g, phi)
    if bad and strict:
        raise InvalidPotentialError(bad)
    if bad:
        log.warning("invalid potential: %d edges turned negative", len(bad))
    h = Graph.__new__(Graph)
    h.meta = [
        m if m.base == v else VertexMeta(m.base, m.shift - phi[v] + phi[m.base], m.is_steiner)
        for v, m in enumerate(g.meta)
    ]
    h.out = ([], [], [])
    h.inn = ([], [], [])
    n = g.n
    for cls in CLASSES:
        for _ in range(n):
            h.out[cls].append({})
            h.inn[cls].append({})
    h.prov = dict(g.prov)
    h._copies = {b: list(c) for b, c in g._copies.items()}
    h._version = 0
    h._csr_cache = {}
    bound = 0.0
    demoted = {(u, v) for u, v, _ in bad}
    for cls in CLASSES:
        outs, inns = h.out, h.inn
        for u, row in enumerate(g.out[cls]):
            pu = phi[u]
            for v, w in row.items():
                nw = w + pu - phi[v]
                c = cls
                if cls == NegClass.NONNEG and (u, v) in demoted:
                    c = NegClass.REAL
                    old = outs[c][u].get(v)
                    if old is not None and old <= nw:
                        continue
                outs[c][u][v] = nw
                inns[c][v][u] = nw
                if abs(nw) > bound:
                    bound = abs(nw)
    h.weight_bound = bound
    return h


def add_copy_links(g: Graph) -> Graph:
    """Copy of ``g`` with an edge (v_i, v_j) of weight delta(v_j) - delta(v_i)
    between every ordered pair of distinct copies of the same base vertex.
    Negative links are ImaginaryNegative, the rest NonNegative."""
    h = g.copy()
    for base, copies in g._copies.items():
        if len(copies) < 2:
            continue
        for vi in copies:
            di = g.shift(vi)
            for vj in copies:
                if vi == vj:
                    continue
                w = g.shift(vj) - di
                cls = NegClass.IMAG if w < 0 else NegClass.NONNEG
                h.add_edge(vi, vj, w, cls, Provenance("copy-link", (vi, vj)))
    return h


def check_invariant_I2(g: Graph, dist) -> list[tuple[int, int, int, float, float]]:
    """Edges with w(u_i, v_j) < d(u_0, v_0) + delta(v_j) - delta(u_i).

    ``dist[a][b]`` must hold exact distances between base vertices of ``g``.
    """
    bad = []
    meta = g.meta
    for u, v, w, cls in g.edges():
        mu, mv = meta[u], meta[v]
        d = dist[mu.base][mv.base]
        bound = d + mv.shift - mu.shift
        if w < bound:
            bad.append((u, v, int(cls), w, bound))
    return bad
