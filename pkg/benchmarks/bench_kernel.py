"""Time the compiled hop kernel against the pure-Python one.

    python3 benchmarks/bench_kernel.py [--sizes 64 128 256] [--hops 4] [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from shortcut_sssp import _hopcore_py
from shortcut_sssp.generate import gen_random
from shortcut_sssp.graph import NEGATIVE_CLASSES, NegClass

try:
    from shortcut_sssp import _hopcore
except ImportError:
    _hopcore = None


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--hops", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    rows = []
    for n in a.sizes:
        g = gen_random(n, a.density, (-8, 8), 0.3, seed=n)
        init = np.zeros(n)    # all vertices as sources
        args = (n, *g.csr((NegClass.NONNEG,)), *g.csr(NEGATIVE_CLASSES), init, a.hops)
        t_py, (lp, sp) = best_of(_hopcore_py.hop_layers, args, a.repeat)
        row = {"n": n, "m": g.m, "hops": a.hops, "python_s": round(t_py, 5), "scans": sp}
        if _hopcore is not None:
            t_cy, (lc, sc) = best_of(_hopcore.hop_layers, args, a.repeat)
            assert np.array_equal(lp, lc) and sp == sc, "kernels disagree"
            row["cython_s"] = round(t_cy, 5)
            row["speedup"] = round(t_py / t_cy, 1) if t_cy else None
        rows.append(row)
        print(json.dumps(row))
    if _hopcore is None:
        print("compiled kernel not built; only the Python timings are shown")


if __name__ == "__main__":
    main()
