"""Command-line entry point; exit codes are the EXIT_* constants below."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import hop
from .driver import SolveConfig, SolverError, solve, verify_distances
from .generate import gen_random
from .io import (ParseError, format_cycle, format_distances, parse_distances,
                 parse_graph)
from .oracle import CycleCertificate, bellman_ford
from .shortcut import STRATEGIES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2   # EXIT_FAIL: mismatch, or a cycle on check


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="bucketed")
    p.add_argument("--base-threshold", type=int, default=None)
    p.add_argument("--stats", metavar="PATH", help="write run counters as JSON")


def _input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--source", required=True, type=int, help="1-indexed vertex id")


def _config(a) -> SolveConfig:
    if a.base_threshold is not None and a.base_threshold < 1:
        raise ParseError(0, "--base-threshold must be >= 1")
    return SolveConfig(base_threshold=a.base_threshold, strategy=a.strategy, rng_seed=a.seed)


def _load(a):
    with open(a.input) as f:
        g = parse_graph(f.read())
    if not 1 <= a.source <= g.n:
        raise ParseError(0, f"source {a.source} out of range 1..{g.n}")
    return g, a.source - 1


def cmd_sssp(a) -> int:
    g, s = _load(a)
    res = solve(g, s, _config(a))
    if a.stats:
        with open(a.stats, "w") as f:
            f.write(res.stats.to_json() + "\n")
    if res.has_cycle:
        sys.stdout.write(format_cycle(res.cycle.walk, res.cycle.total_weight))
    else:
        sys.stdout.write(format_distances(res.dist))
    return EXIT_OK


def cmd_oracle(a) -> int:
    g, s = _load(a)
    ref = bellman_ford(g, s)
    if isinstance(ref, CycleCertificate):
        sys.stdout.write(format_cycle(ref.walk, ref.total_weight))
    else:
        sys.stdout.write(format_distances(ref))
    return EXIT_OK


def cmd_check(a) -> int:
    g, s = _load(a)
    with open(a.dist) as f:
        text = f.read()
    first = text.split()
    if first and first[0] == "negcycle":
        walk = tuple(int(x) - 1 for x in first[1:-1])
        ok = CycleCertificate(walk, float(first[-1])).verify(g)
        print("negative cycle certificate " + ("valid" if ok else "INVALID"))
        return EXIT_FAIL
    dist = parse_distances(text, g.n)
    if verify_distances(g, s, dist):
        print("ok")
        return EXIT_OK
    print("distance check failed")
    return EXIT_FAIL


def _difftest_one(seed: int, a) -> str | None:
    n = 1 + seed % a.n_max
    g = gen_random(n, a.density, (-a.weight, a.weight), a.neg_fraction, seed)
    ref = bellman_ford(g, 0)
    try:
        res = solve(g, 0, SolveConfig(strategy=a.strategy, rng_seed=seed,
                                      base_threshold=a.base_threshold))
    except SolverError as e:
        return f"seed {seed}: solver error: {e}"
    if isinstance(ref, CycleCertificate):
        return None if res.has_cycle else f"seed {seed}: missed negative cycle"
    if res.has_cycle:
        return f"seed {seed}: spurious negative cycle"
    if res.dist != ref:
        return f"seed {seed}: distances differ"
    return None


def cmd_difftest(a) -> int:
    seeds = range(a.seed, a.seed + a.count)
    if a.workers > 1:
        with ThreadPoolExecutor(a.workers) as ex:
            out = list(ex.map(lambda s: _difftest_one(s, a), seeds))
    else:
        out = [_difftest_one(s, a) for s in seeds]
    bad = [m for m in out if m]
    for m in bad:
        print(m)
    print(f"{a.count} instances, {len(bad)} mismatches")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_bench(a) -> int:
    if a.input:
        g, s = _load(a)
    else:
        g, s = gen_random(a.n, a.density, (-8, 8), a.neg_fraction, a.seed), 0
    res = solve(g, s, _config(a))
    d = res.stats.to_dict()
    d["kernel"] = hop.KERNEL
    d["n"], d["m"] = g.n, g.m
    d["negative_cycle"] = res.has_cycle
    text = json.dumps(d, indent=2, sort_keys=True)
    if a.stats:
        with open(a.stats, "w") as f:
            f.write(text + "\n")
    print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shortcut-sssp",
                description="Single-source shortest paths with negative weights.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    q = sub.add_parser("sssp", help="solve single-source distances")
    _input_flags(q)
    _solver_flags(q)
    q.set_defaults(fn=cmd_sssp)

    q = sub.add_parser("oracle", help="Bellman-Ford on the same input")
    _input_flags(q)
    q.set_defaults(fn=cmd_oracle)

    q = sub.add_parser("check", help="verify a distance file against a graph")
    _input_flags(q)
    q.add_argument("--dist", required=True, metavar="PATH")
    q.set_defaults(fn=cmd_check)

    q = sub.add_parser("difftest", help="solve vs Bellman-Ford on random graphs")
    q.add_argument("--count", type=int, default=1000)
    q.add_argument("--seed", type=int, default=0, help="first seed")
    q.add_argument("--n-max", type=int, default=12)
    q.add_argument("--density", type=float, default=0.5)
    q.add_argument("--neg-fraction", type=float, default=0.3)
    q.add_argument("--weight", type=int, default=8, help="weights drawn from [-W, W]")
    q.add_argument("--strategy", choices=sorted(STRATEGIES), default="bucketed")
    q.add_argument("--base-threshold", type=int, default=None)
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(fn=cmd_difftest)

    q = sub.add_parser("bench", help="run once and print counters as JSON")
    q.add_argument("--input", metavar="PATH")
    q.add_argument("--source", type=int, default=1)
    q.add_argument("--n", type=int, default=128)
    q.add_argument("--density", type=float, default=0.5)
    q.add_argument("--neg-fraction", type=float, default=0.3)
    _solver_flags(q)
    q.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return a.fn(a)
    except (ParseError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
