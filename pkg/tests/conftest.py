import numpy as np
import pytest

from shortcut_sssp.generate import gen_random, gen_shifted
from shortcut_sssp.oracle import floyd_warshall


def cycle_free_corpus(count, n_lo=3, n_hi=10, density=0.5, seed0=0):
    """Mix of shifted graphs (many negative arcs) and plain random graphs,
    keeping only those without a negative cycle."""
    out = []
    seed = seed0
    while len(out) < count:
        n = n_lo + seed % (n_hi - n_lo + 1)
        if seed % 2:
            g = gen_shifted(n, density, seed=seed)
        else:
            g = gen_random(n, density * 0.8, (-8, 8), 0.3, seed)
        _, cyc = floyd_warshall(g)
        if not cyc:
            out.append((seed, g))
        seed += 1
    return out


def assert_same_dist(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    assert a.shape == b.shape
    assert np.array_equal(a, b), f"{a} != {b}"


@pytest.fixture(scope="session")
def small_corpus():
    return cycle_free_corpus(60)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Append a one-line PASS/FAIL verdict to the end-of-run summary."""
    def rec(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
