import math
import random

import numpy as np
import pytest

from shortcut_sssp.graph import (Graph, GraphError, InvalidPotentialError, NegClass,
                                 add_copy, add_copy_links, apply_potential,
                                 check_invariant_I2, from_edges, validate_potential)
from shortcut_sssp.oracle import floyd_warshall

from conftest import cycle_free_corpus


def test_classes_assigned_from_sign():
    g = from_edges(3, [(0, 1, -2), (1, 2, 0), (2, 0, 4)])
    assert g.weight(0, 1, NegClass.REAL) == -2
    assert g.weight(1, 2, NegClass.NONNEG) == 0
    assert g.negative_vertices() == {0}


def test_nonneg_class_rejects_negative_weight():
    g = Graph(2)
    with pytest.raises(GraphError):
        g.add_edge(0, 1, -1, NegClass.NONNEG)


def test_parallel_edges_keep_minimum_per_class():
    g = Graph(2)
    g.add_edge(0, 1, 5)
    assert not g.add_edge(0, 1, 7)
    assert g.add_edge(0, 1, 3)
    g.add_edge(0, 1, -1)
    assert g.weight(0, 1, NegClass.NONNEG) == 3
    assert g.min_weight(0, 1) == -1
    assert g.m == 2


def test_out_of_range_edge():
    with pytest.raises(GraphError):
        from_edges(2, [(0, 2, 1)])


def test_add_copy_positive_shift():
    g = from_edges(2, [(0, 1, -2)])
    v = add_copy(g, 1, 5.0)
    assert g.weight(0, v, NegClass.NONNEG) == 3
    assert g.base(v) == 1 and g.shift(v) == 5


def test_add_copy_negative_shift_has_no_candidate():
    g = from_edges(2, [(0, 1, -2)])
    v = add_copy(g, 1, -5.0)
    assert g.min_weight(0, v) is None


def test_add_copy_minimises_over_existing_copies():
    g = from_edges(2, [(0, 1, -2)])
    c4 = g.add_vertex(base=1, shift=4.0)
    g.add_edge(0, c4, 1, NegClass.NONNEG)
    v = add_copy(g, 1, 5.0)
    assert g.weight(0, v, NegClass.NONNEG) == min(-2 + 5 - 0, 1 + 5 - 4)


def test_zero_potential_is_identity():
    g = from_edges(3, [(0, 1, -2), (1, 2, 3)])
    h = apply_potential(g, [0, 0, 0])
    assert sorted(h.edges()) == sorted(g.edges())


def test_single_edge_reweighting():
    g = from_edges(2, [(0, 1, 3)])
    h = apply_potential(g, [1, 2])
    assert h.weight(0, 1, NegClass.NONNEG) == 2


def test_reweighting_telescopes_on_paths():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(2, 8)
        ws = [rng.randint(0, 9) for _ in range(n - 1)]
        g = from_edges(n, [(i, i + 1, w) for i, w in enumerate(ws)])
        phi = [rng.randint(-5, 5) for _ in range(n)]
        h = apply_potential(g, phi, strict=False)
        total = sum(h.min_weight(i, i + 1) for i in range(n - 1))
        assert total == sum(ws) + phi[0] - phi[-1]


def test_validate_potential():
    g = from_edges(3, [(0, 1, 2), (1, 2, 1), (0, 2, -1)])
    assert validate_potential(g, [7, 7, 7])
    assert not validate_potential(g, [0, 3, 0])      # phi(b) - phi(a) > w(a, b)
    # exact distances from a virtual source on a non-negative graph
    nn = from_edges(3, [(0, 1, 2), (1, 2, 1)])
    assert validate_potential(nn, [0, 0, 0])
    with pytest.raises(InvalidPotentialError):
        apply_potential(g, [0, 3, 0])


def test_frozen_classes_survive_reweighting():
    g = from_edges(2, [(0, 1, -2)])
    h = apply_potential(g, [5, 0])
    assert h.weight(0, 1, NegClass.REAL) == 3


def test_i2_empty_on_plain_graphs():
    for _, g in cycle_free_corpus(20):
        d, _ = floyd_warshall(g)
        assert check_invariant_I2(g, d) == []


def test_i2_after_random_copies():
    rng = random.Random(11)
    for _, g in cycle_free_corpus(30, n_hi=8):
        d, _ = floyd_warshall(g)
        bases = g.base_vertices()
        for _ in range(3):
            add_copy(g, rng.choice(bases), float(rng.randint(-6, 6)))
        assert check_invariant_I2(g, d) == []


def test_i2_reports_hand_built_violation():
    g = Graph(2)
    g.add_edge(0, 1, 0)
    v1 = g.add_vertex(base=1, shift=1.0)
    g.add_edge(0, v1, 0, NegClass.NONNEG)
    bad = check_invariant_I2(g, np.array([[0, 0], [math.inf, 0]]))
    assert [(u, v) for u, v, *_ in bad] == [(0, v1)]


def test_copy_links_classes():
    g = Graph(1)
    a = g.add_vertex(base=0, shift=-2.0)
    h = add_copy_links(g)
    assert h.weight(0, a, NegClass.IMAG) == -2
    assert h.weight(a, 0, NegClass.NONNEG) == 2
    assert g.m == 0


def test_csr_cache_invalidated_on_mutation():
    g = from_edges(3, [(0, 1, 1)])
    ptr, idx, _ = g.csr((NegClass.NONNEG,))
    assert list(idx) == [1]
    g.add_edge(0, 2, 4)
    ptr, idx, w = g.csr((NegClass.NONNEG,))
    assert sorted(idx) == [1, 2]
