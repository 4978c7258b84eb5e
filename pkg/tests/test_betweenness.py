import math

import pytest

from shortcut_sssp.betweenness import (BetweennessConfig, build_betweenness_graph,
                                       project_walk, sample_hitting_set, sample_size,
                                       sbw_matrix, strong_betweenness_reduce)
from shortcut_sssp.generate import gen_random
from shortcut_sssp.graph import (NEGATIVE_CLASSES, Graph, NegClass, add_copy_links,
                                 apply_potential, from_edges, validate_potential)
from shortcut_sssp.oracle import CycleCertificate, bellman_ford, brute_hop_all
from shortcut_sssp.preprocess import split_negative_vertices

from conftest import cycle_free_corpus


def bf_callback(H):
    return bellman_ford(H)


def test_config_validation():
    with pytest.raises(ValueError):
        BetweennessConfig(h=0)
    with pytest.raises(ValueError):
        BetweennessConfig(b=0.5)


def test_sample_clamps_to_n():
    cfg = BetweennessConfig(b=1, rng_seed=3)
    assert sample_hitting_set({4, 1, 2}, cfg, n=100) == [1, 2, 4]
    big = set(range(50))
    assert sample_hitting_set(big, BetweennessConfig(b=50), n=60) == sorted(big)


def test_sample_deterministic_and_sized():
    cfg = BetweennessConfig(b=1, sample_constant=1.0, rng_seed=42)
    pool = set(range(200))
    a = sample_hitting_set(pool, cfg, n=200)
    assert a == sample_hitting_set(pool, cfg, n=200)
    assert len(a) == sample_size(200, 200, cfg) == math.ceil(math.log(200))


def test_layered_graph_without_sample():
    g = gen_random(6, 0.5, (-8, 8), 0.3, seed=1)
    H = build_betweenness_graph(g, [], 1)
    assert H.n == 5 * g.n
    assert not any(True for _ in H.edges(NEGATIVE_CLASSES))
    assert all(w >= 0 for *_, w, _ in [(u, v, w, c) for u, v, w, c in H.edges()])


def test_layered_edge_count_closed_form():
    g = from_edges(4, [(0, 1, 2), (1, 2, -3), (2, 3, 1), (3, 0, 4)])
    S = [1]
    H = build_betweenness_graph(g, S, 1)
    e_plus, neg = 3, 1
    assert H.m == 5 * e_plus + 4 * (g.n + neg) + len(S)


def test_empty_negative_set_gives_zero_potential():
    g = gen_random(5, 0.5, (0, 9), 0.0, seed=0)
    res = strong_betweenness_reduce(g, set(), BetweennessConfig(), bf_callback)
    assert not res.has_cycle and not res.phi.any()


def test_two_cycle_certificate():
    g = from_edges(2, [(0, 1, -1), (1, 0, -1)])
    H = build_betweenness_graph(g, [0], 1)
    cfg = BetweennessConfig(h=1, b=1, sample_constant=1.0)
    for seed in range(20):
        cfg.rng_seed = seed
        if sample_hitting_set({0, 1}, cfg, g.n) == [0]:
            break
    res = strong_betweenness_reduce(g, {0, 1}, cfg, bf_callback)
    assert res.sample == [0] and res.has_cycle
    assert res.cycle.total_weight == -2 and res.cycle.verify(g)
    assert isinstance(bellman_ford(H), CycleCertificate)


def test_project_walk_drops_layer_changes():
    assert project_walk([0, 3, 4, 1, 0], 3) == [0, 1, 0]


def _iteration_input(g):
    sp, _ = split_negative_vertices(g)
    return add_copy_links(sp)


@pytest.mark.parametrize("h", [1, 2])
def test_potential_valid_and_hub_distances_nonnegative(h):
    for seed, g in cycle_free_corpus(25, n_hi=8):
        G = _iteration_input(g)
        N = G.negative_vertices()
        cfg = BetweennessConfig(h=h, b=1, sample_constant=0.5, rng_seed=seed)
        res = strong_betweenness_reduce(G, N, cfg, bf_callback)
        assert validate_potential(G, res.phi)
        D = brute_hop_all(apply_potential(G, res.phi), 2 * h)[2 * h]
        for x in res.sample:
            assert (D[:, x] >= 0).all() and (D[x, :] >= 0).all()


def test_sbw_zero_without_negative_edges():
    g = gen_random(6, 0.5, (0, 9), 0.0, seed=3)
    assert not sbw_matrix(g, set(range(6)), 2).any()


def test_sbw_counts_self_reachable_vertex_once():
    g = Graph(1)
    v = g.add_vertex()
    g.add_edge(0, v, -1, NegClass.REAL)
    g.add_edge(v, 0, 0, NegClass.NONNEG)
    # s = t = 0 on the negative closed walk 0 -> v -> 0
    assert sbw_matrix(g, {0}, 2)[0, 0] == 1
