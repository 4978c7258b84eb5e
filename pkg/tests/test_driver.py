import math

import numpy as np
import pytest

from shortcut_sssp.driver import (RunStats, SolveConfig, SolverError, default_b_rule,
                                  default_base_threshold, shortcut_iteration,
                                  shortest_path_tree, solve, unwind_distances,
                                  verify_distances)
from shortcut_sssp.generate import gen_random, gen_shifted
from shortcut_sssp.graph import Graph, from_edges
from shortcut_sssp.oracle import CycleCertificate, bellman_ford, floyd_warshall
from shortcut_sssp.preprocess import split_negative_vertices

from conftest import cycle_free_corpus

INF = math.inf


def test_config_defaults():
    assert default_base_threshold(2) == 4
    assert default_base_threshold(2 ** 16) == 16
    assert default_b_rule(32, 2 ** 16) == 2
    with pytest.raises(ValueError):
        SolveConfig(base_threshold=0)
    with pytest.raises(ValueError):
        SolveConfig(strategy="fastest")


def test_nonneg_graph_matches_dijkstra():
    g = gen_random(30, 0.2, (0, 20), 0.0, seed=4)
    assert solve(g, 0).dist == bellman_ford(g, 0)


def test_source_must_be_base_vertex():
    g = Graph(1)
    c = g.add_vertex(base=0, shift=1.0)
    with pytest.raises(ValueError):
        solve(g, c)
    with pytest.raises(ValueError):
        solve(g, 5)


def test_unreachable_vertices_are_inf():
    g = from_edges(4, [(0, 1, -2), (2, 3, -5), (3, 2, -5)])
    res = solve(g, 0)
    assert res.dist == [0, -2, INF, INF]


def test_negative_cycle_certificate_in_input_ids():
    g = from_edges(5, [(0, 3, 1), (3, 4, -2), (4, 3, 1), (1, 2, 0)])
    res = solve(g, 0)
    assert res.has_cycle and res.cycle.verify(g)
    assert set(res.cycle.walk) == {3, 4}


@pytest.mark.parametrize("strategy", ["reference", "simple", "bucketed"])
@pytest.mark.parametrize("threshold", [1, None])
def test_random_graphs_match_oracle(strategy, threshold):
    cfg = SolveConfig(strategy=strategy, base_threshold=threshold)
    for seed in range(150):
        n = 1 + seed % 14
        g = gen_random(n, 0.5, (-8, 8), 0.15, seed) if seed % 3 else gen_shifted(n, 0.5, seed=seed)
        ref = bellman_ford(g, 0)
        res = solve(g, 0, cfg)
        if isinstance(ref, CycleCertificate):
            assert res.has_cycle and res.cycle.verify(g)
        else:
            assert res.dist == ref


def test_larger_shifted_graphs_iterate():
    total = RunStats()
    for seed in range(6):
        g = gen_shifted(40, 0.3, seed=seed)
        res = solve(g, 0, SolveConfig(base_threshold=1, sample_constant=0.3, rng_seed=seed))
        assert res.dist == bellman_ford(g, 0)
        total.counters.update(res.stats.counters)
    assert total["iterations"] > 0
    assert total["hop_audit_fallback"] == 0


def test_seed_does_not_change_output():
    for seed in range(20):
        g = gen_shifted(12, 0.5, seed=seed)
        outs = {tuple(solve(g, 0, SolveConfig(rng_seed=s, base_threshold=1)).dist)
                for s in (1, 2)}
        assert len(outs) == 1


def test_max_iterations_is_a_hard_stop():
    for seed in range(40):
        g = gen_shifted(12, 0.5, seed=seed)
        cfg = SolveConfig(base_threshold=1, max_iterations=0)
        try:
            res = solve(g, 0, cfg)
        except SolverError as e:
            assert "no convergence" in str(e)
            return
        assert res.stats["audit_exit"] == 1
    pytest.fail("every instance finished without iterating")


def test_iteration_shifts_distances_by_potential():
    for seed, g in cycle_free_corpus(30):
        sp, _ = split_negative_vertices(g)
        it = shortcut_iteration(sp, SolveConfig(rng_seed=seed, sample_constant=0.5))
        d0, _ = floyd_warshall(sp)
        d1, _ = floyd_warshall(it.graph)
        phi, n = it.phi, g.n
        expect = d0[:n, :n] + phi[:n, None] - phi[None, :n]
        assert np.array_equal(d1[:n, :n], np.where(np.isinf(d0[:n, :n]), INF, expect))


def test_recursion_statistics_recorded():
    g = gen_shifted(24, 0.5, seed=3)
    res = solve(g, 0, SolveConfig(base_threshold=1))
    d = res.stats.to_dict()
    assert d["schema"] == 1
    if res.stats["iterations"]:
        assert res.stats["recursive_calls"] >= 1 and d["recursion_depth"] >= 1
        assert res.stats["callback_edge_scans"] > 0


def test_unwind():
    assert unwind_distances([0, 3, INF], [], 0) == [0, 3, INF]
    # w_phi(s, t) = w + phi(s) - phi(t)
    assert unwind_distances([0, 5], [np.array([2.0, 4.0])], 0) == [0, 7]
    with pytest.raises(ValueError):
        unwind_distances([0, 1], [np.array([1.0])], 0)


def test_shortest_path_tree():
    g = from_edges(2, [(0, 1, 4)])
    assert shortest_path_tree(g, 0, [0, 4]) == {1: 0}
    g = from_edges(4, [(0, 2, 1), (0, 1, 1), (2, 3, 1), (1, 3, 1)])
    assert shortest_path_tree(g, 0, [0, 1, 1, 2])[3] == 1


def test_tree_paths_match_distances():
    for seed, g in cycle_free_corpus(30):
        dist = solve(g, 0).dist
        pred = shortest_path_tree(g, 0, dist)
        for t, p in pred.items():
            assert dist[p] + g.min_weight(p, t) == dist[t]
        for t in range(g.n):
            hops, v = 0, t
            while v != 0 and dist[t] != INF:
                v = pred[v]
                hops += 1
                assert hops <= g.n


def test_verify_distances_rejects_perturbation():
    for seed, g in cycle_free_corpus(20):
        dist = bellman_ford(g, 0)
        assert verify_distances(g, 0, dist)
        for t in range(1, g.n):
            if dist[t] == INF:
                continue
            for eps in (-1, 1):
                bad = list(dist)
                bad[t] += eps
                assert not verify_distances(g, 0, bad)


def test_verify_rejects_values_lowered_on_zero_cycle():
    g = from_edges(3, [(0, 1, 5), (1, 2, 0), (2, 1, 0)])
    assert verify_distances(g, 0, [0, 5, 5])
    assert not verify_distances(g, 0, [0, 3, 3])
