import numpy as np
import pytest

from shortcut_sssp.generate import gen_random
from shortcut_sssp.graph import Graph, GraphError, NegClass, add_copy_links
from shortcut_sssp.oracle import brute_hop_all, floyd_warshall
from shortcut_sssp.preprocess import split_form_violations, split_negative_vertices, thaw


def test_split_rule_on_mixed_out_edges():
    g = Graph(4)
    for v, w in ((1, -3), (2, -1), (3, 2)):
        g.add_edge(0, v, w)
    out, smap = split_negative_vertices(g)
    (up, origin), = smap.items()
    assert origin == 0
    assert out.weight(0, up, NegClass.REAL) == -3
    assert out.weight(up, 1, NegClass.NONNEG) == 0
    assert out.weight(up, 2, NegClass.NONNEG) == 2
    # the non-negative edge stays on u (see the decisions ledger)
    assert out.weight(0, 3, NegClass.NONNEG) == 2
    assert out.base(up) == 0 and out.shift(up) == -3


def test_single_negative_edge_is_still_split():
    g = Graph(2)
    g.add_edge(0, 1, -4)
    out, smap = split_negative_vertices(g)
    assert out.n == 3 and len(smap) == 1


def test_no_negative_vertices_is_identity():
    g = gen_random(6, 0.5, (0, 9), 0.0, seed=1)
    out, smap = split_negative_vertices(g)
    assert smap == {} and sorted(out.edges()) == sorted(g.edges())


def test_imaginary_edges_rejected():
    g = Graph(2)
    g.add_edge(0, 1, -1, NegClass.IMAG)
    with pytest.raises(GraphError):
        split_negative_vertices(g)


def test_thaw_moves_nonnegative_real_edges():
    g = Graph(2)
    g.add_edge(0, 1, 3, NegClass.REAL)
    assert thaw(g) == 1
    assert g.weight(0, 1, NegClass.NONNEG) == 3 and g.negative_vertices() == set()


@pytest.mark.parametrize("seed", range(80))
def test_hop_distances_and_counts_preserved(seed):
    g = gen_random(2 + seed % 7, 0.5, (-8, 8), 0.3, seed)
    out, smap = split_negative_vertices(g)
    n = g.n
    assert split_form_violations(out) == []
    assert out.n - n == len(smap) == len(g.negative_vertices())
    assert out.negative_vertices() == g.negative_vertices()
    a, b = brute_hop_all(g, 4), brute_hop_all(out, 4)
    assert np.array_equal(a, b[:, :n, :n])


def test_split_graph_is_consistent_with_copy_links(small_corpus):
    for _, g in small_corpus:
        d, _ = floyd_warshall(g)
        out, _ = split_negative_vertices(g)
        dl, _ = floyd_warshall(add_copy_links(out))
        assert np.array_equal(dl[:g.n, :g.n], d)
