"""Bottom-k sketch construction, merging and the Jaccard estimator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stoc import (
    BottomKSketch,
    SketchTable,
    build_sketch_table,
    choose_k,
    estimate_jaccard_distance,
    exact_l_neighborhood,
    node_ranks,
    topological_distance_exact,
)

from conftest import bare_graph, gnp_graph


def test_choose_k_values():
    assert choose_k(60977, 0.9) == 14
    assert choose_k(1, 0.9) == 8  # floor clamp
    assert choose_k(math.exp(81), 0.9) == 100
    assert choose_k(1000, 0.3) == 77


def test_choose_k_epsilon_range():
    with pytest.raises(ValueError):
        choose_k(100, 0.0)
    with pytest.raises(ValueError):
        choose_k(100, 1.5)


def test_node_ranks_unique_and_deterministic():
    r1 = node_ranks(5000, hash_seed=42)
    r2 = node_ranks(5000, hash_seed=42)
    assert np.array_equal(r1, r2)
    assert np.unique(r1).size == 5000
    assert not np.array_equal(r1, node_ranks(5000, hash_seed=43))


def _sketch_of(elements, ranks, k):
    """Bottom-k sketch of an arbitrary element set under a given rank map."""
    r = np.sort(ranks[sorted(elements)])
    return BottomKSketch(
        ranks=r[:k].copy(), k=k, true_cardinality=len(elements) if len(elements) <= k else None
    )


@settings(max_examples=60, deadline=None)
@given(
    st.sets(st.integers(0, 99), min_size=1, max_size=40),
    st.sets(st.integers(0, 99), min_size=1, max_size=40),
    st.integers(1, 20),
    st.integers(0, 5),
)
def test_merge_property(a, b, k, seed):
    # bottom-k(A u B) == bottom-k(bottom-k(A) u bottom-k(B))
    ranks = node_ranks(100, hash_seed=seed)
    direct = np.sort(ranks[sorted(a | b)])[:k]
    ka = np.sort(ranks[sorted(a)])[:k]
    kb = np.sort(ranks[sorted(b)])[:k]
    merged = np.unique(np.concatenate([ka, kb]))[:k]
    assert np.array_equal(direct, merged)


def test_propagation_matches_bfs_when_k_large():
    for seed in (0, 1):
        g = gnp_graph(120, 0.03, seed=seed)
        for l in (1, 2, 3):
            table = build_sketch_table(g, l, k=200, hash_seed=seed)
            for v in range(0, g.n, 7):
                assert table.invert(v) == exact_l_neighborhood(g, v, l)
                assert table.sketch(v).true_cardinality == len(exact_l_neighborhood(g, v, l))


def test_fig1_sketch_represents_neighborhood(fig1_graph):
    table = build_sketch_table(fig1_graph, 1, k=8, hash_seed=7)
    assert table.invert(0) == {0, 1, 2, 7}


def test_path_graph_two_rounds():
    g = bare_graph(3, [(0, 1), (1, 2)])
    table = build_sketch_table(g, 2, k=8, hash_seed=0)
    assert table.invert(0) == {0, 1, 2}


def test_estimator_trivial_cases():
    ranks = node_ranks(300, hash_seed=1)
    s = _sketch_of(set(range(40)), ranks, k=64)
    assert estimate_jaccard_distance(s, s) == 0.0
    a = _sketch_of(set(range(30)), ranks, k=64)
    b = _sketch_of(set(range(30, 60)), ranks, k=64)
    assert estimate_jaccard_distance(a, b) == 1.0  # disjoint, both complete


def test_estimator_exact_when_sets_small():
    ranks = node_ranks(200, hash_seed=5)
    a_set = set(range(0, 50))
    b_set = set(range(25, 80))
    true = 1 - len(a_set & b_set) / len(a_set | b_set)
    a = _sketch_of(a_set, ranks, k=100)
    b = _sketch_of(b_set, ranks, k=100)
    assert estimate_jaccard_distance(a, b) == pytest.approx(true, abs=1e-12)


def test_estimator_statistics_k64():
    # {1..100} vs {51..150}: true Jaccard distance 2/3
    a_set = set(range(1, 101))
    b_set = set(range(51, 151))
    estimates = []
    for seed in range(50):
        ranks = node_ranks(200, hash_seed=seed)
        a = _sketch_of(a_set, ranks, k=64)
        b = _sketch_of(b_set, ranks, k=64)
        estimates.append(estimate_jaccard_distance(a, b))
    mean = float(np.mean(estimates))
    assert abs(np.mean(estimates[:20]) - 2 / 3) <= 0.15
    assert abs(mean - 2 / 3) <= 0.05  # near-unbiased across seeds


def test_estimator_requires_matching_k():
    ranks = node_ranks(50, hash_seed=0)
    a = _sketch_of({1, 2, 3}, ranks, k=8)
    b = _sketch_of({1, 2}, ranks, k=16)
    with pytest.raises(ValueError):
        estimate_jaccard_distance(a, b)


def test_table_distance_accuracy_random_graph():
    g = gnp_graph(500, 0.02, seed=4)
    k = choose_k(g.n, 0.3)
    table = build_sketch_table(g, 2, k, hash_seed=11)
    rng = np.random.default_rng(12)
    good = 0
    for _ in range(100):
        u, v = (int(x) for x in rng.integers(0, g.n, size=2))
        exact = topological_distance_exact(g, u, v, 2)
        if abs(table.distance(u, v) - exact) <= 0.3:
            good += 1
    assert good >= 90


def test_build_deterministic():
    g = gnp_graph(200, 0.03, seed=2)
    t1 = build_sketch_table(g, 2, k=16, hash_seed=99)
    t2 = build_sketch_table(g, 2, k=16, hash_seed=99)
    assert t1.same_rows(t2)
    assert np.array_equal(t1.rows, t2.rows)


def test_advance_equals_fresh_build():
    g = gnp_graph(100, 0.04, seed=8)
    assert build_sketch_table(g, 1, k=12, hash_seed=3).advance(g).same_rows(
        build_sketch_table(g, 2, k=12, hash_seed=3)
    )


def test_cache_roundtrip(tmp_path, fig1_graph):
    table = build_sketch_table(fig1_graph, 2, k=8, hash_seed=21)
    path = tmp_path / "sketch.npz"
    table.save(path)
    loaded = SketchTable.load(path, expect=(fig1_graph.digest(), 2, 8, 21))
    assert loaded.same_rows(table)
    assert loaded.l == table.l and loaded.k == table.k and loaded.hash_seed == table.hash_seed
    with pytest.raises(ValueError, match="mismatch"):
        SketchTable.load(path, expect=(fig1_graph.digest(), 3, 8, 21))


def test_sketch_invariants():
    g = gnp_graph(150, 0.03, seed=6)
    table = build_sketch_table(g, 2, k=10, hash_seed=0)
    for v in range(g.n):
        s = table.sketch(v)
        assert s.ranks.size <= 10
        if s.ranks.size > 1:
            assert np.all(s.ranks[1:] > s.ranks[:-1])  # strictly increasing
