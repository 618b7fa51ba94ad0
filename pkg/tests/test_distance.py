"""Semantic, topological and combined distance behavior."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stoc import (
    AttributeSchema,
    AttributeSpec,
    DistanceConfig,
    NeighborhoodTable,
    SemanticVector,
    combined_distance,
    discretized_semantic_distance,
    exact_l_neighborhood,
    jaccard_distance,
    make_pair_distance,
    semantic_distance,
    topological_distance_exact,
)

from conftest import gnp_graph


def test_semantic_identity(fig1_graph):
    v = fig1_graph.vectors[3]
    assert semantic_distance(v, v, fig1_graph.schema) == 0.0


def test_semantic_worked_value(fig1_graph):
    # v0 vs v3: sex differs, dx=0.2, dy=0.1, Q=2, A=3
    d = semantic_distance(fig1_graph.vectors[0], fig1_graph.vectors[3], fig1_graph.schema)
    assert d == pytest.approx((math.sqrt(0.05) * math.sqrt(2) + 1) / 3, abs=1e-9)
    assert d == pytest.approx(0.438743, abs=1e-6)


def test_semantic_close_pairs(fig1_graph):
    d01 = semantic_distance(fig1_graph.vectors[0], fig1_graph.vectors[1], fig1_graph.schema)
    d02 = semantic_distance(fig1_graph.vectors[0], fig1_graph.vectors[2], fig1_graph.schema)
    assert d01 == pytest.approx(0.0471405, abs=1e-6)
    assert d02 == pytest.approx(0.0471405, abs=1e-6)


def test_categorical_set_only_jaccard():
    schema = AttributeSchema([AttributeSpec("sectors", "categorical-set")])
    t1 = SemanticVector((), (frozenset({"IT", "Bank"}),))
    t2 = SemanticVector((), (frozenset({"IT"}),))
    assert semantic_distance(t1, t2, schema) == pytest.approx(0.5)


def test_both_missing_categorical_agree():
    schema = AttributeSchema([AttributeSpec("c", "categorical")])
    empty = SemanticVector((), (frozenset(),))
    assert semantic_distance(empty, empty, schema) == 0.0
    assert jaccard_distance(frozenset(), frozenset()) == 0.0


def test_schema_mismatch_rejected(fig1_graph):
    other = SemanticVector((0.5,), ())
    with pytest.raises(ValueError):
        semantic_distance(fig1_graph.vectors[0], other, fig1_graph.schema)


_tuple_schema = AttributeSchema(
    [AttributeSpec("q1", "quantitative"), AttributeSpec("q2", "quantitative"), AttributeSpec("c", "categorical")]
)
_vectors = st.tuples(
    st.floats(0, 1, allow_nan=False),
    st.floats(0, 1, allow_nan=False),
    st.sampled_from(["a", "b", "c"]),
).map(lambda t: SemanticVector((t[0], t[1]), (frozenset([t[2]]),)))


@settings(max_examples=60, deadline=None)
@given(_vectors, _vectors)
def test_semantic_symmetry_and_range(t1, t2):
    d12 = semantic_distance(t1, t2, _tuple_schema)
    d21 = semantic_distance(t2, t1, _tuple_schema)
    assert d12 == pytest.approx(d21, abs=1e-12)
    assert 0.0 <= d12 <= 1.0
    dd = discretized_semantic_distance(t1, t2, _tuple_schema)
    assert dd == pytest.approx(discretized_semantic_distance(t2, t1, _tuple_schema), abs=1e-12)
    assert 0.0 <= dd <= 1.0


_single_q = AttributeSchema([AttributeSpec("q", "quantitative")])


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 1, allow_nan=False), st.floats(0, 1, allow_nan=False))
def test_discretization_dominates_on_single_quantitative(x, y):
    t1 = SemanticVector((x,), ())
    t2 = SemanticVector((y,), ())
    plain = semantic_distance(t1, t2, _single_q)
    disc = discretized_semantic_distance(t1, t2, _single_q)
    assert disc >= plain - 1e-12


def test_discretized_cases(fig1_graph):
    t1 = SemanticVector((0.50,), ())
    t2 = SemanticVector((0.51,), ())
    assert discretized_semantic_distance(t1, t2, _single_q) == 1.0
    assert discretized_semantic_distance(t1, t1, _single_q) == 0.0
    # v0 vs v1: x equal, y differs, sex equal
    d = discretized_semantic_distance(
        fig1_graph.vectors[0], fig1_graph.vectors[1], fig1_graph.schema
    )
    assert d == pytest.approx(1 / 3)


def test_topological_worked_values(fig1_graph):
    assert topological_distance_exact(fig1_graph, 0, 1, 1) == pytest.approx(0.4, abs=1e-9)
    assert topological_distance_exact(fig1_graph, 0, 2, 1) == pytest.approx(0.25, abs=1e-9)
    assert topological_distance_exact(fig1_graph, 0, 7, 1) == pytest.approx(2 / 3, abs=1e-9)
    assert topological_distance_exact(fig1_graph, 0, 3, 1) == pytest.approx(5 / 6, abs=1e-9)
    assert topological_distance_exact(fig1_graph, 4, 4, 1) == 0.0


def test_topological_requires_positive_radius(fig1_graph):
    with pytest.raises(ValueError):
        topological_distance_exact(fig1_graph, 0, 1, 0)


def test_combined_cases():
    assert combined_distance(0.3, 0.7) == 0.7
    assert combined_distance(0.0, 0.0) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1, allow_nan=False))
def test_combined_idempotent(x):
    assert combined_distance(x, x) == x


def test_neighborhood_table_matches_bfs():
    g = gnp_graph(80, 0.05, seed=3)
    for l in (1, 2, 3):
        table = NeighborhoodTable(g, l)
        for v in (0, 7, 33, 79):
            assert set(int(x) for x in table.ball(v)) == exact_l_neighborhood(g, v, l)
        rng = np.random.default_rng(l)
        for _ in range(30):
            u, v = rng.integers(0, g.n, size=2)
            assert table.distance(int(u), int(v)) == pytest.approx(
                topological_distance_exact(g, int(u), int(v), l), abs=1e-12
            )


def test_neighborhood_table_advance_equals_fresh():
    g = gnp_graph(50, 0.08, seed=9)
    assert NeighborhoodTable(g, 1).advance().same_rows(NeighborhoodTable(g, 2))


def test_distance_symmetry_randomized(fig1_graph):
    rng = np.random.default_rng(0)
    cfg = DistanceConfig(l=1, mode="combined")
    d = make_pair_distance(fig1_graph, cfg)
    for _ in range(30):
        u, v = rng.integers(0, 8, size=2)
        assert d(int(u), int(v)) == pytest.approx(d(int(v), int(u)), abs=1e-12)
        assert 0.0 <= d(int(u), int(v)) <= 1.0


def test_pair_distance_modes(fig1_graph):
    sem = make_pair_distance(fig1_graph, DistanceConfig(mode="semantic"))
    topo = make_pair_distance(fig1_graph, DistanceConfig(l=1, mode="topological"))
    both = make_pair_distance(fig1_graph, DistanceConfig(l=1, mode="combined"))
    assert both(0, 1) == pytest.approx(max(sem(0, 1), topo(0, 1)), abs=1e-12)
    assert topo(0, 2) == pytest.approx(0.25, abs=1e-12)
    assert sem(0, 3) == pytest.approx(0.438743, abs=1e-6)


def test_config_validation():
    with pytest.raises(ValueError):
        DistanceConfig(l=0, mode="combined")
    with pytest.raises(ValueError):
        DistanceConfig(mode="nonsense")
    DistanceConfig(l=0, mode="semantic")  # semantic mode ignores l


def test_sketch_wrapper_checks_radius(fig1_graph):
    from stoc import build_sketch_table, topological_distance_sketch

    table = build_sketch_table(fig1_graph, 2, k=8, hash_seed=0)
    assert topological_distance_sketch(table, 0, 0, l=2) == 0.0
    with pytest.raises(ValueError, match="l=2"):
        topological_distance_sketch(table, 0, 1, l=1)
    cfg = DistanceConfig(l=1, mode="combined", topological_backend="sketch")
    with pytest.raises(ValueError, match="prebuilt"):
        make_pair_distance(fig1_graph, cfg)
    with pytest.raises(ValueError, match="config wants l=1"):
        make_pair_distance(fig1_graph, cfg, table)
