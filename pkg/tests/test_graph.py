"""Loading, validation, normalization and neighborhood access."""

import io

import pytest

from stoc import (
    ActiveView,
    GraphFormatError,
    exact_l_neighborhood,
    load_graph,
    parse_schema,
)

from conftest import FIG1_EDGES, gnp_graph


def test_fig1_load_counts(fig1_files):
    g = load_graph(fig1_files["edges"], fig1_files["attrs"], fig1_files["schema"])
    assert g.n == 8
    assert g.m == 11
    g.validate()


def test_fig1_neighbors(fig1_files):
    g = load_graph(fig1_files["edges"], fig1_files["attrs"], fig1_files["schema"])
    v0 = g.index_of("v0")
    assert {g.node_ids[int(w)] for w in g.neighbors(v0)} == {"v1", "v2", "v7"}
    v4 = g.index_of("v4")
    assert {g.node_ids[int(w)] for w in g.neighbors(v4)} == {"v3", "v5", "v6"}


def test_single_node_no_edges():
    g = load_graph(
        io.StringIO(""),
        io.StringIO("node,a\nx,1.5\n"),
        io.StringIO("a quantitative\n"),
    )
    assert g.n == 1 and g.m == 0
    assert list(g.neighbors(0)) == []


def test_duplicate_edge_collapses():
    g = load_graph(
        io.StringIO("a b\nb a\na b\n"),
        io.StringIO("node,c\na,x\nb,y\n"),
        io.StringIO("c categorical\n"),
    )
    assert g.m == 1


def test_self_loop_dropped():
    g = load_graph(
        io.StringIO("a a\na b\n"),
        io.StringIO("node,c\na,x\nb,y\n"),
        io.StringIO("c categorical\n"),
    )
    assert g.m == 1
    assert 0 not in set(int(x) for x in g.neighbors(0))


def test_l_neighborhoods(fig1_graph):
    assert exact_l_neighborhood(fig1_graph, 0, 1) == {0, 1, 2, 7}
    assert exact_l_neighborhood(fig1_graph, 3, 1) == {1, 3, 4}
    assert exact_l_neighborhood(fig1_graph, 5, 0) == {5}


def test_balls_monotone_in_l():
    g = gnp_graph(60, 0.05, seed=11)
    for v in range(g.n):
        prev = exact_l_neighborhood(g, v, 0)
        for l in range(1, 5):
            cur = exact_l_neighborhood(g, v, l)
            assert prev <= cur
            prev = cur


def test_normalization_extremes_and_constant():
    g = load_graph(
        io.StringIO(""),
        io.StringIO("node,a,b\nu,10,7\nv,30,7\nw,20,7\n"),
        io.StringIO("a quantitative\nb quantitative\n"),
    )
    a_vals = sorted(vec.quant[0] for vec in g.vectors)
    assert a_vals[0] == 0.0 and a_vals[-1] == 1.0
    assert all(vec.quant[1] == 0.0 for vec in g.vectors)  # constant column


def test_declared_bounds_preserve_raw_values():
    g = load_graph(
        io.StringIO(""),
        io.StringIO("node,a\nu,0.25\nv,0.5\n"),
        io.StringIO("a quantitative 0 1\n"),
    )
    assert g.vectors[g.index_of("u")].quant[0] == 0.25


def test_categorical_set_and_missing_values():
    g = load_graph(
        io.StringIO(""),
        io.StringIO("node,tags\nu,IT;Bank\nv,IT\nw,\n"),
        io.StringIO("tags categorical-set:;\n"),
    )
    assert g.vectors[g.index_of("u")].cats[0] == frozenset({"IT", "Bank"})
    assert g.vectors[g.index_of("w")].cats[0] == frozenset()


def test_unknown_node_id_reports_line():
    with pytest.raises(GraphFormatError, match=r":2.*'ghost'"):
        load_graph(
            io.StringIO("a b\na ghost\n"),
            io.StringIO("node,c\na,x\nb,y\n"),
            io.StringIO("c categorical\n"),
        )


def test_non_numeric_quantitative_reports_line():
    with pytest.raises(GraphFormatError, match=r":3.*'oops'"):
        load_graph(
            io.StringIO(""),
            io.StringIO("node,a\nu,1\nv,oops\n"),
            io.StringIO("a quantitative\n"),
        )


def test_missing_quantitative_rejected():
    with pytest.raises(GraphFormatError, match="missing quantitative"):
        load_graph(
            io.StringIO(""),
            io.StringIO("node,a\nu,\n"),
            io.StringIO("a quantitative\n"),
        )


def test_schema_column_mismatch():
    with pytest.raises(GraphFormatError, match="mismatch"):
        load_graph(
            io.StringIO(""),
            io.StringIO("node,a,b\nu,1,2\n"),
            io.StringIO("a quantitative\n"),
        )


def test_bad_schema_line():
    with pytest.raises(GraphFormatError, match="unknown attribute kind"):
        parse_schema(io.StringIO("a float\n"))


def test_tab_delimited_attributes():
    g = load_graph(
        io.StringIO("a b\n"),
        io.StringIO("node\tc\na\tx\nb\ty\n"),
        io.StringIO("c categorical\n"),
    )
    assert g.n == 2 and g.m == 1


def test_directed_load_keeps_direction():
    g = load_graph(
        io.StringIO("a b\n"),
        io.StringIO("node,c\na,x\nb,y\n"),
        io.StringIO("c categorical\n"),
        directed=True,
    )
    assert g.m == 1
    assert list(g.neighbors(g.index_of("a"))) == [g.index_of("b")]
    assert list(g.neighbors(g.index_of("b"))) == []


def test_symmetry_scan(fig1_graph):
    nbr = {v: set(int(x) for x in fig1_graph.neighbors(v)) for v in range(fig1_graph.n)}
    for u, v in FIG1_EDGES:
        assert v in nbr[u] and u in nbr[v]


def test_active_view_filters_and_is_monotone(fig1_graph):
    view = ActiveView(fig1_graph)
    assert set(int(x) for x in view.neighbors(0)) == {1, 2, 7}
    view.deactivate([2, 7])
    assert set(int(x) for x in view.neighbors(0)) == {1}
    assert not view.is_active(2)
    assert view.active_count() == 6
    view.deactivate([2])  # re-deactivation changes nothing
    assert view.active_count() == 6


def test_out_of_range_neighbors(fig1_graph):
    with pytest.raises(IndexError):
        fig1_graph.neighbors(99)
