"""Shared fixtures: the 8-node worked example and small graph builders."""

import numpy as np
import pytest

from stoc import (
    AttributeSchema,
    AttributeSpec,
    SemanticVector,
    build_graph,
)

# the 8-node example: sex is categorical, x/y are quantitative coordinates
FIG1_EDGES = [
    (0, 1), (0, 2), (0, 7), (1, 2), (1, 3), (3, 4),
    (4, 5), (4, 6), (5, 6), (5, 7), (6, 7),
]
FIG1_ATTRS = {
    0: (1, 0.0, 0.1),
    1: (1, 0.0, 0.0),
    2: (1, 0.1, 0.1),
    3: (0, 0.2, 0.0),
    4: (0, 0.4, 0.0),
    5: (0, 0.55, 0.1),
    6: (0, 0.6, 0.0),
    7: (1, 0.7, 0.09),
}


def fig1_schema():
    return AttributeSchema(
        [
            AttributeSpec("x", "quantitative", lo=0.0, hi=1.0),
            AttributeSpec("y", "quantitative", lo=0.0, hi=1.0),
            AttributeSpec("sex", "categorical"),
        ]
    )


@pytest.fixture
def fig1_graph():
    """The worked-example graph with its raw coordinates as the vectors."""
    schema = fig1_schema()
    vectors = [
        SemanticVector((x, y), (frozenset([str(sex)]),))
        for sex, x, y in (FIG1_ATTRS[i] for i in range(8))
    ]
    return build_graph([f"v{i}" for i in range(8)], FIG1_EDGES, vectors, schema)


@pytest.fixture
def fig1_files(tmp_path):
    """The same graph as on-disk fixture files (declared bounds keep raw values)."""
    edges = tmp_path / "fig1.edges"
    edges.write_text(
        "# worked example\n" + "".join(f"v{u} v{v}\n" for u, v in FIG1_EDGES)
    )
    attrs = tmp_path / "fig1.attrs"
    rows = ["node,sex,x,y\n"]
    rows += [f"v{i},{s},{x},{y}\n" for i, (s, x, y) in sorted(FIG1_ATTRS.items())]
    attrs.write_text("".join(rows))
    schema = tmp_path / "fig1.schema"
    schema.write_text("sex categorical\nx quantitative 0 1\ny quantitative 0 1\n")
    return {"edges": str(edges), "attrs": str(attrs), "schema": str(schema)}


def bare_graph(n, edges):
    """Attribute-free graph for topology-only tests."""
    schema = AttributeSchema([])
    vectors = [SemanticVector((), ()) for _ in range(n)]
    return build_graph([f"u{i}" for i in range(n)], edges, vectors, schema)


def gnp_graph(n, p, seed):
    """Erdos-Renyi topology with no attributes."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if mask[u, v]]
    return bare_graph(n, edges)


class ForcedFirstPick:
    """rng stand-in whose first integers() call returns a fixed value."""

    def __init__(self, first, seed=0):
        self._first = first
        self._rng = np.random.default_rng(seed)
        self._used = False

    def integers(self, *args, **kwargs):
        if not self._used:
            self._used = True
            return self._first
        return self._rng.integers(*args, **kwargs)
