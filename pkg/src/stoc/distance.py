"""Node distance functions: semantic, topological and their max composition.

The semantic distance compares attribute tuples (Euclidean over normalized
quantitative attributes, Jaccard over categorical value sets, averaged over
all attributes).  The topological distance is the Jaccard distance between
hop-l neighborhoods, served either exactly or from bottom-k sketches.
Combining the two with max keeps the result a distance and means a pair is
close only when it is close on both counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import AttributedGraph, exact_l_neighborhood

COMBINED = "combined"
SEMANTIC = "semantic"
TOPOLOGICAL = "topological"

EXACT = "exact"
SKETCH = "sketch"

# above this node count the exact neighborhood table gets expensive; the
# auto backend switches to sketches
EXACT_BACKEND_MAX_NODES = 10_000


@dataclass
class DistanceConfig:
    """How pairwise distance is evaluated during tuning and clustering."""

    l: int = 1
    mode: str = COMBINED
    discretize_quantitative: bool = False
    topological_backend: str = EXACT

    def __post_init__(self):
        if self.mode not in (COMBINED, SEMANTIC, TOPOLOGICAL):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.topological_backend not in (EXACT, SKETCH):
            raise ValueError(f"unknown backend {self.topological_backend!r}")
        if self.uses_topology and self.l < 1:
            raise ValueError("hop radius must be >= 1 when topological distance is used")

    @property
    def uses_topology(self):
        return self.mode != SEMANTIC

    @property
    def uses_semantics(self):
        return self.mode != TOPOLOGICAL


def jaccard_distance(a, b):
    """1 - |a∩b| / |a∪b| over two sets; two empty sets count as agreeing."""
    if not a and not b:
        return 0.0
    inter = len(a & b)
    union = len(a) + len(b) - inter
    return 1.0 - inter / union


def _check_conformance(t1, t2, schema):
    if not (t1.conforms_to(schema) and t2.conforms_to(schema)):
        raise ValueError("semantic vectors do not conform to the shared schema")


def semantic_distance(t1, t2, schema):
    """Attribute-tuple distance in [0, 1].

    sqrt(sum of squared quantitative deltas) * sqrt(Q) plus the Jaccard
    distances of the categorical value sets, divided by the attribute count.
    The sqrt(Q) factor scales the Euclidean block so each quantitative
    attribute can contribute up to 1 before the division.
    """
    _check_conformance(t1, t2, schema)
    a = schema.num_attributes
    if a == 0:
        return 0.0
    q = schema.num_quantitative
    acc = 0.0
    if q:
        sq = 0.0
        for x, y in zip(t1.quant, t2.quant):
            d = x - y
            sq += d * d
        acc = math.sqrt(sq) * math.sqrt(q)
    for x, y in zip(t1.cats, t2.cats):
        acc += jaccard_distance(x, y)
    return acc / a


def discretized_semantic_distance(t1, t2, schema):
    """Semantic distance with every quantitative value treated as a category.

    Each quantitative attribute becomes a singleton set: equal values give 0,
    anything else gives 1.  Loses all notion of numeric closeness.
    """
    _check_conformance(t1, t2, schema)
    a = schema.num_attributes
    if a == 0:
        return 0.0
    acc = 0.0
    for x, y in zip(t1.quant, t2.quant):
        acc += 0.0 if x == y else 1.0
    for x, y in zip(t1.cats, t2.cats):
        acc += jaccard_distance(x, y)
    return acc / a


def combined_distance(ds, dt):
    """max(ds, dt): zero only when both components are zero."""
    return ds if ds >= dt else dt


def topological_distance_exact(g, v1, v2, l):
    """Jaccard distance between the exact hop-l neighborhoods of v1 and v2."""
    if l < 1:
        raise ValueError("hop radius must be >= 1")
    if v1 == v2:
        return 0.0
    return jaccard_distance(exact_l_neighborhood(g, v1, l), exact_l_neighborhood(g, v2, l))


def topological_distance_sketch(table, v1, v2, l=None):
    """Sketch-estimated Jaccard distance between hop-l neighborhoods."""
    if l is not None and table.l != l:
        raise ValueError(f"sketch table built for l={table.l}, requested l={l}")
    return table.distance(v1, v2)


class NeighborhoodTable:
    """Precomputed exact hop-l neighborhoods for every node.

    Rows are sorted node-index arrays, built by l boolean sparse-matrix
    products of (A + I).  This is the exact counterpart of the sketch table:
    same interface, no approximation.  Built once on the full graph; the
    clustering loop keeps using it as the active view shrinks.
    """

    backend = EXACT

    def __init__(self, graph: AttributedGraph, l: int, _matrix=None):
        if l < 1:
            raise ValueError("hop radius must be >= 1")
        self.graph = graph
        self.l = l
        if _matrix is not None:
            self._m = _matrix
        else:
            base = _closed_adjacency(graph)
            m = base
            for _ in range(l - 1):
                m = _bool_product(base, m)
            self._m = m

    def ball(self, v):
        """Sorted indices of the hop-l neighborhood of v (includes v)."""
        m = self._m
        return m.indices[m.indptr[v] : m.indptr[v + 1]]

    def distance(self, v1, v2):
        if v1 == v2:
            return 0.0
        a = self.ball(v1)
        b = self.ball(v2)
        inter = np.intersect1d(a, b, assume_unique=True).size
        union = a.size + b.size - inter
        return 1.0 - inter / union

    def advance(self):
        """Table for l+1, reusing this table's rows."""
        nxt = _bool_product(_closed_adjacency(self.graph), self._m)
        return NeighborhoodTable(self.graph, self.l + 1, _matrix=nxt)

    def same_rows(self, other):
        """True when both tables hold identical neighborhoods (saturation test)."""
        return np.array_equal(self._m.indptr, other._m.indptr) and np.array_equal(
            self._m.indices, other._m.indices
        )


def _closed_adjacency(graph):
    from scipy.sparse import identity

    base = (graph.adjacency_matrix() + identity(graph.n, dtype=np.int32, format="csr")).tocsr()
    base.data[:] = 1
    base.sort_indices()
    return base


def _bool_product(a, b):
    m = a @ b
    m.data[:] = 1  # reachability only; counts are irrelevant and could overflow
    m.sort_indices()
    return m


def make_pair_distance(graph, config: DistanceConfig, topo_table=None):
    """Bind a DistanceConfig to a graph: returns f(u, v) -> distance.

    For topological modes a prebuilt table is expected; with the exact
    backend one is built on demand.
    """
    vectors = graph.vectors
    schema = graph.schema
    sem_fn = (
        discretized_semantic_distance if config.discretize_quantitative else semantic_distance
    )

    if config.mode == SEMANTIC:
        return lambda u, v: sem_fn(vectors[u], vectors[v], schema)

    if topo_table is None:
        if config.topological_backend != EXACT:
            raise ValueError("sketch backend requires a prebuilt sketch table")
        topo_table = NeighborhoodTable(graph, config.l)
    if topo_table.l != config.l:
        raise ValueError(
            f"topology table built for l={topo_table.l}, config wants l={config.l}"
        )

    if config.mode == TOPOLOGICAL:
        return topo_table.distance

    def pair_distance(u, v):
        dt = topo_table.distance(u, v)
        ds = sem_fn(vectors[u], vectors[v], schema)
        return ds if ds >= dt else dt

    return pair_distance
