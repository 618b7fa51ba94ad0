"""Clustering quality measures: within-cluster sum of squares and modularity.

WCSS needs a vector space, so categorical value sets enter through indicator
coordinates (one per observed value); quantitative attributes contribute
their normalized values directly.  Modularity is computed per cluster in
O(m + n) as internal-edge fraction minus the squared degree fraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SemanticEmbedding:
    """Dense per-node vectors: quantitative values + categorical indicators."""

    matrix: np.ndarray  # (n, dim) float64
    feature_names: list

    @property
    def dim(self):
        return self.matrix.shape[1]


def build_embedding(graph) -> SemanticEmbedding:
    """Embed every node's attribute tuple into a fixed-dimension real vector.

    Indicator coordinates are created for each categorical value observed
    anywhere in the graph, in sorted order, so the embedding is deterministic
    and comparable across runs on the same data.
    """
    schema = graph.schema
    q = schema.num_quantitative
    names = [s.name for s in schema.quantitative]
    observed = []
    for j, spec in enumerate(schema.categorical):
        values = set()
        for vec in graph.vectors:
            values.update(vec.cats[j])
        values = sorted(values)
        observed.append(values)
        names.extend(f"{spec.name}={val}" for val in values)

    mat = np.zeros((graph.n, len(names)), dtype=np.float64)
    for i, vec in enumerate(graph.vectors):
        mat[i, :q] = vec.quant
        off = q
        for j, values in enumerate(observed):
            have = vec.cats[j]
            for t, val in enumerate(values):
                if val in have:
                    mat[i, off + t] = 1.0
            off += len(values)
    return SemanticEmbedding(mat, names)


def wcss(clustering, embedding: SemanticEmbedding):
    """Sum over clusters of squared deviations from the cluster mean vector."""
    mat = embedding.matrix
    total = 0.0
    for cluster in clustering.clusters:
        if not cluster.members:
            raise ValueError(f"cluster {cluster.id} is empty")
        block = mat[cluster.members]
        mu = block.mean(axis=0)
        diff = block - mu
        total += float(np.einsum("ij,ij->", diff, diff))
    return total


def modularity(graph, clustering):
    """Fraction of intra-cluster edges minus its degree-model expectation.

    Ranges over [-1/2, 1]; random assignments score about 0, good ones above.
    """
    if graph.directed:
        raise ValueError("modularity is defined here for undirected graphs")
    m = graph.m
    if m < 1:
        raise ValueError("modularity needs at least one edge")
    labels = clustering.labels
    n_clusters = clustering.k
    internal = np.zeros(n_clusters, dtype=np.int64)
    degree_sum = np.zeros(n_clusters, dtype=np.int64)
    for v in range(graph.n):
        c = labels[v]
        nbrs = graph.neighbors(v)
        degree_sum[c] += len(nbrs)
        internal[c] += int(np.count_nonzero(labels[nbrs] == c))
    internal //= 2  # each internal edge was seen from both endpoints
    q = internal / m - (degree_sum / (2.0 * m)) ** 2
    return float(q.sum())


def size_distribution(clustering):
    """(size, count) rows sorted by size; sum of size*count equals n."""
    counts = {}
    for cluster in clustering.clusters:
        s = len(cluster.members)
        counts[s] = counts.get(s, 0) + 1
    return sorted(counts.items())
