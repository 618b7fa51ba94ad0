"""Brute-force reference implementations for validating the fast paths.

Everything here trades speed for obviousness and shares no machinery with
the code it checks: neighborhoods come from a dict-of-sets BFS, modularity
from the literal double sum, distance distributions from full pair
enumeration.  Size guards keep the costs at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tuning import EmpiricalCDF


def _adjacency_sets(graph):
    adj = {v: set() for v in range(graph.n)}
    for u, v in graph.edges():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def slow_l_neighborhood(graph, v, l):
    """Hop-l ball (including v) by plain frontier expansion over edge sets."""
    adj = _adjacency_sets(graph)
    seen = {v}
    frontier = {v}
    for _ in range(l):
        nxt = set()
        for u in frontier:
            nxt |= adj[u] - seen
        seen |= nxt
        frontier = nxt
    return seen


def exact_pairwise_cdf(graph, dist, limit_n=300):
    """Distance multiset over ALL distinct node pairs (the sampled CDF's target)."""
    if graph.n > limit_n:
        raise ValueError(f"graph too large for the exact pairwise oracle (n={graph.n} > {limit_n})")
    vals = [
        dist(u, v) for u in range(graph.n) for v in range(u + 1, graph.n)
    ]
    if graph.n == 2:
        pass  # the two ordered pairs collapse to the single unordered one
    return EmpiricalCDF(np.asarray(vals, dtype=float))


def modularity_reference(graph, clustering):
    """Literal double-sum modularity, O(n^2); cross-checks the fast version."""
    if graph.m < 1:
        raise ValueError("modularity needs at least one edge")
    adj = _adjacency_sets(graph)
    deg = {v: len(adj[v]) for v in adj}
    labels = clustering.labels
    two_m = 2.0 * graph.m
    total = 0.0
    for v in range(graph.n):
        for w in range(graph.n):
            if labels[v] != labels[w]:
                continue
            a_vw = 1.0 if w in adj[v] else 0.0
            total += a_vw - deg[v] * deg[w] / two_m
    return total / two_m


@dataclass
class ValidationReport:
    """Outcome of the definitional checks on a clustering."""

    total: bool = True
    disjoint: bool = True
    tau_close: bool = True
    connected: bool = True
    enqueue_once: bool = True
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return (
            self.total and self.disjoint and self.tau_close and self.connected and self.enqueue_once
        )


def validate_clustering(graph, clustering, tau, dist, tol=0.0):
    """Check partition totality, disjointness, seed closeness and connectivity.

    ``dist`` must be the same pair-distance the clustering was produced with
    (tau-closeness is defined against the backend that was actually used).
    """
    report = ValidationReport()
    labels = clustering.labels
    n = graph.n

    if labels.size != n or np.any(labels < 0):
        report.total = False
        report.failures.append("some nodes carry no cluster assignment")

    seen = np.zeros(n, dtype=np.int64)
    for cluster in clustering.clusters:
        for v in cluster.members:
            seen[v] += 1
            if labels[v] != cluster.id:
                report.disjoint = False
                report.failures.append(f"node {v} listed in cluster {cluster.id} but labeled {labels[v]}")
    if np.any(seen != 1):
        report.disjoint = False
        bad = np.flatnonzero(seen != 1)[:5].tolist()
        report.failures.append(f"nodes covered != once: {bad}")
    if sum(len(c.members) for c in clustering.clusters) != n:
        report.total = False
        report.failures.append("cluster sizes do not sum to n")

    adj = _adjacency_sets(graph)
    for cluster in clustering.clusters:
        members = set(cluster.members)
        for v in cluster.members:
            if v != cluster.seed:
                d = dist(cluster.seed, v)
                if d > tau + tol:
                    report.tau_close = False
                    report.failures.append(
                        f"cluster {cluster.id}: d(seed {cluster.seed}, {v}) = {d:.6f} > tau = {tau:.6f}"
                    )
        # reachability from the seed through members only
        stack = [cluster.seed]
        reached = {cluster.seed}
        while stack:
            u = stack.pop()
            for w in adj[u] & members:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        if reached != members:
            report.connected = False
            stranded = sorted(members - reached)[:5]
            report.failures.append(f"cluster {cluster.id} not connected; stranded {stranded}")

    enq = clustering.params.get("enqueued_total")
    if enq is not None and enq != n:
        report.enqueue_once = False
        report.failures.append(f"enqueued {enq} times for {n} nodes")
    return report
