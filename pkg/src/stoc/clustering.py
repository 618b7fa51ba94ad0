"""Seeded extraction of connected tau-close clusters until the graph is used up.

One query grows a cluster around a random seed by BFS, admitting a node only
if its distance TO THE SEED is within tau; that is what makes the seed a
centroid of the extracted cluster.  The main loop repeats on the remaining
active nodes, so clusters are disjoint and cover every node.  The number of
clusters is an output, never an input.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .distance import (
    COMBINED,
    EXACT,
    EXACT_BACKEND_MAX_NODES,
    SEMANTIC,
    SKETCH,
    TOPOLOGICAL,
    DistanceConfig,
    NeighborhoodTable,
    make_pair_distance,
)
from .graph import ActiveView
from .sketch import build_sketch_table, choose_k
from .tuning import TuningReport, tune_parameters

VARIANT_MODES = {"stoc": COMBINED, "sc": SEMANTIC, "toc": TOPOLOGICAL}


@dataclass
class Cluster:
    id: int
    seed: int
    members: list  # dense indices in admission order; members[0] == seed


@dataclass
class Clustering:
    """A partition of the nodes into labeled clusters with their seeds."""

    labels: np.ndarray  # node index -> cluster id
    clusters: list
    params: dict = field(default_factory=dict)

    @property
    def k(self):
        return len(self.clusters)

    @property
    def n(self):
        return int(self.labels.size)

    def sizes(self):
        return [len(c.members) for c in self.clusters]


def sto_query(graph, view, seed, tau, seed_dist, _scratch=None):
    """Grow one connected tau-close cluster around ``seed``.

    BFS over active nodes; a frontier neighbor x joins iff it is not already
    a member and seed_dist(x) <= tau.  Members are returned in admission
    order (seed first).  The view is not modified here.
    """
    if not view.is_active(seed):
        raise ValueError(f"seed {seed} is not active")
    in_cluster = _scratch if _scratch is not None else np.zeros(graph.n, dtype=bool)
    members = [seed]
    in_cluster[seed] = True
    queue = deque([seed])
    while queue:
        v = queue.popleft()
        for x in view.neighbors(v):
            x = int(x)
            if not in_cluster[x] and seed_dist(x) <= tau:
                in_cluster[x] = True
                members.append(x)
                queue.append(x)
    in_cluster[members] = False  # leave the scratch array clean for reuse
    return members


def run_stoc(graph, tau, config: DistanceConfig, rng, topo_table=None, params=None):
    """Extract tau-close clusters from random seeds until no node is active.

    Topological distances keep using the table built on the full graph even
    as the view shrinks; BFS reachability honors the shrinking view.
    Deterministic for a given rng state.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    pair_dist = make_pair_distance(graph, config, topo_table)
    n = graph.n
    view = ActiveView(graph)
    labels = np.full(n, -1, dtype=np.int64)
    clusters = []
    scratch = np.zeros(n, dtype=bool)
    enqueued_total = 0

    # uniform sampling over active nodes with O(1) removal (swap-with-last)
    pool = np.arange(n, dtype=np.int64)
    slot = np.arange(n, dtype=np.int64)
    alive = n
    while alive:
        seed = int(pool[int(rng.integers(alive))])
        members = sto_query(graph, view, seed, tau, partial(pair_dist, seed), scratch)
        cid = len(clusters)
        labels[members] = cid
        clusters.append(Cluster(cid, seed, members))
        view.deactivate(members)
        enqueued_total += len(members)
        for x in members:
            i = slot[x]
            last = pool[alive - 1]
            pool[i] = last
            slot[last] = i
            slot[x] = -1
            alive -= 1

    run_params = dict(params or {})
    run_params.setdefault("tau", float(tau))
    run_params.setdefault("l", getattr(topo_table, "l", config.l))
    run_params.setdefault("mode", config.mode)
    run_params["n_clusters"] = len(clusters)
    run_params["enqueued_total"] = enqueued_total
    return Clustering(labels, clusters, run_params)


def resolve_backend(backend, n):
    """'auto' picks exact neighborhoods up to a size cutoff, sketches above."""
    if backend == "auto":
        return EXACT if n <= EXACT_BACKEND_MAX_NODES else SKETCH
    if backend not in (EXACT, SKETCH):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def run_variant(
    graph,
    variant="stoc",
    alpha_s=0.4,
    alpha_t=0.4,
    epsilon=0.9,
    rng=None,
    tau=None,
    l=None,
    l_max=10,
    backend="auto",
    discretize=False,
    k=None,
    hash_seed=None,
    topo_table=None,
):
    """Tune (as needed) and cluster in one shot.

    Variants: 'stoc' uses the combined distance, 'sc' attributes only,
    'toc' topology only.  Explicit tau/l bypass the corresponding tuning
    step.  Returns (Clustering, TuningReport).
    """
    if variant not in VARIANT_MODES:
        raise ValueError(f"unknown variant {variant!r}")
    for name, a in (("alpha_s", alpha_s), ("alpha_t", alpha_t)):
        if not 0 <= a <= 1:
            raise ValueError(f"{name} must be in [0, 1]")
    rng = np.random.default_rng(rng)
    mode = VARIANT_MODES[variant]
    backend = resolve_backend(backend, graph.n)
    if k is None and backend == SKETCH:
        k = choose_k(graph.n, epsilon)
    if hash_seed is None:
        # derived from the run's rng so one seed reproduces everything
        hash_seed = int(rng.integers(0, 2**63))

    if graph.n < 2:
        # nothing to sample; a single node is its own cluster at any tau
        tau_eff = 0.0 if tau is None else float(tau)
        config = DistanceConfig(l=1, mode=SEMANTIC, discretize_quantitative=discretize)
        report = TuningReport(tau_hat=tau_eff, chosen_l=1, alpha_s=alpha_s, alpha_t=alpha_t, epsilon=epsilon)
        clustering = run_stoc(graph, tau_eff, config, rng, params=_base_params(variant, epsilon, backend, k, hash_seed, discretize))
        return clustering, report

    tau_eff, l_eff, report, table = tune_parameters(
        graph,
        variant,
        alpha_s,
        alpha_t,
        epsilon,
        rng,
        l_max=l_max,
        backend=backend,
        k=k,
        hash_seed=hash_seed,
        discretize=discretize,
        tau_override=tau,
        l_override=l,
    )
    if topo_table is not None:
        if topo_table.l != l_eff:
            raise ValueError(f"provided table has l={topo_table.l}, tuning chose l={l_eff}")
        table = topo_table
    if mode != SEMANTIC and table is None:
        table = (
            NeighborhoodTable(graph, l_eff)
            if backend == EXACT
            else build_sketch_table(graph, l_eff, k, hash_seed)
        )

    config = DistanceConfig(
        l=l_eff,
        mode=mode,
        discretize_quantitative=discretize,
        topological_backend=backend,
    )
    params = _base_params(variant, epsilon, backend, k, hash_seed, discretize)
    params.update({"alpha_s": alpha_s, "alpha_t": alpha_t})
    clustering = run_stoc(graph, tau_eff, config, rng, topo_table=table, params=params)
    return clustering, report


def _base_params(variant, epsilon, backend, k, hash_seed, discretize):
    return {
        "variant": variant,
        "epsilon": epsilon,
        "backend": backend,
        "sketch_k": k,
        "hash_seed": hash_seed,
        "discretize": discretize,
    }


def write_clustering(clustering: Clustering, graph, path):
    """One ``<external-id>\\t<cluster-id>`` row per node, plus a JSON sidecar.

    The sidecar (<path>.meta.json) records the parameters needed to
    reproduce the run.
    """
    path = str(path)
    with open(path, "w", encoding="utf-8") as fh:
        for v in range(graph.n):
            fh.write(f"{graph.node_ids[v]}\t{int(clustering.labels[v])}\n")
    meta = dict(clustering.params)
    meta["seeds"] = [graph.node_ids[c.seed] for c in clustering.clusters]
    with open(path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, default=str)
        fh.write("\n")


def read_assignment(path, graph):
    """Load a clustering file back into a label array aligned with ``graph``."""
    labels = np.full(graph.n, -1, dtype=np.int64)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected '<node>\\t<cluster>'")
            labels[graph.index_of(parts[0])] = int(parts[1])
    if np.any(labels < 0):
        raise ValueError(f"{path}: not every node of the graph is assigned")
    return labels
