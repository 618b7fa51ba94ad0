"""Derive operational parameters (tau, l) from declarative attraction ratios.

The attraction ratio says what fraction of node pairs the user considers
similar.  tau is read off a sampled semantic-distance CDF as the alpha_s
quantile; l is then searched so that the fraction of pairs within tau
topologically lands closest to alpha_t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import distance as dist_mod
from .distance import EXACT, SKETCH, NeighborhoodTable
from .sketch import build_sketch_table


@dataclass
class EmpiricalCDF:
    """Sorted distance sample with lower-quantile and fraction lookups."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.sort(np.asarray(self.values, dtype=float))

    @property
    def size(self):
        return int(self.values.size)

    def quantile(self, q):
        """Lower empirical quantile: element at index ceil(q*s) - 1, clamped."""
        if self.size == 0:
            raise ValueError("empty sample has no quantiles")
        if not 0 <= q <= 1:
            raise ValueError("quantile must be in [0, 1]")
        idx = math.ceil(q * self.size) - 1
        idx = min(max(idx, 0), self.size - 1)
        return float(self.values[idx])

    def fraction_at_most(self, x):
        if self.size == 0:
            raise ValueError("empty sample")
        return int(np.searchsorted(self.values, x, side="right")) / self.size


@dataclass
class TuningReport:
    """Everything the tuning phase decided and the evidence it used."""

    tau_hat: float
    chosen_l: int
    alpha_trace: list = field(default_factory=list)  # (l, alpha_l) pairs
    semantic_cdf: EmpiricalCDF | None = None
    topological_cdfs: dict = field(default_factory=dict)  # l -> EmpiricalCDF
    alpha_s: float | None = None
    alpha_t: float | None = None
    epsilon: float | None = None


def pair_sample_size(n, epsilon):
    """ceil(2 ln n / eps^2): Hoeffding-sized sample for the pair-distance CDF."""
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    return math.ceil(2.0 * math.log(n) / (epsilon * epsilon))


def sample_pairs(n, count, rng):
    """Uniform ordered pairs of distinct nodes, with replacement across pairs."""
    u = rng.integers(0, n, size=count)
    v = rng.integers(0, n - 1, size=count)
    v = np.where(v >= u, v + 1, v)  # skip the diagonal without biasing
    return u, v


def sample_distance_cdf(graph, dist, epsilon, rng):
    """Empirical CDF of a pair-distance function over a Hoeffding-sized sample."""
    if graph.n < 2:
        raise ValueError("need at least two nodes to sample pairs")
    count = pair_sample_size(graph.n, epsilon)
    u, v = sample_pairs(graph.n, count, rng)
    vals = np.fromiter(
        (dist(int(a), int(b)) for a, b in zip(u, v)), dtype=float, count=count
    )
    return EmpiricalCDF(vals)


def compute_tau(cdf: EmpiricalCDF, alpha_s):
    """tau as the alpha_s quantile of the sampled distance distribution."""
    if not 0 <= alpha_s <= 1:
        raise ValueError("alpha_s must be in [0, 1]")
    return cdf.quantile(alpha_s)


def compute_l(
    graph,
    tau_hat,
    alpha_t,
    epsilon,
    rng,
    l_max=10,
    backend=SKETCH,
    k=None,
    hash_seed=0,
):
    """Search the hop radius whose pair-closeness fraction best matches alpha_t.

    For l = 1, 2, ... the topological distance CDF is sampled afresh and
    alpha_l = fraction of pairs with d_T <= tau_hat recorded.  The search
    stops when the gap |alpha_l - alpha_t| worsens, when it hits zero, when
    the neighborhoods stop changing, or at l_max; the best l seen wins.

    Returns (chosen_l, alpha_trace, table_at_chosen_l, cdfs_by_l).
    """
    if not 0 <= alpha_t <= 1:
        raise ValueError("alpha_t must be in [0, 1]")
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    if backend == SKETCH and k is None:
        raise ValueError("sketch backend needs an explicit k")

    trace = []
    cdfs = {}
    best_err = math.inf
    best_l = 1
    best_table = None
    prev_err = None
    prev_table = None
    table = None
    for l in range(1, l_max + 1):
        if table is None:
            if backend == EXACT:
                table = NeighborhoodTable(graph, 1)
            else:
                table = build_sketch_table(graph, 1, k, hash_seed)
        else:
            table = table.advance(graph) if backend == SKETCH else table.advance()
            if prev_table is not None and table.same_rows(prev_table):
                break  # neighborhoods saturated: every further alpha_l repeats
        cdf = sample_distance_cdf(graph, table.distance, epsilon, rng)
        alpha_l = cdf.fraction_at_most(tau_hat)
        trace.append((l, alpha_l))
        cdfs[l] = cdf
        err = abs(alpha_l - alpha_t)
        if err < best_err:
            best_err = err
            best_l = l
            best_table = table
        if err == 0.0:
            break  # cannot improve on an exact match
        if prev_err is not None and err > prev_err:
            break
        prev_err = err
        prev_table = table
    return best_l, trace, best_table, cdfs


def tune_parameters(
    graph,
    variant,
    alpha_s,
    alpha_t,
    epsilon,
    rng,
    l_max=10,
    backend=EXACT,
    k=None,
    hash_seed=0,
    discretize=False,
    tau_override=None,
    l_override=None,
):
    """Variant-aware tuning; explicit tau/l overrides bypass the matching step.

    stoc: tau from the semantic CDF at alpha_s, l searched against alpha_t.
    sc:   tau from the semantic CDF only; no topology, l fixed at 1.
    toc:  tau from the topological CDF at l=1 (alpha_t as the quantile),
          then l searched against alpha_t.

    Returns (tau, l, TuningReport, topology_table_or_None).
    """
    if variant not in ("stoc", "sc", "toc"):
        raise ValueError(f"unknown variant {variant!r}")
    sem_fn = (
        dist_mod.discretized_semantic_distance if discretize else dist_mod.semantic_distance
    )

    def semantic_pair(u, v):
        return sem_fn(graph.vectors[u], graph.vectors[v], graph.schema)

    report = TuningReport(
        tau_hat=math.nan,
        chosen_l=1,
        alpha_s=alpha_s,
        alpha_t=alpha_t,
        epsilon=epsilon,
    )

    if tau_override is not None:
        tau = float(tau_override)
    elif variant in ("stoc", "sc"):
        cdf = sample_distance_cdf(graph, semantic_pair, epsilon, rng)
        report.semantic_cdf = cdf
        tau = compute_tau(cdf, alpha_s)
    else:  # toc: no semantics anywhere, read tau off the l=1 topological CDF
        base = (
            NeighborhoodTable(graph, 1)
            if backend == EXACT
            else build_sketch_table(graph, 1, k, hash_seed)
        )
        cdf = sample_distance_cdf(graph, base.distance, epsilon, rng)
        report.topological_cdfs[1] = cdf
        tau = compute_tau(cdf, alpha_t)
    report.tau_hat = tau

    if variant == "sc":
        report.chosen_l = 1
        return tau, 1, report, None

    if l_override is not None:
        l = int(l_override)
        table = (
            NeighborhoodTable(graph, l)
            if backend == EXACT
            else build_sketch_table(graph, l, k, hash_seed)
        )
        report.chosen_l = l
        return tau, l, report, table

    l, trace, table, cdfs = compute_l(
        graph, tau, alpha_t, epsilon, rng, l_max=l_max, backend=backend, k=k, hash_seed=hash_seed
    )
    report.chosen_l = l
    report.alpha_trace = trace
    report.topological_cdfs.update(cdfs)
    return tau, l, report, table
