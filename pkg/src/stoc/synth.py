"""Planted-partition generator for attributed graphs.

Stochastic block model edges plus community-aligned attributes: one
quantitative attribute drawn around a per-community center and one
categorical label that matches the community except at the noise rate.
Emits the same text formats the loader reads, so generated data can flow
through the whole pipeline.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .graph import load_graph


@dataclass
class PlantedSpec:
    """Blueprint for one synthetic graph with known community structure."""

    sizes: tuple  # community sizes; their sum is n
    p_in: float
    p_out: float
    centers: tuple = ()  # per-community center of the quantitative attribute
    spread: float = 0.1
    labels: tuple = ()  # per-community label; ';' inside makes it a value set
    noise: float = 0.0  # probability a node carries another community's label
    include_quantitative: bool = True  # drop the x column for label-only graphs
    seed: int = 0

    def __post_init__(self):
        self.sizes = tuple(int(s) for s in self.sizes)
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValueError("community sizes must be positive")
        if not 0 <= self.p_out < self.p_in <= 1:
            raise ValueError("need 0 <= p_out < p_in <= 1")
        if not 0 <= self.noise <= 1:
            raise ValueError("noise must be in [0, 1]")
        c = len(self.sizes)
        if not self.centers:
            # spread community centers evenly inside [0, 1]
            self.centers = tuple((2 * i + 1) / (2 * c) for i in range(c))
        if len(self.centers) != c:
            raise ValueError("one quantitative center per community required")
        if not self.labels:
            self.labels = tuple(f"c{i}" for i in range(c))
        if len(self.labels) != c:
            raise ValueError("one label per community required")

    @property
    def n(self):
        return sum(self.sizes)


def _sample_pair_count(rng, n_pairs, p):
    return int(rng.binomial(n_pairs, p)) if n_pairs > 0 else 0


def _distinct_pairs_within(rng, size, count):
    """count distinct unordered pairs inside one community."""
    n_pairs = size * (size - 1) // 2
    if count >= n_pairs:  # degenerate: take the complete block
        a, b = np.triu_indices(size, k=1)
        return list(zip(a.tolist(), b.tolist()))
    if 2 * count >= n_pairs:
        a, b = np.triu_indices(size, k=1)
        pick = rng.permutation(n_pairs)[:count]
        return list(zip(a[pick].tolist(), b[pick].tolist()))
    chosen = set()
    while len(chosen) < count:
        need = count - len(chosen)
        us = rng.integers(0, size, size=2 * need + 4)
        vs = rng.integers(0, size, size=2 * need + 4)
        for a, b in zip(us.tolist(), vs.tolist()):
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            chosen.add(key)
            if len(chosen) == count:
                break
    return sorted(chosen)


def _distinct_pairs_across(rng, size_a, size_b, count):
    """count distinct (a, b) pairs across two communities."""
    n_pairs = size_a * size_b
    if count >= n_pairs:
        return [(a, b) for a in range(size_a) for b in range(size_b)]
    if 2 * count >= n_pairs:
        pick = rng.permutation(n_pairs)[:count]
        return [(int(t) // size_b, int(t) % size_b) for t in pick]
    chosen = set()
    while len(chosen) < count:
        need = count - len(chosen)
        ts = rng.integers(0, n_pairs, size=2 * need + 4)
        for t in ts.tolist():
            chosen.add((t // size_b, t % size_b))
            if len(chosen) == count:
                break
    return sorted(chosen)


def _render(spec: PlantedSpec):
    """Produce the four text artifacts: edges, attributes, schema, ground truth."""
    rng = np.random.default_rng(spec.seed)
    sizes = spec.sizes
    c = len(sizes)
    offsets = np.zeros(c + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    n = spec.n

    edges = []
    for ci in range(c):
        cnt = _sample_pair_count(rng, sizes[ci] * (sizes[ci] - 1) // 2, spec.p_in)
        base = int(offsets[ci])
        edges.extend((base + a, base + b) for a, b in _distinct_pairs_within(rng, sizes[ci], cnt))
    for ci in range(c):
        for cj in range(ci + 1, c):
            cnt = _sample_pair_count(rng, sizes[ci] * sizes[cj], spec.p_out)
            ba, bb = int(offsets[ci]), int(offsets[cj])
            edges.extend(
                (ba + a, bb + b) for a, b in _distinct_pairs_across(rng, sizes[ci], sizes[cj], cnt)
            )
    edges.sort()

    truth = np.empty(n, dtype=np.int64)
    xs = np.empty(n, dtype=np.float64)
    labels = []
    for ci in range(c):
        lo, hi = int(offsets[ci]), int(offsets[ci + 1])
        truth[lo:hi] = ci
        xs[lo:hi] = spec.centers[ci] + rng.uniform(-spec.spread, spec.spread, size=hi - lo)
        for _ in range(lo, hi):
            if c > 1 and rng.random() < spec.noise:
                other = int(rng.integers(0, c - 1))
                if other >= ci:
                    other += 1
                labels.append(spec.labels[other])
            else:
                labels.append(spec.labels[ci])

    ids = [f"n{i}" for i in range(n)]
    edge_text = "".join(f"{ids[u]} {ids[v]}\n" for u, v in edges)
    label_kind = "categorical-set:;" if any(";" in lab for lab in spec.labels) else "categorical"
    if spec.include_quantitative:
        attr_lines = ["node,x,label\n"]
        attr_lines.extend(f"{ids[i]},{float(xs[i])!r},{labels[i]}\n" for i in range(n))
        schema_text = f"x quantitative\nlabel {label_kind}\n"
    else:
        attr_lines = ["node,label\n"]
        attr_lines.extend(f"{ids[i]},{labels[i]}\n" for i in range(n))
        schema_text = f"label {label_kind}\n"
    attr_text = "".join(attr_lines)
    truth_text = "".join(f"{ids[i]}\t{int(truth[i])}\n" for i in range(n))
    return edge_text, attr_text, schema_text, truth_text, truth


def generate(spec: PlantedSpec):
    """Build the planted graph in memory, via the same loader the CLI uses.

    Returns (AttributedGraph, ground_truth_labels).
    """
    edge_text, attr_text, schema_text, _, truth = _render(spec)
    graph = load_graph(
        io.StringIO(edge_text), io.StringIO(attr_text), io.StringIO(schema_text)
    )
    return graph, truth


def write_planted(spec: PlantedSpec, out_prefix):
    """Write <prefix>.edges/.attrs/.schema/.truth; returns the four paths."""
    edge_text, attr_text, schema_text, truth_text, _ = _render(spec)
    prefix = str(out_prefix)
    paths = {
        "edges": prefix + ".edges",
        "attrs": prefix + ".attrs",
        "schema": prefix + ".schema",
        "truth": prefix + ".truth",
    }
    for key, text in (
        ("edges", edge_text),
        ("attrs", attr_text),
        ("schema", schema_text),
        ("truth", truth_text),
    ):
        with open(paths[key], "w", encoding="utf-8") as fh:
            fh.write(text)
    return paths
