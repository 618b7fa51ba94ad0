"""Bottom-k sketches of hop-l neighborhoods and the Jaccard estimator.

Every node index is mapped to a 64-bit rank by a seeded bijective mixer; a
set's sketch is its k smallest ranks.  Sketches of growing neighborhoods are
built by round-synchronous propagation: after round i every node holds the
bottom-k of its hop-i ball, so l rounds give hop-l exactly.  The Jaccard
similarity of two sets is estimated from the k smallest ranks of the sketch
union; when both sketches are complete the estimate is the exact value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SENTINEL = np.uint64(0xFFFFFFFFFFFFFFFF)

DEFAULT_MIN_K = 8


def choose_k(n, epsilon, k_min=DEFAULT_MIN_K):
    """Sketch size giving estimation error about epsilon: ceil(ln n / eps^2).

    Floored at k_min so tiny graphs do not end up with vacuous sketches.
    """
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must be in (0, 1]")
    if n < 1:
        raise ValueError("need at least one node")
    return max(k_min, math.ceil(math.log(n) / (epsilon * epsilon)))


def node_ranks(n, hash_seed):
    """Deterministic pseudo-random 64-bit rank per node index.

    splitmix64 finalizer: bijective on uint64, so distinct nodes never share
    a rank and sketches can be inverted back to node sets.
    """
    x = np.arange(n, dtype=np.uint64)
    x = x + _mix(np.uint64(hash_seed & 0xFFFFFFFFFFFFFFFF))
    x = _mix(x)
    # keep the sentinel out of the rank space
    x[x == SENTINEL] = SENTINEL - np.uint64(1)
    return x


def _mix(z):
    with np.errstate(over="ignore"):
        z = z + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class BottomKSketch:
    """k smallest ranks of a set; complete sets also record their size."""

    ranks: np.ndarray  # strictly increasing uint64, length <= k
    k: int
    true_cardinality: int | None = None  # |set| when the sketch is the whole set

    def __post_init__(self):
        if self.ranks.size > self.k:
            raise ValueError("sketch longer than k")
        if self.ranks.size > 1 and np.any(np.diff(self.ranks.astype(np.uint64)) == 0):
            raise ValueError("duplicate ranks in sketch")

    @property
    def is_complete(self):
        return self.true_cardinality is not None


def estimate_jaccard_distance(s1: BottomKSketch, s2: BottomKSketch):
    """Jaccard distance estimate from two sketches sharing hash and k.

    Uses the k smallest ranks of the sketch union as the sample; exact when
    both sketches are complete.
    """
    if s1.k != s2.k:
        raise ValueError(f"mismatched sketch sizes k={s1.k} vs k={s2.k}")
    return _rank_distance(s1.ranks, s2.ranks, s1.k, s1.is_complete and s2.is_complete)


def _rank_distance(a, b, k, both_complete):
    if a.size == 0 and b.size == 0:
        return 0.0
    if both_complete:
        inter = np.intersect1d(a, b, assume_unique=True).size
        union = a.size + b.size - inter
        return 1.0 - inter / union
    u = np.union1d(a, b)
    if u.size > k:
        u = u[:k]
    hits = np.isin(u, a, assume_unique=True) & np.isin(u, b, assume_unique=True)
    return 1.0 - int(np.count_nonzero(hits)) / u.size


class SketchTable:
    """Per-node bottom-k sketches of hop-l neighborhoods.

    All sketches share one hash permutation (``hash_seed``).  ``rows`` is an
    (n, k) uint64 array padded with the sentinel; ``sizes[v]`` is the stored
    length and ``complete[v]`` marks sketches that hold the whole
    neighborhood.
    """

    backend = "sketch"
    _FORMAT_VERSION = 1

    def __init__(self, rows, sizes, complete, k, l, hash_seed, graph_digest=""):
        self.rows = rows
        self.sizes = sizes
        self.complete = complete
        self.k = int(k)
        self.l = int(l)
        self.hash_seed = int(hash_seed)
        self.graph_digest = graph_digest
        self.n = rows.shape[0]
        self._rank_to_node = None

    def sketch(self, v) -> BottomKSketch:
        size = int(self.sizes[v])
        return BottomKSketch(
            ranks=self.rows[v, :size].copy(),
            k=self.k,
            true_cardinality=size if self.complete[v] else None,
        )

    def distance(self, v1, v2):
        """Estimated Jaccard distance between N_l(v1) and N_l(v2)."""
        if v1 == v2:
            return 0.0
        a = self.rows[v1, : self.sizes[v1]]
        b = self.rows[v2, : self.sizes[v2]]
        return _rank_distance(a, b, self.k, bool(self.complete[v1] and self.complete[v2]))

    def invert(self, v):
        """Recover the node set a sketch stands for (testing aid)."""
        if self._rank_to_node is None:
            ranks = node_ranks(self.n, self.hash_seed)
            self._rank_to_node = {int(r): i for i, r in enumerate(ranks)}
        return {self._rank_to_node[int(r)] for r in self.rows[v, : self.sizes[v]]}

    def same_rows(self, other):
        """True when both tables store identical sketches (saturation test)."""
        return (
            np.array_equal(self.sizes, other.sizes)
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.complete, other.complete)
        )

    def advance(self, graph):
        """Table for l+1 obtained by one more propagation round."""
        rows, sizes, complete = _propagate(
            graph.indptr, graph.indices, self.rows, self.complete, self.k
        )
        return SketchTable(
            rows, sizes, complete, self.k, self.l + 1, self.hash_seed, self.graph_digest
        )

    def save(self, path):
        """Binary cache; round-trips bit-exactly via ``SketchTable.load``."""
        np.savez_compressed(
            path,
            version=np.int64(self._FORMAT_VERSION),
            rows=self.rows,
            sizes=self.sizes,
            complete=self.complete,
            k=np.int64(self.k),
            l=np.int64(self.l),
            hash_seed=np.uint64(self.hash_seed & 0xFFFFFFFFFFFFFFFF),
            graph_digest=np.asarray(self.graph_digest),
        )

    @classmethod
    def load(cls, path, expect=None):
        """Load a cached table; ``expect`` may pin (graph_digest, l, k, hash_seed)."""
        with np.load(path, allow_pickle=False) as data:
            if int(data["version"]) != cls._FORMAT_VERSION:
                raise ValueError(f"unsupported sketch cache version {int(data['version'])}")
            table = cls(
                rows=data["rows"],
                sizes=data["sizes"],
                complete=data["complete"],
                k=int(data["k"]),
                l=int(data["l"]),
                hash_seed=int(data["hash_seed"]),
                graph_digest=str(data["graph_digest"]),
            )
        if expect is not None:
            digest, l, k, hash_seed = expect
            got = (table.graph_digest, table.l, table.k, table.hash_seed & 0xFFFFFFFFFFFFFFFF)
            want = (digest, l, k, hash_seed & 0xFFFFFFFFFFFFFFFF)
            if got != want:
                raise ValueError(f"sketch cache key mismatch: cached {got}, wanted {want}")
        return table


def build_sketch_table(graph, l, k, hash_seed=0):
    """Sketches of N_l for every node via l propagation rounds.

    Round 0 holds each node's own rank; each round merges every node's
    sketch with its neighbors' previous-round sketches (double buffered, so
    round i+1 sees only round-i state).  Deterministic given hash_seed.
    """
    if l < 1:
        raise ValueError("hop radius must be >= 1")
    if k < 1:
        raise ValueError("sketch size must be >= 1")
    n = graph.n
    rows = np.full((n, k), SENTINEL, dtype=np.uint64)
    rows[:, 0] = node_ranks(n, hash_seed)
    sizes = np.ones(n, dtype=np.int64)
    complete = np.ones(n, dtype=bool)
    for _ in range(l):
        rows, sizes, complete = _propagate(graph.indptr, graph.indices, rows, complete, k)
    return SketchTable(rows, sizes, complete, k, l, hash_seed, graph.digest())


def _propagate(indptr, indices, rows, complete, k):
    """One merge round: each node absorbs its neighbors' sketches.

    Works on the flattened (owner, rank) pairs of every node's own row plus
    its neighbors' rows: lexsort groups each owner's candidate ranks in
    ascending order, consecutive duplicates are dropped, and the first k
    survivors per owner form the new row.
    """
    n = rows.shape[0]
    deg = np.diff(indptr)
    block = deg + 1  # self + neighbors
    starts = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(block, out=starts[1:])
    total = int(starts[-1])

    src = np.empty(total, dtype=np.int64)
    src[starts[:-1]] = np.arange(n)
    fill = np.ones(total, dtype=bool)
    fill[starts[:-1]] = False
    src[fill] = indices

    values = rows[src].reshape(-1)
    owner = np.repeat(np.arange(n, dtype=np.int64), block * k)
    order = np.lexsort((values, owner))
    values = values[order]
    owner = owner[order]

    keep = np.ones(values.size, dtype=bool)
    keep[1:] = (values[1:] != values[:-1]) | (owner[1:] != owner[:-1])
    values = values[keep]
    owner = owner[keep]

    counts = np.bincount(owner, minlength=n)
    run_starts = np.zeros(n, dtype=np.int64)
    np.cumsum(counts[:-1], out=run_starts[1:])
    pos = np.arange(values.size, dtype=np.int64) - np.repeat(run_starts, counts)
    sel = pos < k

    new_rows = np.full((n, k), SENTINEL, dtype=np.uint64)
    new_rows[owner[sel], pos[sel]] = values[sel]

    pad = np.bincount(owner[values == SENTINEL], minlength=n)  # 0 or 1 per node
    real = counts - pad
    new_sizes = np.minimum(real, k)
    inputs_complete = np.logical_and.reduceat(complete[src], starts[:-1])
    new_complete = inputs_complete & (real <= k)
    return new_rows, new_sizes, new_complete
