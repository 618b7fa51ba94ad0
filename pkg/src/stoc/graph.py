"""Attributed graph loading, validation and neighborhood access.

A graph couples a CSR adjacency structure with one normalized attribute
tuple per node.  Graphs are immutable after construction; clustering runs
track progress through an ActiveView mask instead of mutating the graph.
"""

from __future__ import annotations

import csv
import hashlib
import io
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

QUANTITATIVE = "quantitative"
CATEGORICAL = "categorical"
CATEGORICAL_SET = "categorical-set"


class GraphFormatError(ValueError):
    """Raised for malformed input files; carries source label and line number."""

    def __init__(self, message, source=None, line=None):
        loc = ""
        if source is not None:
            loc = f"{source}"
            if line is not None:
                loc += f":{line}"
            loc += ": "
        super().__init__(loc + message)
        self.source = source
        self.line = line


@dataclass(frozen=True)
class AttributeSpec:
    """One attribute column: its name, kind and (for quantitative) bounds."""

    name: str
    kind: str
    delimiter: str = ";"
    lo: float | None = None  # normalization bounds; None = take from data
    hi: float | None = None

    @property
    def is_quantitative(self):
        return self.kind == QUANTITATIVE


class AttributeSchema:
    """Ordered attribute descriptors, quantitative columns first.

    ``num_quantitative`` and ``num_attributes`` are the counts the semantic
    distance needs; categorical descriptors follow the quantitative block.
    """

    def __init__(self, specs):
        specs = list(specs)
        quant = [s for s in specs if s.is_quantitative]
        cat = [s for s in specs if not s.is_quantitative]
        for s in quant:
            if s.lo is not None and s.hi is not None and s.lo > s.hi:
                raise ValueError(f"attribute {s.name!r}: lo > hi")
        self.specs = tuple(quant + cat)
        self.num_quantitative = len(quant)
        self.num_attributes = len(self.specs)

    @property
    def quantitative(self):
        return self.specs[: self.num_quantitative]

    @property
    def categorical(self):
        return self.specs[self.num_quantitative :]

    def __eq__(self, other):
        return isinstance(other, AttributeSchema) and self.specs == other.specs

    def __repr__(self):
        return f"AttributeSchema({[s.name for s in self.specs]})"


@dataclass(frozen=True)
class SemanticVector:
    """A node's attribute tuple: normalized quantitative values + value sets.

    Quantitative entries live in [0, 1]; a single-valued categorical
    attribute is stored as a singleton set, a missing one as the empty set.
    """

    quant: tuple
    cats: tuple  # tuple of frozensets

    def conforms_to(self, schema):
        return (
            len(self.quant) == schema.num_quantitative
            and len(self.cats) == schema.num_attributes - schema.num_quantitative
        )


class AttributedGraph:
    """Immutable node-attributed graph over dense indices 0..n-1.

    Adjacency is CSR (``indptr``/``indices``) with sorted neighbor lists, no
    self loops and no duplicate edges.  External string ids map to dense
    indices via ``index_of``; all output should go through ``node_ids``.
    """

    def __init__(self, node_ids, indptr, indices, vectors, schema, directed=False):
        self.node_ids = list(node_ids)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int32)
        self.vectors = list(vectors)
        self.schema = schema
        self.directed = directed
        self.n = len(self.node_ids)
        self.m = int(len(self.indices)) if directed else int(len(self.indices)) // 2
        self._id_index = {node: i for i, node in enumerate(self.node_ids)}
        if len(self._id_index) != self.n:
            raise ValueError("duplicate external node ids")
        if len(self.vectors) != self.n:
            raise ValueError("one semantic vector per node required")
        for i, vec in enumerate(self.vectors):
            if not vec.conforms_to(schema):
                raise ValueError(f"vector for node {self.node_ids[i]!r} does not conform to schema")

    def index_of(self, node_id):
        try:
            return self._id_index[node_id]
        except KeyError:
            raise KeyError(f"unknown node id {node_id!r}") from None

    def neighbors(self, v):
        """Sorted neighbor indices of v (excluding v itself)."""
        if not 0 <= v < self.n:
            raise IndexError(f"node index {v} out of range 0..{self.n - 1}")
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self):
        """Yield each edge once as an (u, v) index pair (u < v if undirected)."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if self.directed or u < int(v):
                    yield u, int(v)

    def adjacency_matrix(self):
        """CSR adjacency as a scipy matrix (0/1 entries)."""
        from scipy.sparse import csr_matrix

        data = np.ones(len(self.indices), dtype=np.int32)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def digest(self):
        """Content hash of the topology, for keying sketch caches."""
        h = hashlib.sha256()
        h.update(f"n={self.n};directed={self.directed};".encode())
        h.update(self.indptr.tobytes())
        h.update(self.indices.tobytes())
        return h.hexdigest()

    def validate(self):
        """Full-scan structural checks; raises on violation."""
        if self.indptr[0] != 0 or self.indptr[-1] != len(self.indices):
            raise ValueError("corrupt CSR offsets")
        for v in range(self.n):
            nbrs = self.neighbors(v)
            if len(nbrs) and (np.any(np.diff(nbrs) <= 0)):
                raise ValueError(f"neighbors of {v} not strictly sorted (dupes?)")
            if np.any(nbrs == v):
                raise ValueError(f"self loop at {v}")
        if not self.directed:
            pairs = {(u, w) for u, w in self.edges()}
            for u, w in pairs:
                if u not in set(int(x) for x in self.neighbors(w)):
                    raise ValueError(f"asymmetric edge ({u},{w})")
        return True


@dataclass
class ActiveView:
    """Shrinking membership mask over a graph's nodes.

    One clustering run owns the view; deactivation is monotone.
    """

    graph: AttributedGraph
    mask: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.mask is None:
            self.mask = np.ones(self.graph.n, dtype=bool)

    def is_active(self, v):
        return bool(self.mask[v])

    def deactivate(self, nodes):
        self.mask[list(nodes)] = False

    def active_count(self):
        return int(self.mask.sum())

    def active_nodes(self):
        return np.flatnonzero(self.mask)

    def neighbors(self, v):
        """Active neighbors of v."""
        nbrs = self.graph.neighbors(v)
        return nbrs[self.mask[nbrs]]


def exact_l_neighborhood(g, v, l):
    """BFS ball of radius l around v, including v itself.

    Ground truth for the sketch-backed topological distance.
    """
    if l < 0:
        raise ValueError("hop radius must be >= 0")
    if not 0 <= v < g.n:
        raise IndexError(f"node index {v} out of range")
    seen = {v}
    frontier = deque([v])
    for _ in range(l):
        nxt = deque()
        while frontier:
            u = frontier.popleft()
            for w in g.neighbors(u):
                w = int(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    return seen


def build_graph(node_ids, edges, vectors, schema, directed=False):
    """Assemble an AttributedGraph from index pairs.

    Collapses duplicate edges, drops self loops and (if undirected)
    symmetrizes the adjacency. ``vectors`` must already be normalized.
    """
    n = len(node_ids)
    seen = set()
    for u, v in edges:
        if u == v:
            continue  # self loops carry no neighborhood information
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range")
        if directed:
            seen.add((u, v))
        else:
            seen.add((min(u, v), max(u, v)))
    adj = [[] for _ in range(n)]
    for u, v in seen:
        adj[u].append(v)
        if not directed:
            adj[v].append(u)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        adj[v].sort()
        indptr[v + 1] = indptr[v] + len(adj[v])
    indices = np.fromiter(
        (w for row in adj for w in row), dtype=np.int32, count=int(indptr[-1])
    )
    return AttributedGraph(node_ids, indptr, indices, vectors, schema, directed=directed)


def _open_text(source):
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8"), str(source)
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        return source, getattr(source, "name", "<stream>")
    raise TypeError(f"cannot read from {type(source).__name__}")


def parse_schema(schema_source):
    """Read attribute descriptors: ``<name> <kind> [<lo> <hi>]`` per line.

    Kind is ``quantitative``, ``categorical`` or ``categorical-set:<delim>``.
    The optional lo/hi pair fixes the normalization bounds of a quantitative
    column; otherwise the observed min/max are used.
    """
    fh, label = _open_text(schema_source)
    specs = []
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 4):
                raise GraphFormatError(
                    f"expected '<name> <kind> [<lo> <hi>]', got {line!r}", label, lineno
                )
            name, kind_token = parts[0], parts[1]
            delim = ";"
            if kind_token.startswith(CATEGORICAL_SET + ":"):
                kind = CATEGORICAL_SET
                delim = kind_token.split(":", 1)[1]
                if not delim:
                    raise GraphFormatError("empty set delimiter", label, lineno)
            elif kind_token in (QUANTITATIVE, CATEGORICAL, CATEGORICAL_SET):
                kind = kind_token
            else:
                raise GraphFormatError(f"unknown attribute kind {kind_token!r}", label, lineno)
            lo = hi = None
            if len(parts) == 4:
                if kind != QUANTITATIVE:
                    raise GraphFormatError("bounds only apply to quantitative columns", label, lineno)
                try:
                    lo, hi = float(parts[2]), float(parts[3])
                except ValueError:
                    raise GraphFormatError(f"non-numeric bounds {parts[2]!r} {parts[3]!r}", label, lineno)
            specs.append(AttributeSpec(name, kind, delim, lo, hi))
    if not specs:
        raise GraphFormatError("schema defines no attributes", label)
    return AttributeSchema(specs)


def _detect_delimiter(header_line):
    if "\t" in header_line:
        return "\t"
    return ","


def load_graph(edge_source, attr_source, schema_source, directed=False):
    """Load and validate an attributed graph from its three text inputs.

    Edge file: one ``u v`` pair per line, ``#`` comments allowed.  Attribute
    file: delimited with a header row, first column the node id.  Quantitative
    columns are min-max normalized to [0, 1]; a constant column maps to all
    zeros.  Duplicate edges collapse; self loops are dropped.
    """
    schema = parse_schema(schema_source)

    fh, attr_label = _open_text(attr_source)
    with fh:
        first = fh.readline()
        if not first:
            raise GraphFormatError("empty attribute file", attr_label, 1)
        delim = _detect_delimiter(first)
        header = next(csv.reader([first], delimiter=delim))
        if len(header) < 1:
            raise GraphFormatError("missing header row", attr_label, 1)
        id_col, attr_cols = header[0], header[1:]
        by_name = {s.name: s for s in schema.specs}
        missing = [s.name for s in schema.specs if s.name not in attr_cols]
        extra = [c for c in attr_cols if c not in by_name]
        if missing or extra:
            raise GraphFormatError(
                f"schema/column mismatch (missing {missing}, unexpected {extra})",
                attr_label,
                1,
            )
        col_of = {name: attr_cols.index(name) + 1 for name in by_name}

        node_ids = []
        raw_quant = []  # per node, list of floats in canonical order
        cats = []  # per node, tuple of frozensets in canonical order
        reader = csv.reader(fh, delimiter=delim)
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise GraphFormatError(
                    f"expected {len(header)} fields, got {len(row)}", attr_label, lineno
                )
            node_id = row[0].strip()
            if not node_id:
                raise GraphFormatError("empty node id", attr_label, lineno)
            qvals = []
            for spec in schema.quantitative:
                cell = row[col_of[spec.name]].strip()
                if not cell:
                    raise GraphFormatError(
                        f"missing quantitative value for {spec.name!r}", attr_label, lineno
                    )
                try:
                    qvals.append(float(cell))
                except ValueError:
                    raise GraphFormatError(
                        f"non-numeric value {cell!r} in quantitative column {spec.name!r}",
                        attr_label,
                        lineno,
                    )
            csets = []
            for spec in schema.categorical:
                cell = row[col_of[spec.name]].strip()
                if not cell:
                    csets.append(frozenset())
                elif spec.kind == CATEGORICAL_SET:
                    csets.append(
                        frozenset(t.strip() for t in cell.split(spec.delimiter) if t.strip())
                    )
                else:
                    csets.append(frozenset([cell]))
            node_ids.append(node_id)
            raw_quant.append(qvals)
            cats.append(tuple(csets))

    if not node_ids:
        raise GraphFormatError("attribute file defines no nodes", attr_label)
    if len(set(node_ids)) != len(node_ids):
        raise GraphFormatError("duplicate node ids in attribute file", attr_label)

    # normalize quantitative columns (declared bounds win over observed ones)
    q = schema.num_quantitative
    bounds = []
    for j, spec in enumerate(schema.quantitative):
        col = [vals[j] for vals in raw_quant]
        lo = spec.lo if spec.lo is not None else min(col)
        hi = spec.hi if spec.hi is not None else max(col)
        bounds.append((lo, hi))
    resolved = AttributeSchema(
        [
            AttributeSpec(s.name, s.kind, s.delimiter, bounds[j][0], bounds[j][1])
            for j, s in enumerate(schema.quantitative)
        ]
        + list(schema.categorical)
    )
    vectors = []
    for vals, csets in zip(raw_quant, cats):
        normed = []
        for j in range(q):
            lo, hi = bounds[j]
            if hi > lo:
                x = (vals[j] - lo) / (hi - lo)
            else:
                x = 0.0  # constant column: no discriminative power
            normed.append(min(1.0, max(0.0, x)))
        vectors.append(SemanticVector(tuple(normed), csets))

    index_of = {node: i for i, node in enumerate(node_ids)}
    fh, edge_label = _open_text(edge_source)
    edges = []
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(
                    f"expected two node tokens, got {len(parts)}", edge_label, lineno
                )
            try:
                u, v = index_of[parts[0]], index_of[parts[1]]
            except KeyError as exc:
                raise GraphFormatError(
                    f"unknown node id {exc.args[0]!r}", edge_label, lineno
                ) from None
            edges.append((u, v))

    return build_graph(node_ids, edges, vectors, resolved, directed=directed)
