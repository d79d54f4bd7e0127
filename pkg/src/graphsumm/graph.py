"""Input graph: ingestion from edge-list text, CSR adjacency, size in bits."""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGraphError, EdgeListParseError, EmptyGraphError

COMMENT_PREFIXES = ("#", "%")


@dataclass(frozen=True)
class IngestStats:
    edge_lines: int = 0
    comment_lines: int = 0
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0


class Graph:
    """Immutable undirected simple graph over dense node ids ``0..num_nodes-1``.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``, sorted
    lexicographically.  ``original_ids[i]`` is the id node ``i`` carried in
    the source file.
    """

    __slots__ = ("num_nodes", "edges", "indptr", "indices", "original_ids", "stats")

    def __init__(self, num_nodes, edges, original_ids=None, stats=None):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if num_nodes < 0:
            raise ValueError("num_nodes must be non-negative")
        if len(edges):
            if edges.min() < 0 or edges.max() >= num_nodes:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        keys = np.unique(lo * max(num_nodes, 1) + hi)
        if len(keys) != len(edges):
            raise ValueError("duplicate edges are not allowed")
        edges = np.stack([keys // max(num_nodes, 1), keys % max(num_nodes, 1)], axis=1)

        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((dst, src))
        degree = np.bincount(src, minlength=num_nodes)
        indptr = np.zeros(num_nodes + 1, dtype=np.int64)
        np.cumsum(degree, out=indptr[1:])

        if original_ids is None:
            original_ids = np.arange(num_nodes, dtype=np.int64)
        original_ids = np.asarray(original_ids, dtype=np.int64)
        if len(original_ids) != num_nodes:
            raise ValueError("original_ids must have one entry per node")

        for arr in (edges, indptr, original_ids):
            arr.setflags(write=False)
        indices = dst[order]
        indices.setflags(write=False)

        object.__setattr__(self, "num_nodes", int(num_nodes))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "original_ids", original_ids)
        object.__setattr__(self, "stats", stats or IngestStats())

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_edges(cls, pairs, num_nodes=None):
        """Build a graph from dense-id pairs, dropping self-loops and duplicates."""
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs,
                         dtype=np.int64).reshape(-1, 2)
        if num_nodes is None:
            num_nodes = int(arr.max()) + 1 if len(arr) else 0
        arr = arr[arr[:, 0] != arr[:, 1]]
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keys = np.unique(lo * max(num_nodes, 1) + hi)
        n = max(num_nodes, 1)
        return cls(num_nodes, np.stack([keys // n, keys % n], axis=1))

    @property
    def num_edges(self):
        return len(self.edges)

    def neighbors(self, u):
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self):
        return np.diff(self.indptr)

    def adjacency_lists(self):
        return [self.indices[self.indptr[u]:self.indptr[u + 1]].tolist()
                for u in range(self.num_nodes)]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.num_nodes == other.num_nodes
                and np.array_equal(self.edges, other.edges)
                and np.array_equal(self.original_ids, other.original_ids))

    def __hash__(self):
        return hash((self.num_nodes, self.num_edges))

    def __repr__(self):
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8"), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8")), True
    if isinstance(source, io.TextIOBase):
        return source, False
    # binary file-like
    return io.TextIOWrapper(source, encoding="utf-8"), False


def load_edge_list(source):
    """Read a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` are comments.  Self-loops are dropped,
    edge directions collapsed, duplicates removed, and node ids remapped to
    ``0..|V|-1`` in order of first appearance.  A node mentioned only in a
    self-loop line still gets an id.
    """
    stream, owned = _open_text(source)
    remap = {}
    heads = []
    tails = []
    edge_lines = comments = loops = 0
    try:
        for lineno, line in enumerate(stream, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith(COMMENT_PREFIXES):
                comments += 1
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListParseError(lineno, f"expected 2 tokens, got {len(parts)}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(lineno, f"malformed token in {line!r}") from None
            if a < 0 or b < 0:
                raise EdgeListParseError(lineno, "node ids must be non-negative")
            edge_lines += 1
            u = remap.setdefault(a, len(remap))
            v = remap.setdefault(b, len(remap))
            if u == v:
                loops += 1
                continue
            heads.append(u)
            tails.append(v)
    finally:
        if owned:
            stream.close()

    if not heads:
        raise EmptyGraphError("empty graph: no edges left after cleaning")
    n = len(remap)
    u = np.asarray(heads, dtype=np.int64)
    v = np.asarray(tails, dtype=np.int64)
    keys = np.unique(np.minimum(u, v) * n + np.maximum(u, v))
    edges = np.stack([keys // n, keys % n], axis=1)
    original_ids = np.fromiter(remap.keys(), dtype=np.int64, count=n)
    stats = IngestStats(edge_lines, comments, loops, len(u) - len(keys))
    return Graph(n, edges, original_ids, stats)


def write_edge_list(g, sink):
    """Write ``g`` with original ids so that :func:`load_edge_list` restores it.

    Nodes must reappear in dense-id order.  Each node is introduced by an
    edge to an already-introduced node (or to its successor); a node with
    neither gets a placeholder self-loop line, which the reader drops.
    """
    ids = g.original_ids
    adj = g.adjacency_lists()
    used = set()
    registered = np.zeros(g.num_nodes + 1, dtype=bool)
    lines = ["# undirected edge list\n"]
    for u in range(g.num_nodes):
        if registered[u]:
            continue
        nbrs = adj[u]
        registered[u] = True
        if nbrs and nbrs[0] < u:
            w = nbrs[0]
            used.add((w, u))
            lines.append(f"{ids[u]} {ids[w]}\n")
        elif nbrs and nbrs[0] == u + 1:
            used.add((u, u + 1))
            registered[u + 1] = True
            lines.append(f"{ids[u]} {ids[u + 1]}\n")
        else:
            lines.append(f"{ids[u]} {ids[u]}\n")
    for a, b in g.edges.tolist():
        if (a, b) not in used:
            lines.append(f"{ids[a]} {ids[b]}\n")
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
    else:
        sink.writelines(lines if isinstance(sink, io.TextIOBase) else
                        [s.encode() for s in lines])


def induced_subgraph(g, nodes):
    """Subgraph induced by ``nodes``; kept nodes retain their relative order."""
    keep = np.zeros(g.num_nodes, dtype=bool)
    keep[np.asarray(nodes, dtype=np.int64)] = True
    new_id = np.cumsum(keep) - 1
    mask = keep[g.edges[:, 0]] & keep[g.edges[:, 1]]
    sub_edges = new_id[g.edges[mask]]
    return Graph(int(keep.sum()), sub_edges, g.original_ids[keep])


def input_size_bits(g):
    """Edge-list storage cost ``2 |E| log2 |V|`` of the input graph."""
    if g.num_nodes < 2:
        raise DegenerateGraphError("graph needs at least 2 nodes for a positive size")
    if g.num_edges < 1:
        raise DegenerateGraphError("graph has no edges")
    return 2.0 * g.num_edges * math.log2(g.num_nodes)
