"""Summary graph state, reconstruction error, size in bits, and file format."""

from __future__ import annotations

import io
import itertools
import math
import os

import numpy as np

from .errors import NodeUniverseMismatch, SummaryFormatError

FORMAT_TAG = "SSUMM"
FORMAT_VERSION = 1


def _pair(a, b):
    return (a, b) if a <= b else (b, a)


class SummaryGraph:
    """Partition of the subnodes into supernodes plus weighted superedges.

    Attributes
    ----------
    members : dict[int, list[int]]
        supernode id -> subnodes it contains.
    sizes : dict[int, int]
        supernode id -> number of subnodes.
    nbr : dict[int, dict[int, int]]
        supernode id -> {supernode id: |E_AB|} for every pair with at least
        one subedge, stored symmetrically; the key ``A`` in ``nbr[A]`` holds
        the internal subedge count ``|E_AA|``.
    superedges : set[tuple[int, int]]
        pairs ``(a, b)`` with ``a <= b``.  The weight of a superedge is always
        the live subedge count, so it is not stored separately.
    """

    def __init__(self, num_nodes, members, nbr, superedges):
        self.num_nodes = num_nodes
        self.members = members
        self.sizes = {a: len(m) for a, m in members.items()}
        self.nbr = nbr
        self.superedges = superedges
        self._assign = np.empty(num_nodes, dtype=np.int64)
        if members:
            nodes = np.fromiter(itertools.chain.from_iterable(members.values()),
                                dtype=np.int64, count=num_nodes)
            self._assign[nodes] = np.repeat(
                np.fromiter(members.keys(), dtype=np.int64, count=len(members)),
                [len(m) for m in members.values()])

    # -- construction ---------------------------------------------------

    @classmethod
    def singleton(cls, g):
        """Every subnode is its own supernode and every subedge a superedge."""
        n = g.num_nodes
        members = {u: [u] for u in range(n)}
        nbr = {u: {} for u in range(n)}
        for u, v in g.edges.tolist():
            nbr[u][v] = 1
            nbr[v][u] = 1
        superedges = set(map(tuple, g.edges.tolist()))
        return cls(n, members, nbr, superedges)

    @classmethod
    def from_partition(cls, g, membership, superedges=()):
        """Build a summary from a node -> supernode array, recounting |E_AB| from ``g``."""
        membership = np.asarray(membership, dtype=np.int64)
        if len(membership) != g.num_nodes:
            raise ValueError("membership must cover every node")
        members = {}
        for u, a in enumerate(membership.tolist()):
            members.setdefault(a, []).append(u)
        nbr = {a: {} for a in members}
        for a, b in membership[g.edges].tolist():
            row = nbr[a]
            row[b] = row.get(b, 0) + 1
            if a != b:
                other = nbr[b]
                other[a] = other.get(a, 0) + 1
        sg = cls(g.num_nodes, members, nbr, set())
        for a, b in superedges:
            a, b = _pair(a, b)
            if sg.subedge_count(a, b) == 0:
                raise ValueError(f"superedge ({a}, {b}) would have weight 0")
            sg.superedges.add((a, b))
        return sg

    def copy(self):
        return SummaryGraph(self.num_nodes,
                            {a: list(m) for a, m in self.members.items()},
                            {a: dict(r) for a, r in self.nbr.items()},
                            set(self.superedges))

    # -- queries ----------------------------------------------------------

    @property
    def num_supernodes(self):
        return len(self.members)

    @property
    def num_superedges(self):
        return len(self.superedges)

    def membership(self):
        """Array mapping each subnode to its supernode id (a copy)."""
        return self._assign.copy()

    def subedge_count(self, a, b):
        return self.nbr[a].get(b, 0)

    def capacity(self, a, b):
        if a == b:
            s = self.sizes[a]
            return s * (s - 1) // 2
        return self.sizes[a] * self.sizes[b]

    def weight(self, a, b):
        """Superedge weight, or 0 if there is no superedge."""
        a, b = _pair(a, b)
        return self.nbr[a].get(b, 0) if (a, b) in self.superedges else 0

    def superedge_weights(self):
        nbr = self.nbr
        return {p: nbr[p[0]][p[1]] for p in self.superedges}

    def omega_max(self):
        nbr = self.nbr
        return max((nbr[a][b] for a, b in self.superedges), default=0)

    def __eq__(self, other):
        if not isinstance(other, SummaryGraph):
            return NotImplemented
        return (self.num_nodes == other.num_nodes
                and {a: sorted(m) for a, m in self.members.items()}
                == {a: sorted(m) for a, m in other.members.items()}
                and self.nbr == other.nbr
                and self.superedges == other.superedges)

    __hash__ = None

    # -- mutation -----------------------------------------------------------

    def merge(self, a, b):
        """Merge supernode ``b`` into ``a``; drops every superedge touching either.

        Returns ``a``.  Cost is linear in the two neighbourhoods plus ``|b|``.
        """
        if a == b:
            raise ValueError("cannot merge a supernode with itself")
        nbr = self.nbr
        row_a = nbr[a]
        row_b = nbr.pop(b)
        superedges = self.superedges
        for c in row_a:
            superedges.discard((a, c) if a <= c else (c, a))
        for c in row_b:
            superedges.discard((b, c) if b <= c else (c, b))

        inner = row_a.pop(a, 0) + row_b.pop(b, 0) + row_a.pop(b, 0)
        row_b.pop(a, None)
        for c, e in row_b.items():
            row_a[c] = row_a.get(c, 0) + e
            row_c = nbr[c]
            del row_c[b]
            row_c[a] = row_c.get(a, 0) + e
        if inner:
            row_a[a] = inner

        moved = self.members.pop(b)
        self._assign[moved] = a
        self.members[a].extend(moved)
        self.sizes[a] += self.sizes.pop(b)
        return a

    # -- validation ---------------------------------------------------------

    def check(self, g=None):
        """Assert structural invariants; with ``g`` also recount every |E_AB|."""
        assert sum(self.sizes.values()) == self.num_nodes
        seen = np.zeros(self.num_nodes, dtype=bool)
        for a, m in self.members.items():
            assert m and self.sizes[a] == len(m)
            assert not seen[m].any()
            assert (self._assign[m] == a).all()
            seen[m] = True
        assert seen.all()
        total = 0
        for a, row in self.nbr.items():
            for c, e in row.items():
                assert e > 0
                assert self.nbr[c][a] == e
                assert e <= self.capacity(a, c)
                if c >= a:
                    total += e
        for a, b in self.superedges:
            assert a <= b and self.nbr[a].get(b, 0) > 0
        if g is not None:
            assert total == g.num_edges
            fresh = SummaryGraph.from_partition(g, self.membership())
            assert fresh.nbr == self.nbr


def reconstructed_weight(sg, u, v, membership=None):
    """Weight of subedge {u, v} in the reconstructed graph."""
    if u == v:
        raise ValueError("reconstructed weight is undefined on the diagonal")
    if membership is None:
        membership = sg.membership()
    a, b = _pair(int(membership[u]), int(membership[v]))
    if (a, b) not in sg.superedges:
        return 0.0
    return sg.nbr[a][b] / sg.capacity(a, b)


def reconstruction_error(g, sg, p=1):
    """Entrywise l_p distance between the adjacency matrix and its reconstruction.

    Both orientations of every off-diagonal pair are counted.  Computed per
    supernode pair in closed form: a pair with a superedge and density
    ``s = e / pi`` contributes ``2 (e (1-s)^p + (pi-e) s^p)``, a pair without
    one contributes ``2 e``.
    """
    if p not in (1, 2):
        raise ValueError(f"unsupported norm p={p}; expected 1 or 2")
    sizes = sg.sizes
    superedges = sg.superedges
    acc = 0.0
    for a, row in sg.nbr.items():
        size_a = sizes[a]
        for c, e in row.items():
            if c < a:
                continue
            if (a, c) in superedges:
                pi = size_a * (size_a - 1) // 2 if c == a else size_a * sizes[c]
                s = e / pi
                if p == 1:
                    acc += 2.0 * (e * (1.0 - s) + (pi - e) * s)
                else:
                    acc += 2.0 * (e * (1.0 - s) ** 2 + (pi - e) * s * s)
            else:
                acc += 2.0 * e
    return acc if p == 1 else math.sqrt(acc)


def summary_size_bits(sg):
    """``|P| (2 log2|S| + log2 w_max) + |V| log2|S|``."""
    n_super = sg.num_supernodes
    log_s = math.log2(n_super) if n_super > 1 else 0.0
    n_edges = sg.num_superedges
    size = sg.num_nodes * log_s
    if n_edges:
        w_max = sg.omega_max()
        size += n_edges * (2.0 * log_s + (math.log2(w_max) if w_max > 1 else 0.0))
    return size


# -- file format --------------------------------------------------------------

def serialize_summary(sg, sink, original_ids=None):
    """Write the line-oriented summary format.

    Nodes are written in dense-id order, tagged with ``original_ids`` when
    given; superedges are sorted.
    """
    membership = sg.membership()
    if original_ids is None:
        original_ids = np.arange(sg.num_nodes)
    buf = io.StringIO()
    buf.write(f"{FORMAT_TAG} {FORMAT_VERSION} {sg.num_nodes} "
              f"{sg.num_supernodes} {sg.num_superedges}\n")
    for orig, a in zip(np.asarray(original_ids).tolist(), membership.tolist()):
        buf.write(f"N {orig} {a}\n")
    weights = sg.superedge_weights()
    for a, b in sorted(weights):
        buf.write(f"E {a} {b} {weights[a, b]}\n")
    text = buf.getvalue()
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    elif isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def _read_lines(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return fh.read().splitlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def _ints(parts, lineno, count):
    if len(parts) != count:
        raise SummaryFormatError(f"line {lineno}: expected {count} fields, got {len(parts)}")
    try:
        values = [int(x) for x in parts]
    except ValueError:
        raise SummaryFormatError(f"line {lineno}: non-integer field") from None
    if any(v < 0 for v in values):
        raise SummaryFormatError(f"line {lineno}: negative id")
    return values


def deserialize_summary(source, g):
    """Read a summary file and bind it to graph ``g``.

    Node lines are matched to ``g`` through its original ids.  Every stored
    weight must equal the subedge count recomputed from ``g``.
    """
    lines = [ln for ln in _read_lines(source) if ln.strip()]
    if not lines:
        raise SummaryFormatError("empty summary file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != FORMAT_TAG:
        raise SummaryFormatError("line 1: bad header")
    if header[1] != str(FORMAT_VERSION):
        raise SummaryFormatError(f"line 1: unsupported version {header[1]}")
    n_nodes, n_super, n_edges = _ints(header[2:], 1, 3)
    if len(lines) != 1 + n_nodes + n_edges:
        raise SummaryFormatError(
            f"expected {1 + n_nodes + n_edges} lines, got {len(lines)}")

    dense = {orig: i for i, orig in enumerate(g.original_ids.tolist())}
    membership = np.full(g.num_nodes, -1, dtype=np.int64)
    for lineno, line in enumerate(lines[1:1 + n_nodes], 2):
        parts = line.split()
        if not parts or parts[0] != "N":
            raise SummaryFormatError(f"line {lineno}: expected node line")
        orig, a = _ints(parts[1:], lineno, 2)
        u = dense.get(orig)
        if u is None:
            raise NodeUniverseMismatch(orig)
        if membership[u] >= 0:
            raise SummaryFormatError(f"line {lineno}: node {orig} listed twice")
        membership[u] = a
    missing = np.flatnonzero(membership < 0)
    if len(missing):
        orig = int(g.original_ids[missing[0]])
        raise NodeUniverseMismatch(orig, f"node id {orig} of the graph is missing "
                                         "from the summary (membership not total)")
    live = set(membership.tolist())
    if len(live) != n_super:
        raise SummaryFormatError(f"header says {n_super} supernodes, found {len(live)}")

    sg = SummaryGraph.from_partition(g, membership)
    for lineno, line in enumerate(lines[1 + n_nodes:], 2 + n_nodes):
        parts = line.split()
        if not parts or parts[0] != "E":
            raise SummaryFormatError(f"line {lineno}: expected superedge line")
        a, b, w = _ints(parts[1:], lineno, 3)
        if a not in live or b not in live:
            raise SummaryFormatError(f"line {lineno}: unknown supernode id")
        if w <= 0:
            raise SummaryFormatError(f"line {lineno}: superedge weight must be positive")
        pair = _pair(a, b)
        if pair in sg.superedges:
            raise SummaryFormatError(f"line {lineno}: duplicate superedge")
        if sg.subedge_count(*pair) != w:
            raise SummaryFormatError(
                f"line {lineno}: weight {w} does not match the "
                f"{sg.subedge_count(*pair)} subedges between the supernodes")
        sg.superedges.add(pair)
    return sg
