"""Grouping supernodes into small candidate sets by min-hash shingles.

A shingle of a supernode is the smallest hash over its subnodes and their
neighbours.  Two supernodes with the same shingle contain subnodes within
one hop of a common subnode, so grouping by shingle keeps candidate pairs
within two hops of each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_CANDIDATE_SIZE = 500
MAX_SHINGLE_DEPTH = 10


@dataclass(frozen=True)
class ShingleHash:
    """Random bijection from subnodes onto ``1..|V|``."""

    perm: np.ndarray
    level: int = 0

    @classmethod
    def random(cls, num_nodes, rng, level=0):
        return cls(rng.permutation(num_nodes).astype(np.int64) + 1, level)

    def closed_neighborhood_min(self, g):
        """min(h(u), min over neighbours v of h(v)) for every subnode u."""
        h = self.perm
        out = h.copy()
        deg = np.diff(g.indptr)
        has_nbrs = deg > 0
        if len(g.indices):
            nbr_min = np.minimum.reduceat(h[g.indices], g.indptr[:-1][has_nbrs])
            out[has_nbrs] = np.minimum(out[has_nbrs], nbr_min)
        return out


@dataclass
class CandidatePartition:
    sets: list

    def __len__(self):
        return len(self.sets)

    def max_size(self):
        return max((len(s) for s in self.sets), default=0)


def supernode_shingles(membership, node_min, num_slots):
    """Per-supernode minimum of ``node_min`` over member subnodes."""
    f = np.full(num_slots, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(f, membership, node_min)
    return f


def shingle(sg, g, h, a):
    """Shingle value of a single supernode under hash ``h``."""
    node_min = h.closed_neighborhood_min(g)
    return int(node_min[sg.members[a]].min())


def _group_by(ids, keys):
    order = np.argsort(keys, kind="stable")
    ids = ids[order]
    keys = keys[order]
    cuts = np.flatnonzero(np.diff(keys)) + 1
    return np.split(ids, cuts)


def generate_candidates(sg, g, rng, max_size=MAX_CANDIDATE_SIZE,
                        max_depth=MAX_SHINGLE_DEPTH, membership=None):
    """Split the live supernodes into disjoint candidate sets of at most ``max_size``.

    Supernodes are grouped by shingle; oversized groups are regrouped with a
    fresh hash, up to ``max_depth`` hashes in total, and whatever is still
    oversized is shuffled and cut into chunks.  Sets come out in shingle
    order, which is random per call.
    """
    if membership is None:
        membership = sg.membership()
    ids = np.fromiter(sg.members.keys(), dtype=np.int64, count=sg.num_supernodes)
    ids.sort()
    slots = int(ids.max()) + 1 if len(ids) else 0

    pending = [ids]
    done = []
    for level in range(max_depth):
        if not pending:
            break
        h = ShingleHash.random(g.num_nodes, rng, level)
        f = supernode_shingles(membership, h.closed_neighborhood_min(g), slots)
        still = []
        for group in pending:
            for sub in _group_by(group, f[group]):
                (still if len(sub) > max_size else done).append(sub)
        pending = still
        if not pending:
            break
    for group in pending:
        group = rng.permutation(group)
        for start in range(0, len(group), max_size):
            done.append(group[start:start + max_size])
    return CandidatePartition([s.tolist() for s in done])
