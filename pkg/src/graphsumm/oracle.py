"""Brute-force reference computations for small graphs.

Nothing here reuses the incremental bookkeeping of the engine: subedge
counts are recounted from the raw edge array, costs are evaluated from the
textbook entropy formula, and the reconstruction error is summed over a
dense matrix.  Meant for graphs of at most a few hundred nodes.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

ORACLE_MAX_NODES = 200


@dataclass
class OracleReport:
    total_cost: float
    per_pair_costs: dict = field(default_factory=dict)
    per_node_costs: dict = field(default_factory=dict)
    re1: float | None = None
    re2: float | None = None


def _as_blocks(partition):
    if isinstance(partition, dict):
        return {label: set(nodes) for label, nodes in partition.items()}
    return {i: set(nodes) for i, nodes in enumerate(partition)}


def _block_of(blocks, num_nodes):
    owner = {}
    for label, nodes in blocks.items():
        for u in nodes:
            if u in owner:
                raise ValueError(f"node {u} appears in two blocks")
            owner[u] = label
    if len(owner) != num_nodes or set(owner) != set(range(num_nodes)):
        raise ValueError("blocks do not partition the node set")
    return owner


def _h(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def brute_pair_cost(pi, e, overhead, num_nodes):
    if pi == 0:
        return 0.0
    sigma = e / pi
    with_superedge = overhead + pi * _h(sigma)
    listing = 2 * e * math.log2(num_nodes)
    return min(with_superedge, listing)


def brute_total_cost(g, partition, consts):
    """Optimal description cost of ``g`` under a fixed partition, from scratch."""
    n = g.num_nodes
    if n > ORACLE_MAX_NODES:
        raise ValueError("oracle is limited to small graphs")
    blocks = _as_blocks(partition)
    owner = _block_of(blocks, n)
    counts = {}
    for u, v in g.edges.tolist():
        a, b = owner[u], owner[v]
        key = (a, b) if a <= b else (b, a)
        counts[key] = counts.get(key, 0) + 1

    labels = sorted(blocks)
    pair_costs = {}
    node_costs = {label: 0.0 for label in labels}
    for i, a in enumerate(labels):
        for b in labels[i:]:
            na, nb = len(blocks[a]), len(blocks[b])
            pi = na * (na - 1) // 2 if a == b else na * nb
            cost = brute_pair_cost(pi, counts.get((a, b), 0), consts.overhead, n)
            pair_costs[(a, b)] = cost
            node_costs[a] += cost
            if a != b:
                node_costs[b] += cost
    total = n * math.log2(n) + sum(pair_costs.values())
    return OracleReport(total, pair_costs, node_costs)


def brute_re(g, sg, p):
    """Reconstruction error from the dense adjacency matrices, diagonal excluded."""
    n = g.num_nodes
    if n > ORACLE_MAX_NODES:
        raise ValueError("oracle is limited to small graphs")
    adj = np.zeros((n, n))
    adj[g.edges[:, 0], g.edges[:, 1]] = 1.0
    adj[g.edges[:, 1], g.edges[:, 0]] = 1.0
    owner = sg.membership()
    block_size = Counter(owner.tolist())
    block_w = np.zeros((n, n))
    for a, b in sg.superedges:
        na, nb = block_size[a], block_size[b]
        slots = na * (na - 1) // 2 if a == b else na * nb
        block_w[a, b] = block_w[b, a] = sg.weight(a, b) / slots
    recon = block_w[owner[:, None], owner[None, :]]
    np.fill_diagonal(recon, 0.0)
    diff = np.abs(adj - recon) ** p
    return float(diff.sum() ** (1.0 / p))


def brute_reduction(g, partition, a, b, consts):
    """Cost saved by merging blocks ``a`` and ``b``, recomputed from scratch."""
    blocks = _as_blocks(partition)
    before = brute_total_cost(g, blocks, consts)
    merged = {k: v for k, v in blocks.items() if k not in (a, b)}
    merged[a] = blocks[a] | blocks[b]
    after = brute_total_cost(g, merged, consts)
    key = (a, b) if a <= b else (b, a)
    return (before.per_node_costs[a] + before.per_node_costs[b]
            - before.per_pair_costs[key] - after.per_node_costs[a])


def supernode_distance(g, partition, a, b):
    """Fewest hops between any subnode of block ``a`` and any subnode of block ``b``."""
    blocks = _as_blocks(partition)
    source, target = blocks[a], blocks[b]
    if source & target:
        return 0
    dist = {u: 0 for u in source}
    queue = deque(source)
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u).tolist():
            if v not in dist:
                dist[v] = dist[u] + 1
                if v in target:
                    return dist[v]
                queue.append(v)
    return math.inf
