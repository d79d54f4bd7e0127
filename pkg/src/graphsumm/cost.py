"""Description-length accounting for supernode pairs.

Every supernode pair ``{A, B}`` is described either by keeping a superedge
and entropy-coding which of the ``|Pi_AB|`` possible subedges exist, or by
listing its ``|E_AB|`` subedges explicitly.  The cheaper option wins.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple


class CostMode(str, enum.Enum):
    THEORY = "theory"
    TIGHT = "tight"


@dataclass(frozen=True)
class CostConstants:
    """Per-superedge overhead plus the bits needed to list one subedge.

    THEORY fixes the overhead at ``2 log2|V| + log2|E|`` of the input graph.
    TIGHT uses ``2 log2|S| + log2 w_max`` of a summary snapshot.
    """

    overhead: float
    num_nodes: int
    mode: CostMode = CostMode.THEORY

    @property
    def edge_bits(self):
        return 2.0 * math.log2(self.num_nodes) if self.num_nodes > 1 else 0.0

    @classmethod
    def theory(cls, num_nodes, num_edges):
        return cls(_log2(num_nodes) * 2.0 + _log2(num_edges), num_nodes, CostMode.THEORY)

    @classmethod
    def tight(cls, num_nodes, num_supernodes, omega_max):
        return cls(_log2(num_supernodes) * 2.0 + _log2(omega_max), num_nodes, CostMode.TIGHT)


def _log2(x):
    return math.log2(x) if x > 1 else 0.0


class PairCost(NamedTuple):
    cost1: float
    cost2: float
    chosen: float
    superedge_chosen: bool


def pair_capacity(size_a, size_b, same):
    """``|Pi_AB|``: number of possible subedges between two supernodes."""
    if same:
        return size_a * (size_a - 1) // 2
    return size_a * size_b


def entropy_cost(pi, e):
    """Bits to entropy-code ``e`` present subedges out of ``pi`` slots."""
    if e < 0 or e > pi:
        raise ValueError(f"need 0 <= e <= pi, got e={e}, pi={pi}")
    if e == 0 or e == pi:
        return 0.0
    rest = pi - e
    # e*log2(pi/e) + rest*log2(pi/rest); every term is non-negative
    return e * math.log2(pi / e) + rest * math.log2(pi / rest)


def listing_cost(e, num_nodes):
    """Bits to list ``e`` subedges, two node ids each."""
    if e < 0:
        raise ValueError("e must be non-negative")
    return 2.0 * e * math.log2(num_nodes) if num_nodes > 1 else 0.0


def pair_cost(pi, e, consts):
    cost1 = consts.overhead + entropy_cost(pi, e)
    cost2 = listing_cost(e, consts.num_nodes)
    if pi == 0:
        # a singleton's self-pair has nothing to describe
        return PairCost(0.0, 0.0, 0.0, False)
    use_superedge = cost1 < cost2
    return PairCost(cost1, cost2, cost1 if use_superedge else cost2, use_superedge)


def chosen_cost(pi, e, overhead, edge_bits):
    """Fast path for ``pair_cost(...).chosen`` used in the search loop."""
    if e == 0:
        return 0.0
    listing = e * edge_bits
    if listing <= overhead:
        return listing
    rest = pi - e
    if rest:
        c1 = overhead + e * math.log2(pi / e) + rest * math.log2(pi / rest)
    else:
        c1 = overhead
    return c1 if c1 < listing else listing


def supernode_cost(sg, a, consts):
    """Sum of chosen pair costs over every pair containing ``a``, itself included."""
    sizes = sg.sizes
    size_a = sizes[a]
    overhead, edge_bits = consts.overhead, consts.edge_bits
    total = 0.0
    for c, e in sg.nbr[a].items():
        if c == a:
            pi = size_a * (size_a - 1) // 2
        else:
            pi = size_a * sizes[c]
        total += chosen_cost(pi, e, overhead, edge_bits)
    return total


def total_cost(g, sg, consts):
    """``|V| log2|V|`` plus the chosen cost of every unordered supernode pair."""
    sizes = sg.sizes
    overhead, edge_bits = consts.overhead, consts.edge_bits
    total = 0.0
    for a, row in sg.nbr.items():
        size_a = sizes[a]
        for c, e in row.items():
            if c < a:
                continue
            pi = size_a * (size_a - 1) // 2 if c == a else size_a * sizes[c]
            total += chosen_cost(pi, e, overhead, edge_bits)
    return g.num_nodes * _log2(g.num_nodes) + total
