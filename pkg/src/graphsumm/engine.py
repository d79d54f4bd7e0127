"""Budgeted summarization: randomized greedy merging plus superedge sparsification."""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .candidates import MAX_CANDIDATE_SIZE, MAX_SHINGLE_DEPTH, generate_candidates
from .cost import CostConstants, CostMode, chosen_cost, total_cost
from .errors import BudgetInfeasibleError
from .graph import input_size_bits
from .selection import select_kth
from .summary import SummaryGraph, reconstruction_error, summary_size_bits

log = logging.getLogger(__name__)


@dataclass
class EngineConfig:
    target_bits: float | None = None
    target_ratio: float | None = None
    iterations: int = 20
    seed: int = 0
    norm: int = 1
    cost_mode: CostMode = CostMode.TIGHT
    max_candidate_size: int = MAX_CANDIDATE_SIZE
    max_shingle_depth: int = MAX_SHINGLE_DEPTH
    trace_error: bool = False

    def __post_init__(self):
        if (self.target_bits is None) == (self.target_ratio is None):
            raise ValueError("exactly one of target_bits / target_ratio is required")
        if self.target_bits is not None and not self.target_bits > 0:
            raise ValueError("target_bits must be positive")
        if self.target_ratio is not None and not 0 < self.target_ratio <= 1:
            raise ValueError("target_ratio must lie in (0, 1]")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.norm not in (1, 2):
            raise ValueError("norm must be 1 or 2")
        self.cost_mode = CostMode(self.cost_mode)

    def resolve_target(self, g):
        if self.target_bits is not None:
            return float(self.target_bits)
        return self.target_ratio * input_size_bits(g)


@dataclass
class MergeDecision:
    pair: tuple
    relative_reduction: float
    accepted: bool


@dataclass
class IterationTrace:
    iteration: int
    threshold: float
    merges: int
    size_bits: float
    num_supernodes: int
    num_superedges: int
    re: float | None = None


@dataclass
class SummarizeReport:
    target_bits: float
    input_bits: float
    size_bits: float
    num_nodes: int
    num_edges: int
    num_supernodes: int
    num_superedges: int
    re1: float
    re2: float
    merges: int
    drops: int
    runtime_ms: float
    seed: int
    iterations: int
    norm: int
    trace: list = field(default_factory=list)

    @property
    def size_ratio(self):
        return self.size_bits / self.input_bits

    @property
    def re1_norm(self):
        return self.re1 / (self.num_nodes * (self.num_nodes - 1))

    @property
    def re2_norm(self):
        return self.re2 / (self.num_nodes * (self.num_nodes - 1))

    def as_dict(self):
        d = asdict(self)
        d.update(size_ratio=self.size_ratio, re1_norm=self.re1_norm, re2_norm=self.re2_norm)
        return d


def threshold(t, T):
    """Merge-acceptance threshold ``1/(1+t)``, dropping to 0 at the last iteration."""
    if not 1 <= t <= T:
        raise ValueError(f"iteration {t} outside 1..{T}")
    return 0.0 if t == T else 1.0 / (1 + t)


def snapshot_constants(g, sg, mode):
    if mode is CostMode.THEORY:
        return CostConstants.theory(g.num_nodes, g.num_edges)
    return CostConstants.tight(g.num_nodes, sg.num_supernodes, max(sg.omega_max(), 1))


class SearchState:
    """Mutable search state: the summary plus cached per-supernode costs.

    ``node_cost(a)`` caches the optimal description cost of every pair that
    contains ``a``.  A merge invalidates the merged pair and all of their
    neighbours; changing the constants clears the cache.  ``total`` tracks
    the full description cost incrementally between constant changes.
    """

    def __init__(self, g, sg, consts, norm=1):
        if norm not in (1, 2):
            raise ValueError("norm must be 1 or 2")
        self.g = g
        self.sg = sg
        self.norm = norm
        self.set_constants(consts)

    def set_constants(self, consts):
        self.consts = consts
        self._overhead = consts.overhead
        self._edge_bits = consts.edge_bits
        self._cache = {}
        self.total = total_cost(self.g, self.sg, consts)

    def node_cost(self, a):
        cost = self._cache.get(a)
        if cost is None:
            sizes = self.sg.sizes
            size_a = sizes[a]
            overhead, edge_bits = self._overhead, self._edge_bits
            log2 = math.log2
            cost = 0.0
            for c, e in self.sg.nbr[a].items():
                listing = e * edge_bits
                if listing <= overhead:
                    cost += listing
                    continue
                pi = size_a * (size_a - 1) // 2 if c == a else size_a * sizes[c]
                rest = pi - e
                c1 = overhead + e * log2(pi / e) + rest * log2(pi / rest) if rest else overhead
                cost += c1 if c1 < listing else listing
            self._cache[a] = cost
        return cost

    def _shared_cost(self, a, b):
        e = self.sg.nbr[a].get(b, 0)
        if not e:
            return 0.0
        sizes = self.sg.sizes
        return chosen_cost(sizes[a] * sizes[b], e, self._overhead, self._edge_bits)

    def merged_cost(self, a, b):
        """Optimal cost of every pair containing ``a | b``, without mutating anything."""
        sg = self.sg
        sizes = sg.sizes
        row_a = sg.nbr[a]
        row_b = sg.nbr[b]
        s = sizes[a] + sizes[b]
        overhead, edge_bits = self._overhead, self._edge_bits
        log2 = math.log2
        e_ab = row_a.get(b, 0)
        inner = row_a.get(a, 0) + row_b.get(b, 0) + e_ab
        cost = chosen_cost(s * (s - 1) // 2, inner, overhead, edge_bits) if inner else 0.0
        get_b = row_b.get
        # chosen_cost inlined: this loop dominates the search
        for c, e in row_a.items():
            if c == a or c == b:
                continue
            e += get_b(c, 0)
            listing = e * edge_bits
            if listing <= overhead:
                cost += listing
                continue
            pi = s * sizes[c]
            rest = pi - e
            c1 = overhead + e * log2(pi / e) + rest * log2(pi / rest) if rest else overhead
            cost += c1 if c1 < listing else listing
        for c, e in row_b.items():
            if c == a or c == b or c in row_a:
                continue
            listing = e * edge_bits
            if listing <= overhead:
                cost += listing
                continue
            pi = s * sizes[c]
            rest = pi - e
            c1 = overhead + e * log2(pi / e) + rest * log2(pi / rest) if rest else overhead
            cost += c1 if c1 < listing else listing
        return cost

    def reduction_parts(self, a, b):
        """(current cost of pairs touching a or b, cost after merging them)."""
        before = self.node_cost(a) + self.node_cost(b) - self._shared_cost(a, b)
        return before, self.merged_cost(a, b)

    def relative_reduction(self, a, b):
        if a == b:
            raise ValueError("relative reduction needs two distinct supernodes")
        if a not in self.sg.members or b not in self.sg.members:
            raise KeyError(f"supernode {a if a not in self.sg.members else b} is not live")
        before, after = self.reduction_parts(a, b)
        if before <= 0.0:
            return 0.0
        return 1.0 - after / before

    def merge_and_sparsify(self, a, b):
        """Merge ``a`` and ``b`` and choose superedges for the merged supernode.

        A superedge is kept only if entropy coding beats listing and, under
        the l1 norm, only if it does not raise the reconstruction error
        (density at least one half).  Returns the surviving id.
        """
        if a == b:
            raise ValueError("cannot merge a supernode with itself")
        sg = self.sg
        nbr = sg.nbr
        before = self.node_cost(a) + self.node_cost(b) - self._shared_cost(a, b)
        keep, gone = (a, b) if len(nbr[a]) >= len(nbr[b]) else (b, a)
        cache = self._cache
        for row in (nbr[a], nbr[b]):
            for c in row:
                cache.pop(c, None)
        cache.pop(a, None)
        cache.pop(b, None)

        sg.merge(keep, gone)

        sizes = sg.sizes
        size_k = sizes[keep]
        overhead, edge_bits = self._overhead, self._edge_bits
        l1 = self.norm == 1
        superedges = sg.superedges
        cost = 0.0
        for c, e in nbr[keep].items():
            pi = size_k * (size_k - 1) // 2 if c == keep else size_k * sizes[c]
            listing = e * edge_bits
            if listing <= overhead:
                cost += listing
                continue
            rest = pi - e
            c1 = overhead
            if rest:
                c1 += e * math.log2(pi / e) + rest * math.log2(pi / rest)
            if c1 < listing:
                cost += c1
                if not l1 or 2 * e >= pi:
                    superedges.add((keep, c) if keep <= c else (c, keep))
            else:
                cost += listing
        cache[keep] = cost
        self.total += cost - before
        return keep

    def process_candidate_set(self, cset, theta, rng, on_merge=None):
        """Greedy merging inside one candidate set; returns the number of merges.

        Each round samples ``ceil(log2 |C|)`` random pairs, takes the one with
        the largest relative reduction (ties to the smaller pair) and merges
        it if the reduction beats ``theta``.  Stops after
        ``max(log2 |C|, 1)`` consecutive rejections.
        """
        members = list(cset)
        merges = 0
        skips = 0
        randrange = rng.randrange
        while len(members) >= 2:
            n = len(members)
            log_n = math.log2(n)
            if skips >= max(log_n, 1.0):
                break
            best = None
            best_r = -math.inf
            for _ in range(max(math.ceil(log_n), 1)):
                i = randrange(n)
                j = randrange(n - 1)
                if j >= i:
                    j += 1
                a, b = members[i], members[j]
                if a > b:
                    a, b, i, j = b, a, j, i
                r = self.relative_reduction(a, b)
                if r > best_r or (r == best_r and (a, b) < best[0]):
                    best, best_r = ((a, b), i, j), r
            (a, b), i, j = best
            if best_r > theta:
                keep = self.merge_and_sparsify(a, b)
                gone_idx = j if keep == a else i
                members[gone_idx] = members[-1]
                members.pop()
                merges += 1
                skips = 0
                if on_merge is not None:
                    on_merge(self, MergeDecision((a, b), best_r, True))
            else:
                skips += 1
        return merges


def drop_increase(e, pi, norm):
    """Increase of RE_1 (or of RE_2 squared) when a superedge is dropped, one orientation."""
    if norm == 1:
        return (2.0 * e / pi - 1.0) * e
    return e * e / pi


def further_sparsify(sg, k, norm, rng):
    """Drop the superedges whose removal hurts RE_p least until the size fits ``k``.

    Each round drops every superedge whose error increase is at most the
    xi-th smallest, where xi is the number of drops the current per-edge
    size saving says are needed.  Returns the number of superedges dropped.
    """
    drops = 0
    while True:
        size = summary_size_bits(sg)
        if size <= k:
            return drops
        if not sg.superedges:
            raise BudgetInfeasibleError(k, size)
        pairs = list(sg.superedges)
        nbr, sizes = sg.nbr, sg.sizes
        incr = np.empty(len(pairs))
        for idx, (a, b) in enumerate(pairs):
            e = nbr[a][b]
            pi = sizes[a] * (sizes[a] - 1) // 2 if a == b else sizes[a] * sizes[b]
            incr[idx] = drop_increase(e, pi, norm)
        n_super = sg.num_supernodes
        w_max = sg.omega_max()
        per_edge = ((2.0 * math.log2(n_super) if n_super > 1 else 0.0)
                    + (math.log2(w_max) if w_max > 1 else 0.0))
        xi = math.ceil((size - k) / per_edge)
        if xi >= len(pairs):
            victims = range(len(pairs))
        else:
            delta = select_kth(incr, xi - 1, rng)
            victims = np.flatnonzero(incr <= delta).tolist()
        for idx in victims:
            sg.superedges.discard(pairs[idx])
        drops += len(victims)


def summarize(g, cfg, on_merge=None, on_iteration=None):
    """Summarize ``g`` within ``cfg``'s bit budget.

    Returns ``(summary, report)``.  Raises :class:`BudgetInfeasibleError` if
    the budget cannot be met even after dropping every superedge.
    """
    started = time.perf_counter()
    k = cfg.resolve_target(g)
    input_bits = input_size_bits(g)
    np_rng = np.random.default_rng(cfg.seed)
    py_rng = random.Random(cfg.seed)

    sg = SummaryGraph.singleton(g)
    state = None
    size = summary_size_bits(sg)
    trace = []
    merges = 0
    T = cfg.iterations
    t = 1
    while t <= T and k < size:
        candidates = generate_candidates(sg, g, np_rng, cfg.max_candidate_size,
                                         cfg.max_shingle_depth)
        consts = snapshot_constants(g, sg, cfg.cost_mode)
        if state is None:
            state = SearchState(g, sg, consts, cfg.norm)
        else:
            state.set_constants(consts)
        theta = threshold(t, T)
        done = 0
        for cset in candidates.sets:
            if len(cset) > 1:
                done += state.process_candidate_set(cset, theta, py_rng, on_merge)
        merges += done
        size = summary_size_bits(sg)
        rec = IterationTrace(t, theta, done, size, sg.num_supernodes, sg.num_superedges)
        if cfg.trace_error:
            rec.re = reconstruction_error(g, sg, cfg.norm)
        trace.append(rec)
        log.debug("iteration %d: theta=%.3f merges=%d size=%.1f", t, theta, done, size)
        if on_iteration is not None:
            on_iteration(sg, rec)
        t += 1

    drops = further_sparsify(sg, k, cfg.norm, np_rng) if size > k else 0
    runtime_ms = (time.perf_counter() - started) * 1000.0
    size = summary_size_bits(sg)
    report = SummarizeReport(
        target_bits=k, input_bits=input_bits, size_bits=size,
        num_nodes=g.num_nodes, num_edges=g.num_edges,
        num_supernodes=sg.num_supernodes, num_superedges=sg.num_superedges,
        re1=reconstruction_error(g, sg, 1), re2=reconstruction_error(g, sg, 2),
        merges=merges, drops=drops, runtime_ms=runtime_ms, seed=cfg.seed,
        iterations=len(trace), norm=cfg.norm, trace=trace)
    return sg, report
