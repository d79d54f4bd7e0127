"""Seeded random graph generators for tests and benchmarks."""

import numpy as np

from .graph import Graph


def random_graph(num_nodes, num_edges, seed):
    """Uniform random simple graph with about ``num_edges`` edges (duplicates dropped)."""
    rng = np.random.default_rng(seed)
    pairs = rng.integers(0, num_nodes, size=(int(num_edges * 1.05) + 8, 2))
    g = Graph.from_edges(pairs, num_nodes)
    if g.num_edges > num_edges:
        keep = rng.choice(g.num_edges, size=num_edges, replace=False)
        g = Graph(num_nodes, g.edges[np.sort(keep)])
    return g


def planted_partition_graph(num_nodes, num_blocks, degree_in, degree_out, seed):
    """Graph with dense blocks on a sparse random background.

    Block sizes are drawn from a Dirichlet so they vary.  About
    ``num_nodes * degree_in / 2`` edges fall inside blocks and
    ``num_nodes * degree_out / 2`` are spread uniformly.
    """
    rng = np.random.default_rng(seed)
    share = rng.dirichlet(np.full(num_blocks, 2.0))
    sizes = np.maximum(rng.multinomial(num_nodes - 2 * num_blocks, share) + 2, 2)
    sizes[-1] += num_nodes - sizes.sum()
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    perm = rng.permutation(num_nodes)

    m_in = int(num_nodes * degree_in / 2)
    weights = sizes.astype(float) * (sizes - 1)
    blocks = rng.choice(num_blocks, size=m_in, p=weights / weights.sum())
    u = starts[blocks] + (rng.random(m_in) * sizes[blocks]).astype(np.int64)
    v = starts[blocks] + (rng.random(m_in) * sizes[blocks]).astype(np.int64)

    m_out = int(num_nodes * degree_out / 2)
    x = rng.integers(0, num_nodes, size=m_out)
    y = rng.integers(0, num_nodes, size=m_out)

    src = perm[np.concatenate([u, x])]
    dst = perm[np.concatenate([v, y])]
    return Graph.from_edges(np.stack([src, dst], axis=1), num_nodes)
