"""Expected linear-time order statistics."""

import numpy as np


def select_kth(values, k, rng):
    """Return the ``k``-th smallest entry (0-based) of ``values``.

    Quickselect with a uniformly random pivot drawn from ``rng``; each round
    is a vectorised three-way partition, so expected total work is O(n).
    """
    a = np.asarray(values)
    if not 0 <= k < len(a):
        raise IndexError(f"k={k} out of range for {len(a)} values")
    while len(a) > 16:
        pivot = a[rng.integers(len(a))]
        below = a[a < pivot]
        if k < len(below):
            a = below
            continue
        n_equal = int(np.count_nonzero(a == pivot))
        if k < len(below) + n_equal:
            return pivot
        k -= len(below) + n_equal
        a = a[a > pivot]
    return np.sort(a)[k]
