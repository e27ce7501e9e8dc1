"""Exact minimum hitting set over small bitmask universes.

Used by the certificate oracles: a read set S certifies x iff it meets
``x ^ y`` for every input y whose value falls outside the output set.
"""

from __future__ import annotations

import numpy as np


def minimal_masks(masks: np.ndarray, n: int) -> list[int]:
    """Inclusion-minimal members of ``masks`` (values in [0, 2^n)).

    Computes the superset closure with a sum-over-subsets sweep, then keeps
    a mask iff no mask with one bit removed is in the closure.
    """
    size = 1 << n
    member = np.zeros(size, dtype=bool)
    member[np.asarray(masks, dtype=np.int64)] = True
    up = member.copy()
    for j in range(n):
        v = up.reshape(-1, 2, 1 << j)
        v[:, 1, :] |= v[:, 0, :]
    keep = member.copy()
    idx = np.arange(size)
    for j in range(n):
        has = (idx >> j) & 1 == 1
        below = np.zeros(size, dtype=bool)
        below[has] = up[idx[has] ^ (1 << j)]
        keep &= ~below
    return [int(m) for m in np.flatnonzero(keep)]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _packing_bound(sets: list[int]) -> int:
    used = 0
    count = 0
    for s in sets:
        if not s & used:
            used |= s
            count += 1
    return count


def _search(sets: list[int], k: int) -> int | None:
    if not sets:
        return 0
    if k == 0 or _packing_bound(sets) > k:
        return None
    pivot = sets[0]
    bits = pivot
    while bits:
        b = bits & -bits
        bits ^= b
        rest = [s for s in sets if not s & b]
        found = _search(rest, k - 1)
        if found is not None:
            return found | b
    return None


def min_hitting_set(sets, max_size: int | None = None) -> tuple[int, int] | None:
    """Smallest mask meeting every set, as ``(size, mask)``.

    Iterative deepening over the size, so the first hit is optimal. Returns
    None when an empty set makes the instance infeasible or nothing of size
    ``<= max_size`` exists.
    """
    sets = sorted(set(int(s) for s in sets), key=lambda s: (_popcount(s), s))
    if sets and sets[0] == 0:
        return None
    k = _packing_bound(sets)
    limit = max_size if max_size is not None else max((s.bit_length() for s in sets), default=0)
    while k <= limit:
        found = _search(sets, k)
        if found is not None:
            return _popcount(found), found
        k += 1
    return None
