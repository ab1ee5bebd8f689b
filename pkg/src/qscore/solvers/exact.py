"""Exact maximum clique by branch and bound over neighbor bitsets.

Vertices are relabeled by non-increasing degree; each node colors its
candidate set greedily and prunes when ``|clique| + colors`` cannot beat
the incumbent (Tomita-Seki MCQ bound).
"""
from __future__ import annotations

import numpy as np

from ..graph import Graph, members_of
from ..runtime import Deadline, UnsupportedSizeError, as_deadline
from .baseline import greedy_clique

POLL_NODES = 1000
MAX_EXACT_CUT = 20


class _Timeout(Exception):
    pass


def exact_max_clique(g: Graph, deadline: Deadline | float | None = None) -> tuple[tuple[int, ...], bool]:
    """Return ``(clique, proven_optimal)``; on timeout the incumbent is
    returned with ``proven_optimal=False``."""
    deadline = as_deadline(deadline)
    n = g.n
    if n == 0:
        return (), True
    order = sorted(range(n), key=lambda v: (-int(g.degrees[v]), v))
    pos = {v: k for k, v in enumerate(order)}
    old_rows = g.rows
    rows = [0] * n
    for v in range(n):
        r = 0
        for u in members_of(old_rows[v]):
            r |= 1 << pos[u]
        rows[pos[v]] = r

    best = [pos[v] for v in greedy_clique(g)]
    nodes = 0

    def color_sort(p: int):
        verts, bounds = [], []
        color = 0
        uncolored = p
        while uncolored:
            color += 1
            q = uncolored
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~rows[v] & ~low
                uncolored ^= low
                verts.append(v)
                bounds.append(color)
        return verts, bounds

    def expand(clique: list[int], p: int):
        nonlocal best, nodes
        nodes += 1
        if nodes % POLL_NODES == 0 and deadline.expired():
            raise _Timeout
        verts, bounds = color_sort(p)
        for k in range(len(verts) - 1, -1, -1):
            if len(clique) + bounds[k] <= len(best):
                return
            v = verts[k]
            clique.append(v)
            np_ = p & rows[v]
            if np_:
                expand(clique, np_)
            elif len(clique) > len(best):
                best = clique.copy()
            clique.pop()
            p &= ~(1 << v)

    try:
        expand([], (1 << n) - 1)
        proven = True
    except _Timeout:
        proven = False
    return tuple(sorted(order[v] for v in best)), proven


def brute_force_max_cut(g: Graph) -> tuple[int, ...]:
    """Best partition by enumerating all 2**(n-1) assignments (vertex n-1 fixed)."""
    n = g.n
    if n > MAX_EXACT_CUT:
        raise UnsupportedSizeError(f"exact Max-Cut limited to n <= {MAX_EXACT_CUT}")
    if n < 2:
        return ()
    e = g.edges
    best_val, best_mask = -1, 0
    chunk = 1 << 16
    for lo in range(0, 1 << (n - 1), chunk):
        idx = np.arange(lo, min(lo + chunk, 1 << (n - 1)), dtype=np.int64)
        a = (idx[:, None] >> e[:, 0]) & 1
        b = (idx[:, None] >> e[:, 1]) & 1
        vals = (a != b).sum(axis=1)
        k = int(vals.argmax())
        if vals[k] > best_val:
            best_val, best_mask = int(vals[k]), int(idx[k])
    return tuple(members_of(best_mask))

