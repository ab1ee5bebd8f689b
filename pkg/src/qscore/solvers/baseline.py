"""Random-growth baseline and greedy clique / cut heuristics."""
from __future__ import annotations

import numpy as np

from ..graph import Graph, members_of


def random_growth_clique(g: Graph, seed: int | np.random.Generator = 0) -> tuple[int, ...]:
    """Grow a clique from random vertices, stopping at the first rejection.

    Vertices are visited in a uniformly random order (equivalent to drawing
    uniformly among untried vertices); the first vertex that would break the
    clique ends the run. Its expected size on ``G(N, 1/2)`` is the
    Max-Clique random cost.
    """
    if g.n < 1:
        raise ValueError("random growth needs at least one vertex")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    adj = g.adjacency
    clique: list[int] = []
    for v in rng.permutation(g.n).tolist():
        if clique and not adj[v, clique].all():
            break
        clique.append(v)
    return tuple(sorted(clique))


def random_partition(g: Graph, seed: int | np.random.Generator = 0) -> tuple[int, ...]:
    """Uniform random side assignment: the Max-Cut random baseline."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return tuple(np.flatnonzero(rng.random(g.n) < 0.5).tolist())


def greedy_clique(g: Graph) -> tuple[int, ...]:
    rows = g.rows
    cand = (1 << g.n) - 1
    clique = []
    while cand:
        # highest degree inside the remaining candidates, ties to lowest index
        v = max(members_of(cand), key=lambda u: ((rows[u] & cand).bit_count(), -u))
        clique.append(v)
        cand &= rows[v]
    return tuple(sorted(clique))


def greedy_cut(g: Graph) -> tuple[int, ...]:
    """Place vertices in index order on the side that cuts more placed edges."""
    adj = g.adjacency
    side = np.zeros(g.n, dtype=np.int8)
    placed = np.zeros(g.n, dtype=bool)
    for v in range(g.n):
        nb = adj[v] & placed
        on_one = int(np.count_nonzero(side[nb]))
        on_zero = int(np.count_nonzero(nb)) - on_one
        side[v] = 1 if on_zero > on_one else 0
        placed[v] = True
    return tuple(np.flatnonzero(side).tolist())
