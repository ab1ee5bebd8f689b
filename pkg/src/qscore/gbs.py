"""Exact small-N Gaussian boson sampling for dense subgraphs, plus the
classical shrink/extend post-processing that turns samples into cliques.

The sampling law is the collision-free GBS distribution for a graph encoded
with uniform squeezing: an even-size subset S is observed with probability
proportional to ``c**|S| * Haf(A_S)**2``, where A_S is the induced 0/1
adjacency matrix and ``c`` stands in for the squeezing strength. Odd subsets
have zero hafnian. The distribution is enumerated exactly, so N is capped.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, is_clique, mask_of, members_of, vertex_set
from .runtime import Deadline, UnsupportedSizeError, as_deadline

MAX_HAFNIAN_DIM = 16
MAX_ENUM_VERTICES = 24


def hafnian(m) -> float:
    """Sum over perfect matchings of products of matched entries.

    Recursive pairing of the lowest free index, memoized on the bitmask of
    free indices. The diagonal is ignored; ``hafnian([]) == 1``.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("hafnian needs a square matrix")
    k = a.shape[0]
    if k % 2:
        raise ValueError(f"hafnian needs even dimension, got {k}")
    if k > MAX_HAFNIAN_DIM:
        raise ValueError(f"dimension {k} exceeds cap {MAX_HAFNIAN_DIM}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12):
        raise ValueError("hafnian needs a symmetric matrix")
    rows = a.tolist()
    memo = {0: 1.0}

    def haf(mask: int) -> float:
        if mask in memo:
            return memo[mask]
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        total = 0.0
        r = rest
        while r:
            bit = r & -r
            j = bit.bit_length() - 1
            if rows[i][j] != 0:
                total += rows[i][j] * haf(rest ^ bit)
            r ^= bit
        memo[mask] = total
        return total

    return haf((1 << k) - 1)


def subset_hafnians(g: Graph, max_subset: int) -> np.ndarray:
    """``Haf(A_S)`` for every vertex mask S with even size <= max_subset.

    Dynamic program over masks in increasing order; each submask is
    numerically smaller so its value is ready. Entries for other masks are 0.
    """
    n = g.n
    rows = g.rows
    haf = np.zeros(1 << n, dtype=np.int64)
    haf[0] = 1
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        if size % 2 or size > max_subset:
            continue
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        partners = rest & rows[i]
        total = 0
        while partners:
            bit = partners & -partners
            total += haf[rest ^ bit]
            partners ^= bit
        haf[mask] = total
    return haf


@dataclass(frozen=True)
class GbsConfig:
    scale_c: float = 1.0
    max_subset: int | None = None
    samples: int = 100
    use_extension: bool = True
    seed: int = 0

    def __post_init__(self):
        if not self.scale_c > 0:
            raise ValueError("scale_c must be positive")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.max_subset is not None:
            if self.max_subset % 2 or self.max_subset < 0:
                raise ValueError("max_subset must be even and non-negative")
            if self.max_subset > MAX_HAFNIAN_DIM:
                raise ValueError(f"max_subset exceeds the tractability cap {MAX_HAFNIAN_DIM}")

    def subset_cap(self, n: int) -> int:
        cap = self.max_subset if self.max_subset is not None else min(n, MAX_HAFNIAN_DIM)
        cap = min(cap, n)
        return cap - cap % 2


@dataclass(frozen=True, eq=False)
class SubsetDistribution:
    """Probabilities of the support subsets, as parallel arrays."""

    n: int
    masks: np.ndarray
    probabilities: np.ndarray
    normalization: float

    @property
    def subsets(self) -> list[tuple[int, ...]]:
        return [tuple(members_of(int(m))) for m in self.masks]

    @property
    def entries(self) -> dict[tuple[int, ...], float]:
        return dict(zip(self.subsets, self.probabilities.tolist()))

    def probability(self, subset: Iterable[int]) -> float:
        m = mask_of(vertex_set(subset, self.n))
        hit = np.flatnonzero(self.masks == m)
        return float(self.probabilities[hit[0]]) if hit.size else 0.0


def subset_distribution(g: Graph, cfg: GbsConfig = GbsConfig()) -> SubsetDistribution:
    if g.n > MAX_ENUM_VERTICES:
        raise UnsupportedSizeError(f"GBS enumeration supports n <= {MAX_ENUM_VERTICES}, got {g.n}")
    cap = cfg.subset_cap(g.n)
    haf = subset_hafnians(g, cap)
    masks = np.flatnonzero(haf)
    sizes = np.array([int(m).bit_count() for m in masks])
    weights = cfg.scale_c ** sizes * haf[masks].astype(np.float64) ** 2
    z = float(weights.sum())
    return SubsetDistribution(g.n, masks, weights / z, z)


def sample_subsets(dist: SubsetDistribution, samples: int, seed: int = 0) -> list[tuple[int, ...]]:
    """I.i.d. draws by inverse CDF over the enumerated table."""
    return [tuple(members_of(int(m))) for m in sample_masks(dist, samples, np.random.default_rng(seed))]


def sample_masks(dist: SubsetDistribution, samples: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(dist.probabilities)
    idx = np.searchsorted(cdf, rng.random(samples) * cdf[-1], side="right")
    return dist.masks[np.minimum(idx, len(cdf) - 1)]


def shrink_to_clique(g: Graph, s: Iterable[int]) -> tuple[int, ...]:
    """Drop the member with fewest neighbors inside the set (ties to the
    lowest index) until the set is a clique."""
    vs = list(vertex_set(s, g.n))
    rows = g.rows
    mask = mask_of(vs)
    while True:
        k = len(vs)
        degs = [(rows[v] & mask).bit_count() for v in vs]
        if all(d == k - 1 for d in degs):
            return tuple(vs)
        drop = min(range(k), key=lambda t: (degs[t], vs[t]))
        mask ^= 1 << vs[drop]
        del vs[drop]


def extend_clique(g: Graph, clique: Iterable[int]) -> tuple[int, ...]:
    """Greedily add vertices adjacent to every member until maximal.

    Among qualifying vertices the one of highest degree in ``g`` is taken,
    ties to the lowest index.
    """
    vs = vertex_set(clique, g.n)
    if not is_clique(g, vs):
        raise ValueError("extend_clique needs a clique as input")
    rows, deg = g.rows, g.degrees
    members = set(vs)
    cand = (1 << g.n) - 1
    for v in vs:
        cand &= rows[v]
    while cand:
        v = max(members_of(cand), key=lambda u: (deg[u], -u))
        members.add(v)
        cand &= rows[v]
    return tuple(sorted(members))


def gbs_solve_clique(g: Graph, cfg: GbsConfig = GbsConfig(), deadline: Deadline | float | None = None) -> tuple[int, ...]:
    """Sample dense subgraphs, shrink each to a clique (optionally extend it)
    and keep the largest. Samples are processed in batches so a deadline
    leaves the best clique found so far."""
    deadline = as_deadline(deadline)
    dist = subset_distribution(g, cfg)
    rng = np.random.default_rng(cfg.seed)
    best: tuple[int, ...] = ()
    seen: set[int] = set()
    done = 0
    batch = 64
    while done < cfg.samples and not deadline.expired():
        k = min(batch, cfg.samples - done)
        for m in sample_masks(dist, k, rng).tolist():
            if m in seen:
                continue
            seen.add(m)
            c = shrink_to_clique(g, members_of(m))
            if cfg.use_extension:
                c = extend_clique(g, c)
            if len(c) > len(best):
                best = c
        done += k
    return best
