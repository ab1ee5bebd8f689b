"""Undirected simple graphs, reproducible Erdős–Rényi generation and the
clique/cut predicates every solver relies on.

Edges of ``G(n, p)`` are drawn with a counter-based generator: the pair
``(i, j)`` with ``i < j`` has triangular index ``k = j*(j-1)/2 + i`` and is
present iff the SplitMix64 output at stream position ``k + 1`` for ``seed``,
mapped to a double in ``[0, 1)``, is below ``p``. The decision for a pair is
a pure function of ``(seed, i, j)``, so graphs are identical across
platforms, chunkings and worker counts, and ``G(n, p, seed)`` is the induced
subgraph of ``G(n + 1, p, seed)`` on the first ``n`` vertices.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_PAIR_CHUNK = 1 << 22


def splitmix64(x):
    """SplitMix64 finalizer applied elementwise to a uint64 array."""
    z = np.asarray(x, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def splitmix_stream(seed: int, counters: np.ndarray) -> np.ndarray:
    """Outputs of the SplitMix64 stream for ``seed`` at the given positions."""
    state = np.uint64(seed & _MASK64) + np.asarray(counters, dtype=np.uint64) * _GOLDEN
    return splitmix64(state)


def derive_seed(*parts: int) -> int:
    """Hash a tuple of integers into one 64-bit seed (order sensitive)."""
    h = np.zeros(1, dtype=np.uint64)
    for p in parts:
        h = splitmix64((h ^ np.uint64(p & _MASK64)) + _GOLDEN)
    return int(h[0])


def uniform_from_bits(bits: np.ndarray) -> np.ndarray:
    """Top 53 bits of each word as a double in [0, 1)."""
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def _bitset(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``.

    The boolean adjacency matrix is canonical; neighbor bitsets (Python
    ints, bit ``j`` of ``rows[i]`` set iff ``i ~ j``) and the sorted edge
    array are derived lazily and cached.
    """

    __slots__ = ("n", "_adj", "_rows", "_edges", "_degrees")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj = np.zeros((n, n), dtype=bool)
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise IndexError(f"edge ({i}, {j}) out of range for n={n}")
            adj[i, j] = adj[j, i] = True
        self._init(adj)

    def _init(self, adj: np.ndarray) -> None:
        adj.setflags(write=False)
        self.n = adj.shape[0]
        self._adj = adj
        self._rows = None
        self._edges = None
        self._degrees = None

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        a = np.array(adj, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if a.diagonal().any():
            raise ValueError("adjacency has self-loops")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        g = cls.__new__(cls)
        g._init(a)
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_adjacency(~np.eye(n, dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def rows(self) -> list[int]:
        if self._rows is None:
            self._rows = [_bitset(r) for r in self._adj]
        return self._rows

    @property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` int array of edges ``(i, j)``, ``i < j``, ascending."""
        if self._edges is None:
            i, j = np.nonzero(np.triu(self._adj, 1))
            self._edges = np.column_stack([i, j]).astype(np.int64)
            self._edges.setflags(write=False)
        return self._edges

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = self._adj.sum(axis=1)
        return self._degrees

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    def neighbors(self, v: int) -> np.ndarray:
        return np.flatnonzero(self._adj[v])

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        idx = np.asarray(vertices, dtype=np.int64)
        return Graph.from_adjacency(self._adj[np.ix_(idx, idx)])

    def complement(self) -> "Graph":
        return Graph.from_adjacency(~self._adj & ~np.eye(self.n, dtype=bool))

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash((self.n, self._adj.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class ErdosRenyiSpec:
    n: int
    edge_probability: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValueError(f"edge_probability must lie in [0, 1], got {self.edge_probability}")


def generate_er(spec: ErdosRenyiSpec | int, p: float = 0.5, seed: int = 0) -> Graph:
    """Sample ``G(n, p)`` deterministically from ``seed``.

    Accepts either an :class:`ErdosRenyiSpec` or ``(n, p, seed)``.
    """
    if not isinstance(spec, ErdosRenyiSpec):
        spec = ErdosRenyiSpec(int(spec), p, seed)
    n, prob = spec.n, spec.edge_probability
    adj = np.zeros((n, n), dtype=bool)
    if n >= 2:
        width = max(1, _PAIR_CHUNK // n)
        i = np.arange(n, dtype=np.uint64)[:, None]
        for j0 in range(1, n, width):
            j = np.arange(j0, min(n, j0 + width), dtype=np.uint64)[None, :]
            counters = j * (j - np.uint64(1)) // np.uint64(2) + i + np.uint64(1)
            draw = uniform_from_bits(splitmix_stream(spec.seed, counters)) < prob
            # only i < j is meaningful
            draw &= i < j
            adj[:, j0 : j0 + draw.shape[1]] = draw
        adj |= adj.T
    return Graph.from_adjacency(adj)


def vertex_set(members: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    """Normalize to a sorted duplicate-free tuple, validating indices."""
    vs = tuple(sorted(int(v) for v in members))
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate vertices in {vs}")
    if vs and vs[0] < 0:
        raise IndexError(f"negative vertex index {vs[0]}")
    if n is not None and vs and vs[-1] >= n:
        raise IndexError(f"vertex {vs[-1]} out of range for n={n}")
    return vs


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    vs = vertex_set(s, g.n)
    rows = g.rows
    mask = mask_of(vs)
    return all((rows[v] | (1 << v)) & mask == mask for v in vs)


def cut_value(g: Graph, partition: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in ``partition``."""
    vs = vertex_set(partition, g.n)
    side = np.zeros(g.n, dtype=bool)
    side[list(vs)] = True
    e = g.edges
    return int(np.count_nonzero(side[e[:, 0]] != side[e[:, 1]]))


def subgraph_degrees(g: Graph, s: Iterable[int]) -> list[tuple[int, int]]:
    vs = vertex_set(s, g.n)
    rows = g.rows
    mask = mask_of(vs)
    return [(v, (rows[v] & mask).bit_count()) for v in vs]


def dump_graph(g: Graph, path) -> None:
    """Write ``n m`` then one ascending ``i j`` line per edge."""
    lines = [f"{g.n} {g.m}"] + [f"{i} {j}" for i, j in g.edges.tolist()]
    Path(path).write_text("\n".join(lines) + "\n")


def load_graph(path) -> Graph:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty graph file")
    n, m = (int(t) for t in lines[0])
    edges = [(int(a), int(b)) for a, b in lines[1:]]
    if len(edges) != m:
        raise ValueError(f"{path}: header announces {m} edges, found {len(edges)}")
    return Graph(n, edges)
