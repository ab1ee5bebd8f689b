"""QUBO and Ising encodings of Max-Clique and Max-Cut.

Everything minimizes. The clique encoding rewards each selected vertex by
one unit and charges ``penalty`` for every selected non-adjacent pair::

    E(x) = -sum_i x_i + penalty * sum_{(i,j) not in E} x_i x_j

Why ``penalty > 1`` suffices: take any x whose support S is not a clique
and a vertex v of S with at least one non-neighbor in S. Dropping v loses
one unit of reward and saves at least ``penalty`` units of charge, so the
energy strictly decreases. A minimizer therefore selects a clique, on which
the energy is ``-|S|``, and the optimum is ``-omega(G)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .graph import Graph, is_clique, vertex_set


def _pairs(rows, cols, vals, n_vars):
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if rows.shape != cols.shape or rows.shape != vals.shape:
        raise ValueError("quadratic index/value arrays differ in shape")
    if np.any(rows >= cols):
        raise ValueError("quadratic keys must satisfy i < j")
    if rows.size and (rows.min() < 0 or cols.max() >= n_vars):
        raise IndexError("quadratic index out of range")
    return rows, cols, vals


@dataclass(frozen=True, eq=False)
class Qubo:
    """Sparse upper-triangular QUBO in coordinate form.

    ``rows[k] < cols[k]`` with coefficient ``values[k]``. Stored as arrays
    rather than a dict since clique QUBOs at p=1/2 carry ~n^2/4 terms.
    """

    n_vars: int
    linear: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=np.float64)
        if lin.shape != (self.n_vars,):
            raise ValueError(f"linear has shape {lin.shape}, expected ({self.n_vars},)")
        rows, cols, vals = _pairs(self.rows, self.cols, self.values, self.n_vars)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_dict(cls, n_vars: int, linear: Mapping[int, float] | None = None,
                  quadratic: Mapping[tuple[int, int], float] | None = None, offset: float = 0.0) -> "Qubo":
        lin = np.zeros(n_vars)
        for i, c in (linear or {}).items():
            lin[i] += c
        acc: dict[tuple[int, int], float] = {}
        for (i, j), c in (quadratic or {}).items():
            if i == j:
                lin[i] += c
                continue
            key = (min(i, j), max(i, j))
            acc[key] = acc.get(key, 0.0) + c
        keys = sorted(acc)
        return cls(n_vars, lin, [k[0] for k in keys], [k[1] for k in keys], [acc[k] for k in keys], offset)

    @property
    def quadratic(self) -> dict[tuple[int, int], float]:
        return {(int(i), int(j)): float(v) for i, j, v in zip(self.rows, self.cols, self.values)}

    def to_dense(self) -> np.ndarray:
        """Upper-triangular matrix with the linear terms on the diagonal."""
        q = np.diag(self.linear)
        np.add.at(q, (self.rows, self.cols), self.values)
        return q

    def energy(self, x) -> float:
        return qubo_energy(self, x)

    def energies(self, xs: np.ndarray) -> np.ndarray:
        """Energies of a batch of assignments, shape ``(k, n_vars)``."""
        xs = np.asarray(xs, dtype=np.float64)
        return self.offset + xs @ self.linear + (xs[:, self.rows] * xs[:, self.cols]) @ self.values

    def neighbor_csr(self):
        """Symmetric CSR view ``(indptr, indices, data)`` of the couplings."""
        r = np.concatenate([self.rows, self.cols])
        c = np.concatenate([self.cols, self.rows])
        v = np.concatenate([self.values, self.values])
        order = np.lexsort((c, r))
        r, c, v = r[order], c[order], v[order]
        indptr = np.zeros(self.n_vars + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=self.n_vars), out=indptr[1:])
        return indptr, c.astype(np.int64), v


@dataclass(frozen=True, eq=False)
class IsingModel:
    """``E(z) = constant + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j``, z in {-1, +1}."""

    h: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    couplings: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.float64)
        rows, cols, vals = _pairs(self.rows, self.cols, self.couplings, len(h))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "couplings", vals)
        object.__setattr__(self, "constant", float(self.constant))

    @property
    def n_spins(self) -> int:
        return len(self.h)

    @property
    def j(self) -> dict[tuple[int, int], float]:
        return {(int(a), int(b)): float(v) for a, b, v in zip(self.rows, self.cols, self.couplings)}

    def energy(self, z) -> float:
        return float(self.energies(np.asarray(z)[None, :])[0])

    def energies(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=np.float64)
        return self.constant + zs @ self.h + (zs[:, self.rows] * zs[:, self.cols]) @ self.couplings


def _as_bits(x, n_vars) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (n_vars,):
        raise ValueError(f"assignment has length {x.size}, expected {n_vars}")
    return x.astype(np.float64)


def qubo_energy(q: Qubo, x) -> float:
    xs = _as_bits(x, q.n_vars)
    return float(q.offset + xs @ q.linear + (xs[q.rows] * xs[q.cols]) @ q.values)


def clique_qubo(g: Graph, penalty: float = 2.0) -> Qubo:
    if not penalty > 1:
        raise ValueError(f"penalty must exceed 1 for an exact encoding, got {penalty}")
    non_edges = np.triu(~g.adjacency, 1)
    rows, cols = np.nonzero(non_edges)
    return Qubo(g.n, -np.ones(g.n), rows, cols, np.full(len(rows), float(penalty)))


def cut_qubo(g: Graph) -> Qubo:
    """Minimize ``-sum_{(i,j) in E} (x_i + x_j - 2 x_i x_j)``."""
    e = g.edges
    return Qubo(g.n, -g.degrees.astype(np.float64), e[:, 0], e[:, 1], np.full(len(e), 2.0))


def to_ising(q: Qubo) -> IsingModel:
    """Substitute ``x = (1 - z) / 2``; energies are preserved exactly."""
    h = -q.linear / 2
    np.add.at(h, q.rows, -q.values / 4)
    np.add.at(h, q.cols, -q.values / 4)
    constant = q.offset + q.linear.sum() / 2 + q.values.sum() / 4
    return IsingModel(h, q.rows, q.cols, q.values / 4, constant)


def spins_to_bits(z) -> np.ndarray:
    return ((1 - np.asarray(z)) // 2).astype(np.int8)


def bits_to_spins(x) -> np.ndarray:
    return (1 - 2 * np.asarray(x)).astype(np.int8)


def decode_clique(g: Graph, x, repair: bool = True) -> tuple[int, ...]:
    """Turn a bit assignment into a valid clique.

    Without ``repair`` an invalid selection collapses to its highest-degree
    member (ties to the lowest index).
    """
    from .gbs import shrink_to_clique

    bits = np.asarray(x)
    if bits.shape != (g.n,):
        raise ValueError(f"assignment has length {bits.size}, expected {g.n}")
    s = vertex_set(np.flatnonzero(bits))
    if is_clique(g, s):
        return s
    if repair:
        return shrink_to_clique(g, s)
    deg = g.degrees
    best = max(s, key=lambda v: (deg[v], -v))
    return (best,)


def decode_partition(x) -> tuple[int, ...]:
    return vertex_set(np.flatnonzero(np.asarray(x)))


def dump_qubo(q: Qubo, path) -> None:
    """Header ``n_vars offset``; then ``i i c`` (linear) and ``i j c`` lines."""
    lines = [f"{q.n_vars} {q.offset!r}"]
    lines += [f"{i} {i} {c!r}" for i, c in enumerate(q.linear.tolist()) if c != 0]
    lines += [f"{i} {j} {c!r}" for i, j, c in zip(q.rows.tolist(), q.cols.tolist(), q.values.tolist())]
    Path(path).write_text("\n".join(lines) + "\n")


def load_qubo(path) -> Qubo:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    n_vars, offset = int(lines[0][0]), float(lines[0][1])
    linear: dict[int, float] = {}
    quad: dict[tuple[int, int], float] = {}
    for a, b, c in lines[1:]:
        i, j = int(a), int(b)
        if i == j:
            linear[i] = linear.get(i, 0.0) + float(c)
        else:
            quad[(i, j)] = float(c)
    return Qubo.from_dict(n_vars, linear, quad, offset)


def brute_force_minimum(q: Qubo) -> tuple[float, np.ndarray]:
    """Minimum energy and all minimizing assignments by enumeration (small n)."""
    if q.n_vars > 20:
        raise ValueError("brute force limited to 20 variables")
    xs = all_assignments(q.n_vars)
    e = q.energies(xs)
    best = e.min()
    return float(best), xs[np.isclose(e, best, rtol=0, atol=1e-9)]


def all_assignments(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)
