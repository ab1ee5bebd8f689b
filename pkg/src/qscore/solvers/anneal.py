"""Simulated annealing over QUBOs with a wall-clock deadline."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..qubo import Qubo
from ..runtime import Deadline, as_deadline
from . import _kernels

# flip-neighbor operations per compiled call between deadline polls
WORK_QUANTUM = 2_000_000


@dataclass(frozen=True)
class SaParams:
    """Annealing schedule.

    ``beta_initial``/``beta_final`` default to values scaled from the QUBO:
    the largest possible uphill move is accepted with probability 1/2 at the
    start and the smallest with probability 1e-4 at the end.
    ``restarts=None`` keeps restarting until the deadline.
    """

    sweeps_hint: int = 1000
    beta_initial: float | None = None
    beta_final: float | None = None
    restarts: int | None = 10
    seed: int = 0

    def __post_init__(self):
        if self.sweeps_hint < 1:
            raise ValueError("sweeps_hint must be >= 1")
        if self.restarts is not None and self.restarts < 1:
            raise ValueError("restarts must be >= 1 or None")
        for b in (self.beta_initial, self.beta_final):
            if b is not None and not b > 0:
                raise ValueError("inverse temperatures must be positive")
        if self.beta_initial and self.beta_final and self.beta_final < self.beta_initial:
            raise ValueError("beta_final must be >= beta_initial")


def default_beta_range(q: Qubo) -> tuple[float, float]:
    absq = np.abs(q.values)
    span = np.abs(q.linear).copy()
    np.add.at(span, q.rows, absq)
    np.add.at(span, q.cols, absq)
    coeffs = np.concatenate([np.abs(q.linear), absq])
    coeffs = coeffs[coeffs > 0]
    if coeffs.size == 0:
        return 1.0, 1.0
    hot = math.log(2) / span.max()
    cold = math.log(1e4) / coeffs.min()
    return hot, max(hot, cold)


def beta_ladder(q: Qubo, params: SaParams) -> np.ndarray:
    hot, cold = default_beta_range(q)
    b0 = params.beta_initial or hot
    b1 = params.beta_final or max(b0, cold)
    return np.geomspace(b0, b1, params.sweeps_hint)


def simulated_annealing(q: Qubo, params: SaParams = SaParams(), deadline: Deadline | float | None = None) -> np.ndarray:
    """Best assignment seen over all restarts (anytime: the all-zeros
    assignment is the initial incumbent, so something is always returned)."""
    deadline = as_deadline(deadline)
    n = q.n_vars
    best_x = np.zeros(n, dtype=np.int8)
    best_e = np.array([q.offset])
    if n == 0:
        return best_x
    indptr, indices, data = q.neighbor_csr()
    betas = beta_ladder(q, params)
    rng = np.random.default_rng(params.seed)
    block = max(1, WORK_QUANTUM // (n + len(data)))
    restart = 0
    # the first restart always runs one block and starts from the zero incumbent,
    # so even an expired deadline yields at least one improving move
    while (params.restarts is None or restart < params.restarts) and (restart == 0 or not deadline.expired()):
        x = best_x.copy() if restart == 0 else rng.integers(0, 2, n, dtype=np.int8)
        restart += 1
        field = _kernels.local_field(indptr, indices, data, q.linear, x)
        energy = q.energy(x)
        if energy < best_e[0]:
            best_e[0] = energy
            best_x[:] = x
        for lo in range(0, len(betas), block):
            chunk = betas[lo : lo + block]
            rand = rng.random((len(chunk), n))
            energy = _kernels.anneal_sweeps(indptr, indices, data, x, field, chunk, rand, energy, best_x, best_e)
            if deadline.expired():
                break
    return best_x
