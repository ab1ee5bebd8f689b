"""Single-flip tabu search over QUBOs with a wall-clock deadline."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qubo import Qubo
from ..runtime import Deadline, as_deadline
from . import _kernels

WORK_QUANTUM = 2_000_000


@dataclass(frozen=True)
class TabuParams:
    """``tenure=None`` means ``min(20, n // 4)``; ``stall_limit=None`` means
    ``max(200, 10 n)`` non-improving moves before a diversifying restart."""

    tenure: int | None = None
    stall_limit: int | None = None
    restarts: int | None = 10
    perturb_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.tenure is not None and self.tenure < 1:
            raise ValueError("tenure must be >= 1")
        if self.stall_limit is not None and self.stall_limit < 1:
            raise ValueError("stall_limit must be >= 1")
        if self.restarts is not None and self.restarts < 1:
            raise ValueError("restarts must be >= 1 or None")

    def resolved(self, n: int) -> tuple[int, int]:
        tenure = self.tenure or max(1, min(20, n // 4))
        stall = self.stall_limit or max(200, 10 * n)
        return tenure, stall


def tabu_search(q: Qubo, params: TabuParams = TabuParams(), deadline: Deadline | float | None = None) -> np.ndarray:
    """Steepest single-flip descent with tabu tenure and aspiration.

    After ``stall_limit`` moves without improving the current walk's best,
    the search restarts from the incumbent with a random fraction of its
    bits flipped. The first walk starts from the all-zeros assignment.
    """
    deadline = as_deadline(deadline)
    n = q.n_vars
    best_x = np.zeros(n, dtype=np.int8)
    best_e = np.array([q.offset])
    if n == 0:
        return best_x
    tenure, stall_limit = params.resolved(n)
    indptr, indices, data = q.neighbor_csr()
    rng = np.random.default_rng(params.seed)
    block = max(1, WORK_QUANTUM // (n + len(data) // max(n, 1)))
    n_flip = max(1, int(round(params.perturb_fraction * n)))

    walk = 0
    # the first walk always runs one block
    while (params.restarts is None or walk < params.restarts) and (walk == 0 or not deadline.expired()):
        if walk == 0:
            x = best_x.copy()
        else:
            x = best_x.copy()
            x[rng.choice(n, n_flip, replace=False)] ^= 1
        walk += 1
        field = _kernels.local_field(indptr, indices, data, q.linear, x)
        energy = q.energy(x)
        if energy < best_e[0]:
            best_e[0] = energy
            best_x[:] = x
        fstate = np.array([energy, energy])
        istate = np.zeros(2, dtype=np.int64)
        tabu_until = np.zeros(n, dtype=np.int64)
        while True:
            offsets = rng.integers(0, n, block)
            stalled = _kernels.tabu_steps(indptr, indices, data, x, field, tabu_until, offsets,
                                          tenure, stall_limit, fstate, istate, best_x, best_e)
            if stalled or deadline.expired():
                break
    return best_x
