"""Compiled inner loops for single-flip QUBO local search.

All kernels work on the symmetric CSR coupling view of a QUBO and keep a
local field ``f_i = linear_i + sum_j Q_ij x_j`` so that flipping ``i``
changes the energy by ``f_i`` (0 -> 1) or ``-f_i`` (1 -> 0).
"""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def local_field(indptr, indices, data, linear, x):
    n = x.shape[0]
    f = linear.copy()
    for i in range(n):
        if x[i]:
            for k in range(indptr[i], indptr[i + 1]):
                f[indices[k]] += data[k]
    return f


@njit(cache=True)
def flip_delta(x, field, i):
    return field[i] if x[i] == 0 else -field[i]


@njit(cache=True)
def apply_flip(indptr, indices, data, x, field, i):
    """Flip bit ``i`` in place, update the fields and return the energy delta."""
    d = field[i] if x[i] == 0 else -field[i]
    if x[i] == 0:
        x[i] = 1
        for k in range(indptr[i], indptr[i + 1]):
            field[indices[k]] += data[k]
    else:
        x[i] = 0
        for k in range(indptr[i], indptr[i + 1]):
            field[indices[k]] -= data[k]
    return d


@njit(cache=True)
def anneal_sweeps(indptr, indices, data, x, field, betas, rand, energy, best_x, best_e):
    """Metropolis sweeps in index order, one inverse temperature per sweep.

    ``best_x``/``best_e`` hold the incumbent and are updated in place.
    Returns the energy of the current state.
    """
    n = x.shape[0]
    for s in range(betas.shape[0]):
        b = betas[s]
        for i in range(n):
            d = field[i] if x[i] == 0 else -field[i]
            if d <= 0.0 or rand[s, i] < math.exp(-b * d):
                energy += apply_flip(indptr, indices, data, x, field, i)
                if energy < best_e[0] - 1e-12:
                    best_e[0] = energy
                    best_x[:] = x
    return energy


@njit(cache=True)
def tabu_steps(indptr, indices, data, x, field, tabu_until, offsets, tenure,
               stall_limit, fstate, istate, best_x, best_e):
    """Steepest-descent tabu moves; at most ``len(offsets)`` of them.

    ``fstate = [energy, run_best]`` and ``istate = [iteration, stall]`` carry
    the walk between calls. A tabu move is allowed only if it beats the
    run's best energy (aspiration). Scanning starts at ``offsets[t]`` so
    ties are broken in a rotating order. Returns True once the walk has
    gone ``stall_limit`` moves without improving its best.
    """
    n = x.shape[0]
    energy = fstate[0]
    run_best = fstate[1]
    it = istate[0]
    stall = istate[1]
    stalled = False
    for t in range(offsets.shape[0]):
        best_d = np.inf
        best_i = -1
        off = offsets[t]
        for k in range(n):
            i = off + k
            if i >= n:
                i -= n
            d = field[i] if x[i] == 0 else -field[i]
            if d < best_d:
                if tabu_until[i] <= it or energy + d < run_best - 1e-9:
                    best_d = d
                    best_i = i
        it += 1
        if best_i < 0:
            stall += 1
        else:
            energy += apply_flip(indptr, indices, data, x, field, best_i)
            tabu_until[best_i] = it + tenure
            if energy < run_best - 1e-9:
                run_best = energy
                stall = 0
                if energy < best_e[0] - 1e-12:
                    best_e[0] = energy
                    best_x[:] = x
            else:
                stall += 1
        if stall >= stall_limit:
            stalled = True
            break
    fstate[0] = energy
    fstate[1] = run_best
    istate[0] = it
    istate[1] = stall
    return stalled
