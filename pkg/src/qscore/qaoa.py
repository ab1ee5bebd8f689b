"""Noiseless depth-p QAOA by dense state-vector simulation.

Qubit ``q`` is bit ``q`` of the basis-state index; ``|0>`` is spin ``z=+1``
and bit ``x=0``, matching ``x = (1 - z) / 2`` in :func:`qscore.qubo.to_ising`.
The optimizer is driven by the exact expectation; shots are only drawn for
the final readout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .graph import Graph, is_clique
from .qubo import IsingModel, clique_qubo, cut_qubo, decode_clique, decode_partition, to_ising
from .runtime import Deadline, UnsupportedSizeError, as_deadline

OPTIMIZERS = ("sequential-quadratic", "simplex", "grid-then-local")
FD_STEP = 1e-4


@dataclass(frozen=True)
class QaoaConfig:
    depth: int = 1
    optimizer: str = "sequential-quadratic"
    max_evals: int = 200
    shots: int = 1024
    seed: int = 0
    max_qubits: int = 20
    grid: tuple[int, int] = (16, 8)
    repair: bool = True

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"unknown optimizer {self.optimizer!r}; choose from {OPTIMIZERS}")
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")


def basis_energies(ising: IsingModel, max_qubits: int = 20) -> np.ndarray:
    """Cost-Hamiltonian eigenvalue of every computational basis state."""
    n = ising.n_spins
    if n > max_qubits:
        raise UnsupportedSizeError(f"{n} qubits exceeds the simulation cap of {max_qubits}")
    idx = np.arange(1 << n, dtype=np.int64)
    z = 1.0 - 2.0 * ((idx[:, None] >> np.arange(n)) & 1)
    e = ising.constant + z @ ising.h
    for a, b, c in zip(ising.rows.tolist(), ising.cols.tolist(), ising.couplings.tolist()):
        e += c * z[:, a] * z[:, b]
    return e


def apply_mixer(psi: np.ndarray, n: int, angle: float) -> None:
    """Apply ``exp(-i angle X)`` to every qubit, in place."""
    c, s = math.cos(angle), math.sin(angle)
    for q in range(n):
        v = psi.reshape(-1, 2, 1 << q)
        a = v[:, 0, :].copy()
        b = v[:, 1, :]
        v[:, 0, :] = c * a - 1j * s * b
        v[:, 1, :] = c * b - 1j * s * a


def qaoa_state(energies: np.ndarray, gammas, betas) -> np.ndarray:
    n = int(energies.size).bit_length() - 1
    psi = np.full(energies.size, 1 / math.sqrt(energies.size), dtype=np.complex128)
    for g, b in zip(gammas, betas):
        psi *= np.exp(-1j * g * energies)
        apply_mixer(psi, n, b)
    return psi


def _expectation(energies, gammas, betas) -> float:
    psi = qaoa_state(energies, gammas, betas)
    return float(np.dot(np.abs(psi) ** 2, energies))


def qaoa_expectation(ising: IsingModel, gammas, betas, max_qubits: int = 20) -> float:
    gammas, betas = np.atleast_1d(gammas), np.atleast_1d(betas)
    if gammas.shape != betas.shape:
        raise ValueError("gammas and betas must have the same length")
    return _expectation(basis_energies(ising, max_qubits), gammas, betas)


class _Stop(Exception):
    pass


def qaoa_optimize(ising: IsingModel, cfg: QaoaConfig = QaoaConfig(), deadline: Deadline | float | None = None,
                  energies: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray, float]:
    """Minimize the exact expectation over ``2 * depth`` angles.

    A coarse grid over gamma in [0, pi) and beta in [0, pi/2) (same angles
    in every layer) seeds a local refinement: SLSQP with central-difference
    gradients, Nelder-Mead, or Powell. The best point evaluated is returned
    even if the evaluation budget or the deadline cuts the search short.
    """
    deadline = as_deadline(deadline)
    if energies is None:
        energies = basis_energies(ising, cfg.max_qubits)
    p = cfg.depth
    best = {"f": math.inf, "theta": np.zeros(2 * p)}
    evals = 0

    def f(theta):
        nonlocal evals
        if evals >= cfg.max_evals or (evals and deadline.expired()):
            raise _Stop
        evals += 1
        val = _expectation(energies, theta[:p], theta[p:])
        if val < best["f"]:
            best["f"], best["theta"] = val, np.array(theta, dtype=float)
        return val

    def grad(theta):
        g = np.empty_like(theta)
        for k in range(theta.size):
            step = np.zeros_like(theta)
            step[k] = FD_STEP
            g[k] = (f(theta + step) - f(theta - step)) / (2 * FD_STEP)
        return g

    try:
        ng, nb = cfg.grid
        for gamma in np.linspace(0, math.pi, ng, endpoint=False):
            for b in np.linspace(0, math.pi / 2, nb, endpoint=False):
                f(np.concatenate([np.full(p, gamma), np.full(p, b)]))
        x0 = best["theta"].copy()
        if cfg.optimizer == "sequential-quadratic":
            minimize(f, x0, jac=grad, method="SLSQP", options={"maxiter": cfg.max_evals})
        elif cfg.optimizer == "simplex":
            minimize(f, x0, method="Nelder-Mead", options={"maxfev": cfg.max_evals})
        else:
            minimize(f, x0, method="Powell", options={"maxfev": cfg.max_evals})
    except _Stop:
        pass
    theta = best["theta"]
    return theta[:p], theta[p:], best["f"]


def sample_basis_states(energies, gammas, betas, shots: int, seed: int) -> np.ndarray:
    probs = np.abs(qaoa_state(energies, gammas, betas)) ** 2
    probs /= probs.sum()
    return np.random.default_rng(seed).choice(probs.size, size=shots, p=probs)


def _bits(index: int, n: int) -> np.ndarray:
    return ((index >> np.arange(n)) & 1).astype(np.int8)


def qaoa_solve_clique(g: Graph, cfg: QaoaConfig = QaoaConfig(), deadline: Deadline | float | None = None) -> tuple[int, ...]:
    """Largest clique decoded from the final-state samples."""
    if g.n > cfg.max_qubits:
        raise UnsupportedSizeError(f"{g.n} qubits exceeds the simulation cap of {cfg.max_qubits}")
    if g.n == 0:
        return ()
    energies = basis_energies(to_ising(clique_qubo(g)), cfg.max_qubits)
    gammas, betas, _ = qaoa_optimize(None, cfg, deadline, energies=energies)
    best: tuple[int, ...] = ()
    for b in np.unique(sample_basis_states(energies, gammas, betas, cfg.shots, cfg.seed)).tolist():
        x = _bits(b, g.n)
        if cfg.repair:
            c = decode_clique(g, x, repair=True)
        else:
            c = tuple(np.flatnonzero(x).tolist())
            if not is_clique(g, c):
                continue
        if len(c) > len(best):
            best = c
    return best


def qaoa_solve_cut(g: Graph, cfg: QaoaConfig = QaoaConfig(), deadline: Deadline | float | None = None) -> tuple[int, ...]:
    """Best partition among the final-state samples."""
    if g.n > cfg.max_qubits:
        raise UnsupportedSizeError(f"{g.n} qubits exceeds the simulation cap of {cfg.max_qubits}")
    if g.n == 0:
        return ()
    energies = basis_energies(to_ising(cut_qubo(g)), cfg.max_qubits)
    gammas, betas, _ = qaoa_optimize(None, cfg, deadline, energies=energies)
    samples = np.unique(sample_basis_states(energies, gammas, betas, cfg.shots, cfg.seed))
    b = int(samples[np.argmin(energies[samples])])
    return decode_partition(_bits(b, g.n))
