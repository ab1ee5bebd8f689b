"""Fast invariant checks run by ``qscore selftest``."""
from __future__ import annotations

import itertools
import math
from typing import Callable

import numpy as np

from .framework import CLIQUE_C_RAND_REFERENCE, MAX_CLIQUE, MAX_CUT, beta, clique_c_max, clique_c_rand, cut_c_max
from .gbs import GbsConfig, hafnian, subset_distribution
from .graph import Graph, generate_er
from .qubo import all_assignments, clique_qubo, cut_qubo, to_ising
from .solvers import brute_force_max_cut, exact_max_clique


def _c_rand(expected: float) -> bool:
    return abs(clique_c_rand() - expected) <= 1e-7


def _hafnian_counts_matchings() -> bool:
    rng = np.random.default_rng(0)
    for k in (2, 4, 6):
        for _ in range(20):
            a = np.triu(rng.random((k, k)) < 0.6, 1)
            a = a | a.T
            count = 0
            for perm in itertools.permutations(range(k)):
                pairs = list(zip(perm[::2], perm[1::2]))
                if all(p < q for p, q in pairs) and list(perm[::2]) == sorted(perm[::2]):
                    count += all(a[p, q] for p, q in pairs)
            if hafnian(a) != count:
                return False
    return True


def _qubo_exact(max_n: int = 10, graphs: int = 20) -> bool:
    for s in range(graphs):
        n = 3 + s % (max_n - 2)
        g = generate_er(n, 0.5, 17 + s)
        xs = all_assignments(n)
        e = clique_qubo(g).energies(xs)
        if not math.isclose(e.min(), -len(exact_max_clique(g)[0])):
            return False
        ec = cut_qubo(g).energies(xs)
        if not math.isclose(ec.min(), -MAX_CUT.evaluate(g, brute_force_max_cut(g))):
            return False
        zs = 1 - 2 * xs
        if not np.allclose(to_ising(clique_qubo(g)).energies(zs), e):
            return False
    return True


def _beta_identities() -> bool:
    for n in (5, 16, 100):
        if beta(MAX_CLIQUE, n, clique_c_rand()) != 0.0:
            return False
        if not math.isclose(beta(MAX_CLIQUE, n, clique_c_max(n)), 1.0):
            return False
        if not math.isclose(beta(MAX_CUT, n, cut_c_max(n)), 1.0):
            return False
    return True


def _gbs_normalized() -> bool:
    d = subset_distribution(generate_er(8, 0.5, 3), GbsConfig())
    return abs(d.probabilities.sum() - 1) <= 1e-9 and bool((d.probabilities >= 0).all())


def checks(expected_c_rand: float = CLIQUE_C_RAND_REFERENCE) -> list[tuple[str, Callable[[], bool]]]:
    return [
        ("random-clique constant E[X]", lambda: _c_rand(expected_c_rand)),
        ("hafnian counts perfect matchings", _hafnian_counts_matchings),
        ("QUBO/Ising exactness n<=10", _qubo_exact),
        ("beta identities", _beta_identities),
        ("GBS distribution normalized", _gbs_normalized),
        ("K4 hafnian", lambda: hafnian(Graph.complete(4).adjacency) == 3),
    ]


def run_selftest(expected_c_rand: float = CLIQUE_C_RAND_REFERENCE, report=print) -> bool:
    ok = True
    for name, check in checks(expected_c_rand):
        try:
            passed = bool(check())
        except Exception as exc:  # a crashing check is a failing check
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        report(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok &= passed
    return ok
