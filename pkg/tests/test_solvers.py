import time

import numpy as np
import pytest

from oracles import max_clique_size
from qscore.graph import Graph, derive_seed, generate_er, is_clique
from qscore.qubo import Qubo, all_assignments, clique_qubo, cut_qubo, decode_clique
from qscore.runtime import Deadline
from qscore.solvers import (SaParams, TabuParams, brute_force_max_cut, exact_max_clique, greedy_clique,
                            random_growth_clique, simulated_annealing, tabu_search)
from qscore.solvers import _kernels
from qscore.solvers.anneal import default_beta_range


def test_random_growth_extremes():
    assert len(random_growth_clique(Graph.complete(9), 3)) == 9
    for s in range(20):
        assert len(random_growth_clique(Graph.empty(6), s)) == 1


def test_random_growth_is_valid_and_seeded():
    g = generate_er(40, 0.5, 1)
    for s in range(50):
        c = random_growth_clique(g, s)
        assert is_clique(g, c)
        assert c == random_growth_clique(g, s)


def test_random_growth_mean_small_sample():
    sizes = [len(random_growth_clique(generate_er(30, 0.5, derive_seed(5, s)), s)) for s in range(4000)]
    # sd of X is below 0.7, so 4000 runs give a standard error < 0.012
    assert np.mean(sizes) == pytest.approx(1.6416325, abs=0.05)


def test_greedy_clique(c5):
    assert greedy_clique(Graph.complete(5)) == (0, 1, 2, 3, 4)
    assert len(greedy_clique(Graph.empty(4))) == 1
    assert greedy_clique(c5) == (0, 1)


def test_exact_examples(c5):
    assert exact_max_clique(Graph.complete(7)) == ((0, 1, 2, 3, 4, 5, 6), True)
    c, proven = exact_max_clique(c5)
    assert len(c) == 2 and proven
    assert exact_max_clique(Graph(0)) == ((), True)


def test_exact_matches_enumeration():
    for s in range(50):
        g = generate_er(12, 0.5, 700 + s)
        c, proven = exact_max_clique(g)
        assert proven and is_clique(g, c)
        assert len(c) == max_clique_size(g.adjacency)
    for s in range(10):
        g = generate_er(14, 0.5, 900 + s)
        assert len(exact_max_clique(g)[0]) == max_clique_size(g.adjacency)


def test_exact_respects_deadline():
    g = generate_er(700, 0.5, 1)
    t = time.perf_counter()
    c, proven = exact_max_clique(g, Deadline(50))
    assert time.perf_counter() - t < 5
    assert is_clique(g, c) and len(c) >= 1
    assert not proven


def test_brute_force_max_cut(k4):
    assert len(brute_force_max_cut(k4)) == 2


def _brute_min(q):
    return q.energies(all_assignments(q.n_vars)).min()


@pytest.mark.parametrize("solve, params", [(simulated_annealing, SaParams()), (tabu_search, TabuParams())])
def test_local_search_on_k6(solve, params):
    q = clique_qubo(Graph.complete(6))
    assert q.energy(solve(q, params, Deadline(10_000))) == -6


@pytest.mark.parametrize("solve, make", [(simulated_annealing, SaParams), (tabu_search, TabuParams)])
def test_local_search_hits_brute_force_optimum(solve, make):
    hits = 0
    for s in range(100):
        q = clique_qubo(generate_er(12, 0.5, 4000 + s))
        hits += q.energy(solve(q, make(seed=s), Deadline(1000))) == _brute_min(q)
    assert hits >= 95


@pytest.mark.parametrize("solve", [simulated_annealing, tabu_search])
def test_anytime_on_huge_instance(solve):
    g = generate_er(5000, 0.5, 2)
    q = clique_qubo(g)
    x = solve(q, deadline=Deadline(1))
    assert x.shape == (5000,) and set(np.unique(x)) <= {0, 1}
    assert is_clique(g, decode_clique(g, x))


@pytest.mark.parametrize("solve, make", [(simulated_annealing, SaParams), (tabu_search, TabuParams)])
def test_never_worse_than_zero_assignment(solve, make):
    rng = np.random.default_rng(1)
    for s in range(20):
        n = 15
        q = Qubo.from_dict(n, dict(enumerate(rng.normal(size=n))),
                           {(i, j): rng.normal() for i in range(n) for j in range(i + 1, n)}, 0.0)
        x = solve(q, make(seed=s, restarts=1, **({"sweeps_hint": 1} if make is SaParams else {"stall_limit": 1})))
        assert q.energy(x) <= q.offset


@pytest.mark.parametrize("solve, make", [(simulated_annealing, SaParams), (tabu_search, TabuParams)])
def test_deterministic_without_deadline(solve, make):
    q = clique_qubo(generate_er(60, 0.5, 8))
    assert np.array_equal(solve(q, make(seed=4)), solve(q, make(seed=4)))


def test_incremental_delta_tracking():
    rng = np.random.default_rng(0)
    n = 30
    q = Qubo.from_dict(n, dict(enumerate(rng.normal(size=n))),
                       {(i, j): rng.normal() for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5},
                       rng.normal())
    indptr, indices, data = q.neighbor_csr()
    x = rng.integers(0, 2, n).astype(np.int8)
    field = _kernels.local_field(indptr, indices, data, q.linear, x)
    energy = q.energy(x)
    for i in rng.integers(0, n, 10_000):
        energy += _kernels.apply_flip(indptr, indices, data, x, field, i)
        assert abs(energy - q.energy(x)) <= 1e-9


def test_default_beta_range():
    q = clique_qubo(Graph.empty(5))
    hot, cold = default_beta_range(q)
    # worst uphill: 1 + 4 * 2 = 9, smallest coefficient 1
    assert np.exp(-hot * 9) == pytest.approx(0.5)
    assert np.exp(-cold * 1) == pytest.approx(1e-4)


def test_param_validation():
    with pytest.raises(ValueError):
        SaParams(beta_initial=2.0, beta_final=1.0)
    with pytest.raises(ValueError):
        TabuParams(tenure=0)


def test_cut_qubo_local_search():
    g = generate_er(12, 0.5, 5)
    q = cut_qubo(g)
    assert q.energy(tabu_search(q)) == _brute_min(q)
