from .anneal import SaParams, simulated_annealing
from .baseline import greedy_clique, greedy_cut, random_growth_clique, random_partition
from .exact import brute_force_max_cut, exact_max_clique
from .tabu import TabuParams, tabu_search

__all__ = [
    "SaParams",
    "TabuParams",
    "brute_force_max_cut",
    "exact_max_clique",
    "greedy_clique",
    "greedy_cut",
    "random_growth_clique",
    "random_partition",
    "simulated_annealing",
    "tabu_search",
]
