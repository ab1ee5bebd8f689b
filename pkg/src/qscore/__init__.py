"""Q-score benchmarking for Max-Clique and Max-Cut on random graphs."""
from .framework import (BETA_STAR, MAX_CLIQUE, MAX_CUT, BetaPoint, QScoreProblem, QScoreResult, beta, clique_c_max,
                        clique_c_rand, cut_c_max, cut_c_rand, get_problem, q_score)
from .graph import ErdosRenyiSpec, Graph, cut_value, generate_er, is_clique, subgraph_degrees
from .runtime import Deadline, UnsupportedSizeError

__version__ = "0.1.0"
