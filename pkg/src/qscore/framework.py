"""Reference costs, normalized quality beta(N) and Q-score extraction.

Two instantiations are provided: Max-Clique (the default for this package)
and Max-Cut. Both are evaluated on ``G(N, 1/2)`` instances; ``beta`` is the
affine map that sends the random-solution cost to 0 and the optimal-solution
cost to 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .graph import Graph, cut_value, is_clique, vertex_set

BETA_STAR = 0.2
CLIQUE_C_RAND_REFERENCE = 1.6416325
LOG2_HALF_E = math.log2(math.e / 2)


def clique_random_size_survival(p: float, i: int) -> float:
    """P[X >= i] for the random-growth clique size on ``G(N, p)``."""
    _check_pmf_domain(p, i)
    return p ** (i * (i - 1) / 2)


def clique_random_size_pmf(p: float, i: int) -> float:
    """P[X = i] = (1 - p**i) * p**(i(i-1)/2)."""
    _check_pmf_domain(p, i)
    return (1.0 - p**i) * p ** (i * (i - 1) / 2)


def _check_pmf_domain(p, i):
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if i < 1:
        raise ValueError(f"clique size index must be >= 1, got {i}")


def clique_c_rand(p: float = 0.5, terms: int | None = None, tol: float = 1e-12) -> float:
    """Expected size of the random-growth clique, E[X] = sum_i i * P[X = i].

    With ``terms`` the series is truncated after that many terms; otherwise
    summation stops at the first term below ``tol``. The result does not
    depend on N (the tail beyond any practical N is below ``tol``).
    """
    total, i = 0.0, 1
    while True:
        t = i * clique_random_size_pmf(p, i)
        total += t
        if terms is not None:
            if i >= terms:
                return total
        elif t < tol:
            return total
        i += 1


def clique_c_max(n: int) -> float:
    """Matula's asymptotic clique number of ``G(n, 1/2)``.

    Valid for ``n >= 3``; it is known to be inaccurate for small n, which
    is why beta may leave [0, 1] there.
    """
    if n < 3:
        raise ValueError(f"clique_c_max requires n >= 3, got {n}")
    lg = math.log2(n)
    return 2 * lg - 2 * math.log2(lg) + 2 * LOG2_HALF_E + 1


def cut_c_rand(n: int) -> float:
    """Expected cut of a balanced random partition: floor(n/2) * ceil(n/2) / 2."""
    if n < 2:
        raise ValueError(f"cut_c_rand requires n >= 2, got {n}")
    return (n // 2) * ((n + 1) // 2) / 2


def cut_c_max(n: int) -> float:
    if n < 2:
        raise ValueError(f"cut_c_max requires n >= 2, got {n}")
    return n * n / 8 + 0.178 * n**1.5


class ProblemKind(str, enum.Enum):
    MAX_CLIQUE = "max-clique"
    MAX_CUT = "max-cut"


@dataclass(frozen=True)
class QScoreProblem:
    name: ProblemKind
    c_rand: Callable[[int], float]
    c_max: Callable[[int], float]
    n_min: int

    def is_valid(self, g: Graph, solution: Iterable[int]) -> bool:
        try:
            vs = vertex_set(solution, g.n)
        except (ValueError, IndexError):
            return False
        if self.name is ProblemKind.MAX_CLIQUE:
            return is_clique(g, vs)
        return True

    def evaluate(self, g: Graph, solution: Iterable[int]) -> int:
        """Clique size (invalid cliques raise) or cut value."""
        vs = vertex_set(solution, g.n)
        if self.name is ProblemKind.MAX_CLIQUE:
            if not is_clique(g, vs):
                raise ValueError("solution is not a clique")
            return len(vs)
        return cut_value(g, vs)

    def fallback_objective(self, n: int) -> float:
        """Objective assigned when a solver produces no answer in time."""
        return self.c_rand(n)


MAX_CLIQUE = QScoreProblem(ProblemKind.MAX_CLIQUE, lambda n: clique_c_rand(), clique_c_max, 3)
MAX_CUT = QScoreProblem(ProblemKind.MAX_CUT, cut_c_rand, cut_c_max, 2)


def get_problem(name: str | ProblemKind | QScoreProblem) -> QScoreProblem:
    if isinstance(name, QScoreProblem):
        return name
    kind = ProblemKind(name)
    return MAX_CLIQUE if kind is ProblemKind.MAX_CLIQUE else MAX_CUT


def beta(problem, n: int, c_mean: float) -> float:
    problem = get_problem(problem)
    lo, hi = problem.c_rand(n), problem.c_max(n)
    return beta_between(c_mean, lo, hi)


def beta_between(c_mean: float, c_rand: float, c_max: float) -> float:
    denom = c_max - c_rand
    if not denom > 0:
        raise ValueError(f"degenerate beta denominator: c_max={c_max}, c_rand={c_rand}")
    return (c_mean - c_rand) / denom


@dataclass(frozen=True)
class BetaPoint:
    n: int
    c_mean: float
    beta: float
    n_instances: int
    beta_exact: float | None = None
    mean_wall_ms: float | None = None

    def __post_init__(self):
        if self.n_instances < 1:
            raise ValueError("a beta point needs at least one instance")


@dataclass(frozen=True)
class QScoreResult:
    q_score: int
    beta_star: float
    series: tuple[BetaPoint, ...]
    censored: bool
    stop_reason: str | None = field(default=None, compare=False)

    @property
    def label(self) -> str:
        return f">={self.q_score}" if self.censored else str(self.q_score)


def q_score(series: Sequence[BetaPoint], beta_star: float = BETA_STAR, use_exact: bool = False) -> QScoreResult:
    """Largest n whose beta strictly exceeds ``beta_star`` (0 if none).

    ``censored`` is set when the last point of the series still exceeds the
    threshold, i.e. the scan ended for some other reason and the true score
    is at least the reported one.
    """
    if not series:
        raise ValueError("empty beta series")
    ns = [p.n for p in series]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"series must be strictly increasing in n, got {ns}")

    def value(p: BetaPoint) -> float:
        if use_exact:
            if p.beta_exact is None:
                raise ValueError(f"no exact beta at n={p.n}")
            return p.beta_exact
        return p.beta

    passing = [p.n for p in series if value(p) > beta_star]
    score = max(passing) if passing else 0
    censored = value(series[-1]) > beta_star
    return QScoreResult(score, beta_star, tuple(series), censored)


def with_stop_reason(result: QScoreResult, reason: str) -> QScoreResult:
    return replace(result, stop_reason=reason)
