"""Benchmark protocol: instance generation, solver dispatch under a
per-instance deadline, fallback accounting, aggregation and N scans.

Every instance of size ``n`` with index ``k`` is ``G(n, 1/2)`` drawn from
``instance_seed(seed_base, n, k)``. The wall clock starts right after the
graph exists, so it covers QUBO construction, solving and decoding.
"""
from __future__ import annotations

import csv
import enum
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .framework import BETA_STAR, BetaPoint, QScoreResult, beta, beta_between, get_problem, q_score, with_stop_reason
from .gbs import GbsConfig, gbs_solve_clique
from .graph import Graph, derive_seed, generate_er
from .qaoa import QaoaConfig, qaoa_solve_clique, qaoa_solve_cut
from .qubo import clique_qubo, cut_qubo, decode_clique, decode_partition
from .runtime import Deadline, UnsupportedSizeError
from .solvers import (SaParams, TabuParams, brute_force_max_cut, exact_max_clique, greedy_clique, greedy_cut,
                      random_growth_clique, random_partition, simulated_annealing, tabu_search)

log = logging.getLogger(__name__)

DEFAULT_TIME_LIMIT_MS = 60_000.0
RECORD_FIELDS = ("problem", "solver", "n", "instance_index", "instance_seed", "objective", "valid",
                 "wall_ms", "timed_out", "fell_back", "solution")
SUMMARY_FIELDS = ("n", "c_mean", "beta", "beta_exact", "n_instances", "mean_wall_ms")
PRESETS = {
    "annealing": {"n_start": 5, "n_step": 5},
    "classical": {"n_start": 100, "n_step": 100, "stop_avg_time_ms": 100_000.0},
}


class SolverKind(str, enum.Enum):
    RANDOM_GROWTH = "random"
    GREEDY = "greedy"
    EXACT = "exact"
    SIM_ANNEAL = "sa"
    TABU = "tabu"
    QAOA = "qaoa"
    GBS = "gbs"


_PARAM_TYPES = {
    SolverKind.SIM_ANNEAL: SaParams,
    SolverKind.TABU: TabuParams,
    SolverKind.QAOA: QaoaConfig,
    SolverKind.GBS: GbsConfig,
}
_QUBO_EXTRA = {"penalty"}


@dataclass(frozen=True)
class SolverConfig:
    solver: SolverKind
    params: dict = field(default_factory=dict)
    time_limit_ms: float | None = DEFAULT_TIME_LIMIT_MS
    seed_base: int = 0

    def __post_init__(self):
        object.__setattr__(self, "solver", SolverKind(self.solver))
        if self.time_limit_ms is not None and not self.time_limit_ms > 0:
            raise ValueError("time_limit_ms must be positive")
        # fail early on unknown or ill-typed parameters
        self.solver_params(0)

    def solver_params(self, seed: int):
        kind = _PARAM_TYPES.get(self.solver)
        params = {k: v for k, v in self.params.items() if k not in _QUBO_EXTRA}
        if kind is None:
            if params:
                raise ValueError(f"solver {self.solver.value!r} takes no parameters, got {sorted(params)}")
            return None
        try:
            return kind(**{**params, "seed": seed})
        except TypeError as exc:
            raise ValueError(f"invalid parameters for {self.solver.value!r}: {exc}") from None

    @property
    def penalty(self) -> float:
        return float(self.params.get("penalty", 2.0))


@dataclass(frozen=True)
class ScanPlan:
    problem: str = "max-clique"
    n_start: int = 5
    n_step: int = 5
    n_max: int | None = None
    instances_per_n: int = 100
    beta_star: float = BETA_STAR
    stop_avg_time_ms: float | None = None
    attach_exact_beta: bool = False
    exact_cap: int = 400
    exact_budget_ms: float | None = 600_000.0
    score_on_exact: bool = False

    def __post_init__(self):
        get_problem(self.problem)
        if self.n_start < 1 or self.n_step < 1 or self.instances_per_n < 1:
            raise ValueError("n_start, n_step and instances_per_n must be positive")
        if self.n_start < get_problem(self.problem).n_min:
            raise ValueError(f"n_start must be >= {get_problem(self.problem).n_min} for {self.problem}")
        if self.n_max is not None and self.n_max < self.n_start:
            raise ValueError("n_max must be >= n_start")


@dataclass(frozen=True)
class RunRecord:
    problem: str
    solver: str
    n: int
    instance_index: int
    instance_seed: int
    objective: float
    valid: bool
    wall_ms: float
    timed_out: bool
    fell_back: bool
    solution: tuple[int, ...]

    def to_json(self) -> str:
        d = asdict(self)
        d["solution"] = list(self.solution)
        return json.dumps({k: d[k] for k in RECORD_FIELDS})

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        d = json.loads(line)
        if not isinstance(d, dict):
            raise ValueError("record is not a JSON object")
        missing = [k for k in RECORD_FIELDS if k not in d]
        if missing:
            raise ValueError(f"record lacks fields {missing}")
        return cls(
            problem=str(d["problem"]), solver=str(d["solver"]), n=int(d["n"]),
            instance_index=int(d["instance_index"]), instance_seed=int(d["instance_seed"]),
            objective=float(d["objective"]), valid=bool(d["valid"]), wall_ms=float(d["wall_ms"]),
            timed_out=bool(d["timed_out"]), fell_back=bool(d["fell_back"]),
            solution=tuple(int(v) for v in d["solution"]),
        )


def instance_seed(seed_base: int, n: int, index: int) -> int:
    return derive_seed(seed_base, n, index)


def instance_graph(seed_base: int, n: int, index: int) -> Graph:
    return generate_er(n, 0.5, instance_seed(seed_base, n, index))


def solve(problem: str, g: Graph, cfg: SolverConfig, seed: int, deadline: Deadline) -> tuple[int, ...]:
    """Run one solver on one graph; returns a clique or one side of a cut."""
    prob = get_problem(problem).name.value
    kind = cfg.solver
    params = cfg.solver_params(seed)
    clique = prob == "max-clique"
    if kind is SolverKind.RANDOM_GROWTH:
        return random_growth_clique(g, seed) if clique else random_partition(g, seed)
    if kind is SolverKind.GREEDY:
        return greedy_clique(g) if clique else greedy_cut(g)
    if kind is SolverKind.EXACT:
        return exact_max_clique(g, deadline)[0] if clique else brute_force_max_cut(g)
    if kind in (SolverKind.SIM_ANNEAL, SolverKind.TABU):
        q = clique_qubo(g, cfg.penalty) if clique else cut_qubo(g)
        run = simulated_annealing if kind is SolverKind.SIM_ANNEAL else tabu_search
        x = run(q, params, deadline)
        return decode_clique(g, x, repair=True) if clique else decode_partition(x)
    if kind is SolverKind.QAOA:
        return (qaoa_solve_clique if clique else qaoa_solve_cut)(g, params, deadline)
    if kind is SolverKind.GBS:
        if not clique:
            raise UnsupportedSizeError("the GBS sampler only solves Max-Clique")
        return gbs_solve_clique(g, params, deadline)
    raise ValueError(f"unknown solver {kind}")


def run_instance(plan: ScanPlan, cfg: SolverConfig, n: int, instance_index: int) -> RunRecord:
    problem = get_problem(plan.problem)
    seed = instance_seed(cfg.seed_base, n, instance_index)
    g = generate_er(n, 0.5, seed)
    deadline = Deadline(cfg.time_limit_ms)
    solution = None
    try:
        solution = solve(plan.problem, g, cfg, derive_seed(seed, 1), deadline)
    except UnsupportedSizeError as exc:
        log.debug("n=%d #%d: %s", n, instance_index, exc)
    wall_ms = deadline.elapsed_ms()
    valid = solution is not None and problem.is_valid(g, solution)
    if valid and problem.name.value == "max-clique" and n > 0 and not solution:
        # an empty clique is no answer at all
        valid = False
    timed_out = cfg.time_limit_ms is not None and wall_ms > cfg.time_limit_ms
    if valid:
        objective: float = problem.evaluate(g, solution)
    else:
        objective = problem.fallback_objective(n)
    return RunRecord(problem.name.value, cfg.solver.value, n, instance_index, seed, objective, valid,
                     round(wall_ms, 3), timed_out, not valid, tuple(solution or ()))


def aggregate(records: Sequence[RunRecord], exact_mean: float | None = None) -> BetaPoint:
    """Mean objective of one (problem, n, solver) group and its beta.

    Fallback records already carry the random-solution cost as objective.
    ``exact_mean`` (mean optimum over the same instances) adds beta_exact.
    """
    if not records:
        raise ValueError("cannot aggregate an empty record set")
    keys = {(r.problem, r.n, r.solver) for r in records}
    if len(keys) != 1:
        raise ValueError(f"records mix groups: {sorted(keys)}")
    problem, n, _ = keys.pop()
    c_mean = math.fsum(r.objective for r in records) / len(records)
    prob = get_problem(problem)
    b_exact = None
    if exact_mean is not None and exact_mean > prob.c_rand(n):
        b_exact = beta_between(c_mean, prob.c_rand(n), exact_mean)
    return BetaPoint(n, c_mean, beta(prob, n, c_mean), len(records), b_exact,
                     math.fsum(r.wall_ms for r in records) / len(records))


def exact_objective(problem: str, g: Graph, budget_ms: float | None) -> float | None:
    prob = get_problem(problem)
    if prob.name.value == "max-clique":
        return float(len(exact_max_clique(g, Deadline(budget_ms))[0]))
    try:
        return float(prob.evaluate(g, brute_force_max_cut(g)))
    except UnsupportedSizeError:
        return None


def exact_mean(plan: ScanPlan, seed_base: int, n: int) -> float | None:
    if n > plan.exact_cap:
        return None
    vals = [exact_objective(plan.problem, instance_graph(seed_base, n, k), plan.exact_budget_ms)
            for k in range(plan.instances_per_n)]
    if any(v is None for v in vals):
        return None
    return math.fsum(vals) / len(vals)


def _run_task(args):
    return run_instance(*args)


def default_workers() -> int:
    return os.cpu_count() or 1


def scan(plan: ScanPlan, cfg: SolverConfig, out_path: str | Path | None = None, workers: int = 1,
         records: list | None = None) -> QScoreResult:
    """Increase n until beta drops to the threshold, the mean wall time per
    instance exceeds ``plan.stop_avg_time_ms`` or ``n_max`` is reached.

    Records are appended to ``out_path`` (JSONL) in (n, index) order as soon
    as they are available; the file is flushed after every line.
    """
    sink = open(out_path, "w", encoding="utf-8") if out_path is not None else None
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    series: list[BetaPoint] = []
    seeds: set[int] = set()
    reason = "n_max"
    try:
        n = plan.n_start
        while True:
            tasks = [(plan, cfg, n, k) for k in range(plan.instances_per_n)]
            for _, _, nn, k in tasks:
                s = instance_seed(cfg.seed_base, nn, k)
                if s in seeds:
                    raise RuntimeError(f"instance seed collision at n={nn}, index={k}")
                seeds.add(s)
            results = pool.map(_run_task, tasks) if pool else map(_run_task, tasks)
            group = []
            for rec in results:
                group.append(rec)
                if sink is not None:
                    sink.write(rec.to_json() + "\n")
                    sink.flush()
            if records is not None:
                records.extend(group)
            ex = exact_mean(plan, cfg.seed_base, n) if plan.attach_exact_beta else None
            point = aggregate(group, ex)
            series.append(point)
            log.info("n=%d c_mean=%.4f beta=%.4f%s mean_wall=%.1fms", n, point.c_mean, point.beta,
                     "" if point.beta_exact is None else f" beta_exact={point.beta_exact:.4f}", point.mean_wall_ms)
            b = point.beta_exact if plan.score_on_exact and point.beta_exact is not None else point.beta
            if b <= plan.beta_star:
                reason = "beta"
                break
            if plan.stop_avg_time_ms is not None and point.mean_wall_ms > plan.stop_avg_time_ms:
                reason = "time"
                break
            if plan.n_max is not None and n + plan.n_step > plan.n_max:
                reason = "n_max"
                break
            n += plan.n_step
    finally:
        if pool is not None:
            pool.shutdown()
        if sink is not None:
            sink.close()
    result = q_score(series, plan.beta_star, use_exact=plan.score_on_exact)
    return with_stop_reason(result, reason)


def load_records(path: str | Path) -> list[RunRecord]:
    """Parse a JSONL results file; errors name the offending line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(RunRecord.from_json(line))
            except (ValueError, TypeError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed record: {exc}") from None
    return out


def group_records(records: Iterable[RunRecord]) -> dict[tuple[str, str], dict[int, list[RunRecord]]]:
    """``{(problem, solver): {n: [records]}}`` with n ascending."""
    groups: dict[tuple[str, str], dict[int, list[RunRecord]]] = {}
    for r in records:
        groups.setdefault((r.problem, r.solver), {}).setdefault(r.n, []).append(r)
    return {k: dict(sorted(v.items())) for k, v in groups.items()}


def score_records(records: Sequence[RunRecord], beta_star: float = BETA_STAR) -> QScoreResult:
    groups = group_records(records)
    if len(groups) != 1:
        raise ValueError(f"expected one (problem, solver) group, found {sorted(groups)}")
    by_n = next(iter(groups.values()))
    return q_score([aggregate(rs) for rs in by_n.values()], beta_star)


def write_summary_csv(series: Sequence[BetaPoint], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_FIELDS)
        for p in series:
            w.writerow([p.n, repr(p.c_mean), repr(p.beta), "" if p.beta_exact is None else repr(p.beta_exact),
                        p.n_instances, "" if p.mean_wall_ms is None else repr(p.mean_wall_ms)])


def read_summary_csv(path: str | Path) -> list[BetaPoint]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [BetaPoint(int(r["n"]), float(r["c_mean"]), float(r["beta"]), int(r["n_instances"]),
                      float(r["beta_exact"]) if r["beta_exact"] else None,
                      float(r["mean_wall_ms"]) if r["mean_wall_ms"] else None) for r in rows]


def format_q_score(problem: str, solver: str, result: QScoreResult) -> str:
    line = f"Q-score {problem} ({solver}): {result.q_score}"
    if result.censored:
        line += f" (censored: >={result.q_score})"
    return line


def parse_param(text: str) -> tuple[str, Any]:
    """``key=value`` with JSON-ish values (numbers, true/false, null)."""
    if "=" not in text:
        raise ValueError(f"solver parameter must look like key=value, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    if isinstance(value, list):
        value = tuple(value)
    return key.strip().replace("-", "_"), value
