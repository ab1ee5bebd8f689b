import json

import numpy as np
import pytest

from oracles import max_clique_size
from qscore.framework import MAX_CLIQUE, beta, clique_c_rand
from qscore.harness import (RECORD_FIELDS, RunRecord, ScanPlan, SolverConfig, aggregate, instance_graph,
                            instance_seed, load_records, read_summary_csv, run_instance, scan, score_records, solve,
                            write_summary_csv)
from qscore.runtime import Deadline


def _rec(objective, n=12, fell_back=False, wall=1.0):
    return RunRecord("max-clique", "exact", n, 0, 1, objective, not fell_back, wall, False, fell_back, ())


def test_exact_instance_record():
    rec = run_instance(ScanPlan(), SolverConfig("exact"), 10, 3)
    g = instance_graph(0, 10, 3)
    assert rec.valid and not rec.timed_out and not rec.fell_back
    assert rec.objective == len(rec.solution) == max_clique_size(g.adjacency)
    assert rec.instance_seed == instance_seed(0, 10, 3)


def test_anytime_under_tiny_budget():
    rec = run_instance(ScanPlan(), SolverConfig("sa", time_limit_ms=1), 5000, 0)
    assert not rec.fell_back and rec.valid
    assert rec.objective >= 1


def test_qaoa_over_cap_falls_back():
    rec = run_instance(ScanPlan(), SolverConfig("qaoa"), 30, 0)
    assert rec.fell_back and not rec.valid
    assert rec.objective == clique_c_rand()


def test_gbs_on_max_cut_falls_back():
    rec = run_instance(ScanPlan(problem="max-cut"), SolverConfig("gbs"), 6, 0)
    assert rec.fell_back and rec.objective == 3 * 3 / 2


def test_record_json_fields_exact():
    rec = run_instance(ScanPlan(), SolverConfig("greedy"), 12, 1)
    d = json.loads(rec.to_json())
    assert list(d) == list(RECORD_FIELDS)
    assert RunRecord.from_json(rec.to_json()) == rec


def test_aggregate_identities():
    c = clique_c_rand()
    assert aggregate([_rec(c, fell_back=True)] * 4).beta == 0.0
    p = aggregate([_rec(5.0)] * 3, exact_mean=5.0)
    assert p.beta_exact == 1.0
    mixed = aggregate([_rec(5.0)] * 5 + [_rec(c, fell_back=True)] * 5)
    assert mixed.beta == pytest.approx((beta(MAX_CLIQUE, 12, 5.0) + 0.0) / 2)


def test_fallback_accounting():
    objs = [4.0, 6.0, 5.0]
    k = 7
    recs = [_rec(o) for o in objs] + [_rec(clique_c_rand(), fell_back=True)] * k
    assert aggregate(recs).c_mean == pytest.approx((k * clique_c_rand() + sum(objs)) / (k + len(objs)))


def test_aggregate_rejects_empty_and_mixed():
    with pytest.raises(ValueError):
        aggregate([])
    with pytest.raises(ValueError):
        aggregate([_rec(3.0, n=5), _rec(3.0, n=6)])


def test_wall_clock_covers_qubo_build(monkeypatch):
    import qscore.harness as h

    events = []
    real_deadline, real_qubo = h.Deadline, h.clique_qubo

    class SpyDeadline(real_deadline):
        def __init__(self, *a, **k):
            events.append("clock")
            super().__init__(*a, **k)

        def elapsed_ms(self):
            events.append("stop")
            return super().elapsed_ms()

    def spy_qubo(*a, **k):
        events.append("qubo")
        return real_qubo(*a, **k)

    monkeypatch.setattr(h, "Deadline", SpyDeadline)
    monkeypatch.setattr(h, "clique_qubo", spy_qubo)
    run_instance(ScanPlan(), SolverConfig("sa", {"restarts": 1, "sweeps_hint": 10}), 8, 0)
    assert events.index("clock") < events.index("qubo") < len(events) - 1 - events[::-1].index("stop")


def test_random_scan_scores_zero(tmp_path):
    plan = ScanPlan(n_start=20, n_step=20, instances_per_n=100)
    res = scan(plan, SolverConfig("random", seed_base=1), tmp_path / "r.jsonl")
    assert res.q_score == 0 and len(res.series) == 1 and res.stop_reason == "beta"
    assert abs(res.series[0].beta) < 0.2


def test_exact_scan_is_censored(tmp_path):
    plan = ScanPlan(n_start=5, n_step=5, n_max=30, instances_per_n=10)
    res = scan(plan, SolverConfig("exact"), tmp_path / "e.jsonl")
    assert res.censored and res.q_score == 30 and res.label == ">=30"
    assert [p.n for p in res.series] == [5, 10, 15, 20, 25, 30]
    assert len(load_records(tmp_path / "e.jsonl")) == 60


def test_time_stop_rule(tmp_path):
    plan = ScanPlan(n_start=5, n_step=5, n_max=50, instances_per_n=2, stop_avg_time_ms=1e-6)
    res = scan(plan, SolverConfig("greedy"), tmp_path / "t.jsonl")
    assert res.stop_reason == "time" and res.censored and len(res.series) == 1


def test_exact_beta_attachment(tmp_path):
    plan = ScanPlan(n_start=8, n_step=4, n_max=12, instances_per_n=5, attach_exact_beta=True)
    res = scan(plan, SolverConfig("exact"), tmp_path / "x.jsonl")
    assert all(p.beta_exact == pytest.approx(1.0) for p in res.series)


def test_instance_seeds_unique(tmp_path):
    records = []
    scan(ScanPlan(n_start=5, n_step=1, n_max=15, instances_per_n=30), SolverConfig("greedy"), None, records=records)
    seeds = [r.instance_seed for r in records]
    assert len(seeds) == len(set(seeds)) == 11 * 30


def test_replay_identical_without_deadline(tmp_path):
    plan = ScanPlan(n_start=10, n_step=10, n_max=30, instances_per_n=5)
    cfg = SolverConfig("tabu", time_limit_ms=None, seed_base=3)
    scan(plan, cfg, tmp_path / "a.jsonl")
    scan(plan, cfg, tmp_path / "b.jsonl")

    def strip(p):
        return [{k: v for k, v in json.loads(ln).items() if k != "wall_ms"} for ln in p.read_text().splitlines()]

    assert strip(tmp_path / "a.jsonl") == strip(tmp_path / "b.jsonl")


def test_parallel_matches_sequential(tmp_path):
    plan = ScanPlan(n_start=10, n_step=5, n_max=15, instances_per_n=4)
    cfg = SolverConfig("sa", time_limit_ms=None)
    seq, par = [], []
    scan(plan, cfg, None, workers=1, records=seq)
    scan(plan, cfg, None, workers=2, records=par)
    assert [(r.n, r.instance_index, r.objective, r.solution) for r in seq] == \
        [(r.n, r.instance_index, r.objective, r.solution) for r in par]


def test_persistence_failure_keeps_partial_file(tmp_path, monkeypatch):
    import qscore.harness as h

    out = tmp_path / "p.jsonl"
    real = h.aggregate
    calls = {"n": 0}

    def failing(*a, **k):
        calls["n"] += 1
        if calls["n"] == 2:
            raise OSError("disk full")
        return real(*a, **k)

    monkeypatch.setattr(h, "aggregate", failing)
    with pytest.raises(OSError):
        scan(ScanPlan(n_start=5, n_step=5, n_max=20, instances_per_n=3), SolverConfig("greedy"), out)
    assert len(load_records(out)) == 6


def test_score_records_reproduces_scan(tmp_path):
    plan = ScanPlan(n_start=5, n_step=5, n_max=20, instances_per_n=5)
    res = scan(plan, SolverConfig("greedy"), tmp_path / "g.jsonl")
    again = score_records(load_records(tmp_path / "g.jsonl"), plan.beta_star)
    assert (again.q_score, again.censored) == (res.q_score, res.censored)


def test_summary_csv_round_trip(tmp_path):
    plan = ScanPlan(n_start=5, n_step=5, n_max=15, instances_per_n=5, attach_exact_beta=True)
    res = scan(plan, SolverConfig("greedy"), tmp_path / "s.jsonl")
    write_summary_csv(res.series, tmp_path / "s.csv")
    back = read_summary_csv(tmp_path / "s.csv")
    assert back == list(res.series)
    for p in back:
        assert abs(beta(MAX_CLIQUE, p.n, p.c_mean) - p.beta) <= 1e-9


def test_load_records_reports_line(tmp_path):
    good = run_instance(ScanPlan(), SolverConfig("greedy"), 6, 0).to_json()
    (tmp_path / "bad.jsonl").write_text(good + "\n{not json\n")
    with pytest.raises(ValueError, match=":2:"):
        load_records(tmp_path / "bad.jsonl")


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig("sa", {"bogus": 1})
    with pytest.raises(ValueError):
        SolverConfig("greedy", {"x": 1})
    with pytest.raises(ValueError):
        SolverConfig("sa", time_limit_ms=0)
    with pytest.raises(ValueError):
        ScanPlan(n_start=0)


def test_solve_dispatch_for_cut():
    from qscore.graph import cut_value
    from oracles import max_cut_value

    g = instance_graph(0, 10, 0)
    for kind in ("exact", "sa", "tabu", "qaoa"):
        part = solve("max-cut", g, SolverConfig(kind), 1, Deadline())
        assert cut_value(g, part) == max_cut_value(g.adjacency)
