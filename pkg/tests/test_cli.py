import csv
import json

import pytest

from qscore.cli import main
from qscore.framework import BetaPoint
from qscore.graph import generate_er, load_graph
from qscore.harness import RunRecord
from qscore.selftest import run_selftest


def _write_series(path, solver, betas_by_n, problem="max-clique"):
    """JSONL whose per-n mean objective hits the requested beta exactly."""
    from qscore.framework import clique_c_max, clique_c_rand

    with open(path, "w") as fh:
        for n, b in betas_by_n.items():
            obj = clique_c_rand() + b * (clique_c_max(n) - clique_c_rand())
            rec = RunRecord(problem, solver, n, 0, n, obj, False, 1.0, False, True, ())
            fh.write(rec.to_json() + "\n")


def test_gen(tmp_path, capsys):
    assert main(["gen", "--n", "12", "--seed", "4", "--out", str(tmp_path / "g.txt")]) == 0
    assert load_graph(tmp_path / "g.txt") == generate_er(12, 0.5, 4)


def test_run_random_baseline(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    code = main(["run", "--problem", "max-clique", "--solver", "random", "--n-start", "20", "--n-step", "20",
                 "--instances", "100", "--seed", "1", "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out.splitlines()
    assert stdout[-1] == "Q-score max-clique (random): 0"
    assert (tmp_path / "r.csv").exists()


def test_run_without_solver_is_usage_error(capsys):
    assert main(["run", "--problem", "max-clique", "--out", "x.jsonl"]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    assert main(["score", "f.jsonl", "--bogus"]) == 1


def test_bad_solver_param_is_usage_error(tmp_path, capsys):
    assert main(["run", "--solver", "sa", "--param", "nonsense=3", "--out", str(tmp_path / "o.jsonl")]) == 1


def test_score_matches_run(tmp_path, capsys):
    out = tmp_path / "e.jsonl"
    assert main(["run", "--solver", "exact", "--n-start", "5", "--n-step", "5", "--n-max", "15",
                 "--instances", "5", "--out", str(out)]) == 0
    run_line = capsys.readouterr().out.splitlines()[-1]
    assert run_line == "Q-score max-clique (exact): 15 (censored: >=15)"
    assert main(["score", str(out)]) == 0
    assert capsys.readouterr().out.strip() == run_line


def test_rescore_with_other_threshold(tmp_path, capsys):
    path = tmp_path / "s.jsonl"
    _write_series(path, "sa", {5: 1.0, 10: 0.6, 15: 0.3})
    assert main(["score", str(path), "--beta-star", "0.5"]) == 0
    assert capsys.readouterr().out.strip() == "Q-score max-clique (sa): 10"


def test_score_empty_file(tmp_path):
    (tmp_path / "empty.jsonl").write_text("")
    assert main(["score", str(tmp_path / "empty.jsonl")]) == 2


def test_score_malformed_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    _write_series(path, "sa", {5: 1.0})
    with open(path, "a") as fh:
        fh.write('{"problem": "max-clique"}\n')
    assert main(["score", str(path)]) == 2
    assert ":2:" in capsys.readouterr().err


def test_report_two_solvers(tmp_path, capsys):
    _write_series(tmp_path / "a.jsonl", "sa", {5: 1.0, 10: 0.5})
    _write_series(tmp_path / "b.jsonl", "tabu", {5: 0.9, 10: 0.4, 15: 0.1})
    assert main(["report", str(tmp_path / "a.jsonl"), str(tmp_path / "b.jsonl"), "--times",
                 "--out", str(tmp_path / "m.csv")]) == 0
    rows = list(csv.DictReader(open(tmp_path / "m.csv")))
    assert list(rows[0]) == ["n", "beta_sa", "mean_wall_ms_sa", "beta_tabu", "mean_wall_ms_tabu"]
    assert [r["n"] for r in rows] == ["5", "10", "15"]
    assert float(rows[1]["beta_sa"]) == pytest.approx(0.5)
    assert rows[2]["beta_sa"] == ""


def test_report_missing_file(tmp_path):
    assert main(["report", str(tmp_path / "nope.jsonl")]) == 2


def test_report_refuses_mixed_problems(tmp_path):
    _write_series(tmp_path / "a.jsonl", "sa", {5: 1.0})
    with open(tmp_path / "b.jsonl", "w") as fh:
        fh.write(RunRecord("max-cut", "sa", 6, 0, 1, 9.0, True, 1.0, False, False, (0, 1, 2)).to_json() + "\n")
    args = ["report", str(tmp_path / "a.jsonl"), str(tmp_path / "b.jsonl")]
    assert main(args) == 2
    assert main(args + ["--force"]) == 0


def test_report_marks_slow_solver(tmp_path, capsys):
    with open(tmp_path / "s.jsonl", "w") as fh:
        fh.write(RunRecord("max-clique", "qaoa", 16, 0, 1, 4.0, True, 90_000.0, False, False, (0, 1, 2, 3)).to_json())
    assert main(["report", str(tmp_path / "s.jsonl")]) == 0
    assert "beta[qaoa*]" in capsys.readouterr().err


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    err = capsys.readouterr().err
    assert "FAIL" not in err and err.count("PASS") >= 5


def test_selftest_detects_perturbed_constant():
    lines = []
    assert not run_selftest(expected_c_rand=1.65, report=lines.append)
    assert lines[0].startswith("FAIL")


def test_max_cut_run(tmp_path, capsys):
    out = tmp_path / "c.jsonl"
    assert main(["run", "--problem", "max-cut", "--solver", "exact", "--n-start", "4", "--n-step", "4",
                 "--n-max", "12", "--instances", "3", "--out", str(out)]) == 0
    recs = [json.loads(ln) for ln in out.read_text().splitlines()]
    assert {r["problem"] for r in recs} == {"max-cut"}
