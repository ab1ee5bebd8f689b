"""Command-line front end.

Machine output (result paths, the Q-score line, CSV when no ``--out`` is
given) goes to stdout; progress and tables go to stderr. Exit codes: 0 on
success, 1 on usage errors, 2 on runtime failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from .framework import BETA_STAR, get_problem
from .graph import dump_graph, generate_er
from .harness import (PRESETS, ScanPlan, SolverConfig, SolverKind, aggregate, default_workers, format_q_score,
                      group_records, load_records, parse_param, scan, score_records, write_summary_csv)
from .selftest import run_selftest

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2
SLOW_MS = 60_000.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _err(*args):
    print(*args, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qscore", description="Q-score Max-Clique / Max-Cut benchmarking")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write one G(n, p) instance as an edge list")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="run a beta-vs-N scan and report the Q-score")
    r.add_argument("--problem", choices=["max-clique", "max-cut"], default="max-clique")
    r.add_argument("--solver", required=True, choices=[k.value for k in SolverKind])
    r.add_argument("--out", required=True, help="JSONL records; the summary CSV is written next to it")
    r.add_argument("--preset", choices=sorted(PRESETS))
    r.add_argument("--n-start", type=int)
    r.add_argument("--n-step", type=int)
    r.add_argument("--n-max", type=int)
    r.add_argument("--instances", type=int, default=100)
    limit = r.add_mutually_exclusive_group()
    limit.add_argument("--time-limit-s", type=float, default=60.0)
    limit.add_argument("--no-time-limit", action="store_true")
    r.add_argument("--stop-avg-time-s", type=float)
    r.add_argument("--beta-star", type=float, default=BETA_STAR)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--workers", type=int, default=1, help=f"parallel worker processes (machine has {default_workers()})")
    r.add_argument("--exact-beta", action="store_true", help="also compute beta against exact optima")
    r.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="solver parameter, repeatable")

    s = sub.add_parser("score", help="recompute the Q-score from a JSONL file")
    s.add_argument("input")
    s.add_argument("--beta-star", type=float, default=BETA_STAR)

    rep = sub.add_parser("report", help="merge JSONL files into a beta-vs-N table")
    rep.add_argument("inputs", nargs="+")
    rep.add_argument("--out", help="CSV path (default: stdout)")
    rep.add_argument("--times", action="store_true", help="add mean wall time per N")
    rep.add_argument("--force", action="store_true", help="allow mixing problems")

    sub.add_parser("selftest", help="run the fast invariant checks")
    return p


def cmd_gen(args) -> int:
    g = generate_er(args.n, args.p, args.seed)
    dump_graph(g, args.out)
    print(args.out)
    return EXIT_OK


def _plan_and_config(args) -> tuple[ScanPlan, SolverConfig]:
    preset = dict(PRESETS.get(args.preset, {}))
    n_start = args.n_start if args.n_start is not None else preset.get("n_start", 5)
    n_step = args.n_step if args.n_step is not None else preset.get("n_step", 5)
    stop = args.stop_avg_time_s * 1e3 if args.stop_avg_time_s is not None else preset.get("stop_avg_time_ms")
    try:
        params = dict(parse_param(t) for t in args.param)
        plan = ScanPlan(problem=args.problem, n_start=n_start, n_step=n_step, n_max=args.n_max,
                        instances_per_n=args.instances, beta_star=args.beta_star, stop_avg_time_ms=stop,
                        attach_exact_beta=args.exact_beta)
        cfg = SolverConfig(args.solver, params, None if args.no_time_limit else args.time_limit_s * 1e3, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return plan, cfg


def cmd_run(args) -> int:
    plan, cfg = _plan_and_config(args)
    out = Path(args.out)
    summary = out.with_suffix(".csv")
    result = scan(plan, cfg, out, workers=max(1, args.workers))
    write_summary_csv(result.series, summary)
    _err(_table({(plan.problem, cfg.solver.value): result.series}, times=True))
    _err(f"stopped by: {result.stop_reason}")
    print(out)
    print(summary)
    print(format_q_score(plan.problem, cfg.solver.value, result))
    return EXIT_OK


def cmd_score(args) -> int:
    records = load_records(args.input)
    if not records:
        raise RuntimeError(f"{args.input}: no records")
    result = score_records(records, args.beta_star)
    r = records[0]
    print(format_q_score(r.problem, r.solver, result))
    return EXIT_OK


def _slow(records) -> bool:
    return any(r.wall_ms > SLOW_MS for r in records)


def _table(series_by_key, times=False, slow=()) -> str:
    ns = sorted({p.n for s in series_by_key.values() for p in s})
    keys = list(series_by_key)
    cols = []
    for k in keys:
        name = k[1] + ("*" if k in slow else "")
        cols.append(f"beta[{name}]")
        if times:
            cols.append(f"ms[{name}]")
    lines = ["n".rjust(6) + "".join(c.rjust(14) for c in cols)]
    for n in ns:
        row = str(n).rjust(6)
        for k in keys:
            pt = next((p for p in series_by_key[k] if p.n == n), None)
            row += (f"{pt.beta:14.4f}" if pt else " " * 14)
            if times:
                row += (f"{pt.mean_wall_ms:14.1f}" if pt else " " * 14)
        lines.append(row)
    return "\n".join(lines)


def cmd_report(args) -> int:
    groups = {}
    for path in args.inputs:
        if not Path(path).exists():
            raise RuntimeError(f"{path}: no such file")
        groups.update(group_records(load_records(path)))
    if not groups:
        raise RuntimeError("no records in inputs")
    problems = {k[0] for k in groups}
    if len(problems) > 1 and not args.force:
        raise RuntimeError(f"inputs mix problems {sorted(problems)}; pass --force to merge anyway")
    series = {k: [aggregate(rs) for rs in by_n.values()] for k, by_n in groups.items()}
    slow = {k for k, by_n in groups.items() if _slow(r for rs in by_n.values() for r in rs)}
    ns = sorted({p.n for s in series.values() for p in s})
    header = ["n"]
    for k in series:
        label = k[1] if len(problems) == 1 else f"{k[0]}:{k[1]}"
        header.append(f"beta_{label}")
        if args.times:
            header.append(f"mean_wall_ms_{label}")
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for n in ns:
        row = [n]
        for k, pts in series.items():
            pt = next((p for p in pts if p.n == n), None)
            row.append("" if pt is None else repr(pt.beta))
            if args.times:
                row.append("" if pt is None else repr(pt.mean_wall_ms))
        w.writerow(row)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        print(args.out)
    else:
        sys.stdout.write(buf.getvalue())
    _err(_table(series, times=args.times, slow=slow))
    if slow:
        _err("* some instances exceeded 60 s")
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if run_selftest(report=_err) else EXIT_RUNTIME


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "score": cmd_score, "report": cmd_report, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _err(f"qscore: error: {exc}")
        return EXIT_USAGE
    except (OSError, ValueError, RuntimeError) as exc:
        _err(f"qscore: {exc}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
