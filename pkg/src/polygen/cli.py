"""Command-line interface.

Verbs: ``solve`` a task file, run one ``cegis`` or ``random`` oracle loop on
a benchmark file, or run the full ``matrix`` over a benchmark directory.
Exit codes: 0 on success, 2 when synthesis fails, 1 on usage or parse
errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bench import (
    MODEL_IDS,
    SOLVER_IDS,
    make_solver,
    parse_benchmark,
    rows_to_csv,
    rows_to_json,
    run_matrix,
    run_one,
)
from .grammar import GrammarParams
from .io import ParseError, parse_task, serialize_program
from .oracle import OracleConfig, cegis_loop, random_loop
from .term_solver import SynthesisFailure
from .unifier import ConsistencyError


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; we use 1
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _default_seed() -> int:
    raw = os.environ.get("POLYGEN_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", choices=SOLVER_IDS, default="polygen")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: POLYGEN_SEED env var or 0)")
    p.add_argument("--example-cap", type=int, default=None)
    p.add_argument("--time-cap", type=float, default=None)
    p.add_argument("--report", type=Path, default=None,
                   help="write the JSON report rows to this path")
    p.add_argument("--csv", type=Path, default=None,
                   help="write the CSV report rows to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polygen", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p_solve = sub.add_parser("solve", help="synthesize from a task file")
    p_solve.add_argument("task_file", type=Path)
    _add_common(p_solve)

    for verb in ("cegis", "random"):
        p = sub.add_parser(verb, help=f"run one {verb} oracle loop")
        p.add_argument("bench_file", type=Path)
        _add_common(p)

    p_matrix = sub.add_parser("matrix", help="run the benchmark matrix")
    p_matrix.add_argument("bench_dir", type=Path)
    p_matrix.add_argument("--solvers", default=",".join(SOLVER_IDS),
                          help="comma-separated solver ids (first is the "
                               "aggregate reference)")
    p_matrix.add_argument("--models", default=",".join(MODEL_IDS))
    p_matrix.add_argument("--seeds", type=int, default=5,
                          help="number of seeds, seed..seed+n-1")
    p_matrix.add_argument("--jobs", type=int, default=1)
    _add_common(p_matrix)
    return parser


def _oracle_config(args, seed: int) -> OracleConfig:
    base = OracleConfig()
    return OracleConfig(
        input_low=base.input_low,
        input_high=base.input_high,
        exhaustive_arity_cap=base.exhaustive_arity_cap,
        exhaustive_range=base.exhaustive_range,
        random_trials=base.random_trials,
        example_cap=args.example_cap or base.example_cap,
        time_cap=args.time_cap or base.time_cap,
        rng_seed=seed,
    )


def _write_reports(args, rows) -> None:
    if args.report is not None:
        args.report.write_text(rows_to_json(rows))
    if args.csv is not None:
        args.csv.write_text(rows_to_csv(rows))


def _cmd_solve(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    task = parse_task(args.task_file.read_text())
    solver = make_solver(args.solver, seed)
    try:
        program = solver(task)
    except SynthesisFailure as err:
        sys.stderr.write(
            f"synthesis failed: {err}\n"
            "note: unrealizable-within-caps and truly unrealizable tasks are "
            "reported identically; raise the solver caps to search further.\n"
        )
        return 2
    print(serialize_program(program))
    return 0


def _cmd_loop(args, verb: str) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    benchmark = parse_benchmark(args.bench_file.read_text())
    cfg = _oracle_config(args, seed)
    solver = make_solver(args.solver, seed)
    loop = cegis_loop if verb == "cegis" else random_loop
    try:
        report = loop(
            solver, benchmark.truth, benchmark.grammar, cfg,
            benchmark=benchmark.name, solver_id=args.solver, seed=seed,
        )
    except SynthesisFailure as err:
        sys.stderr.write(f"synthesis failed: {err}\n")
        return 2
    _write_reports(args, [report])
    r = report.to_row()
    print(
        f"{r['benchmark']} {r['solver']} {r['model']} seed={r['seed']} "
        f"examples={r['examples_used']} time={r['wall_time']:.3f}s "
        f"size={r['program_size']} success={r['success']}"
    )
    return 0 if report.success else 2


def _cmd_matrix(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    files = sorted(args.bench_dir.glob("*.bench"))
    if not files:
        sys.stderr.write(f"no .bench files in {args.bench_dir}\n")
        return 1
    benchmarks = [parse_benchmark(f.read_text()) for f in files]
    solvers = [s for s in args.solvers.split(",") if s]
    models = [m for m in args.models.split(",") if m]
    for s in solvers:
        if s not in SOLVER_IDS:
            sys.stderr.write(f"unknown solver {s!r}\n")
            return 1
    for m in models:
        if m not in MODEL_IDS:
            sys.stderr.write(f"unknown model {m!r}\n")
            return 1
    seeds = list(range(seed, seed + args.seeds))
    rows = run_matrix(
        benchmarks,
        solvers=solvers,
        models=models,
        seeds=seeds,
        oracle_cfg=_oracle_config(args, seed),
        jobs=args.jobs,
    )
    _write_reports(args, rows)
    for r in rows:
        d = r.to_row()
        if d["row"] == "run":
            print(
                f"{d['benchmark']:<12} {d['solver']:<9} {d['model']:<7} "
                f"seed={d['seed']} examples={d['examples_used']:<5} "
                f"time={d['wall_time']:.3f}s success={d['success']}"
            )
        else:
            ex = d["example_ratio"]
            tm = d["time_ratio"]
            print(
                f"aggregate    {d['solver']:<9} {d['model']:<7} "
                f"vs {d['reference']}: examples x{ex:.3f} time x{tm:.3f} "
                f"({d['common_runs']} common runs)"
                if ex is not None and tm is not None
                else f"aggregate    {d['solver']:<9} {d['model']:<7} "
                     f"vs {d['reference']}: no common successful runs"
            )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else 1
    try:
        if args.verb == "solve":
            return _cmd_solve(args)
        if args.verb in ("cegis", "random"):
            return _cmd_loop(args, args.verb)
        if args.verb == "matrix":
            return _cmd_matrix(args)
    except (ParseError, FileNotFoundError, ValueError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 1
    except ConsistencyError as err:
        sys.stderr.write(f"internal consistency violation: {err}\n")
        return 2
    return 1


if __name__ == "__main__":
    sys.exit(main())
