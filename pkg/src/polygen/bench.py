"""Benchmark files, run matrices, and machine-readable reports.

A benchmark bundles a grammar, a ground-truth program, and optionally a
fixed example set.  The matrix runner executes every (benchmark, solver,
oracle model, seed) combination, records one flat report row per run, and
appends aggregate rows with geometric-mean ratios against the reference
solver (the first one listed).
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .condition_solver import CondSolverConfig
from .domain_solver import DomainSolverConfig
from .eusolver import eusolver_solve
from .grammar import GrammarParams
from .io import (
    ParseError,
    parse_example_line,
    parse_grammar_line,
    parse_program,
    serialize_program,
    serialize_task,
    _split_content_lines,
)
from .oracle import OracleConfig, SynthesisReport, cegis_loop, random_loop
from .programs import Program, program_arity
from .tasks import Example, PbeTask
from .term_solver import SynthesisFailure, TermSolverConfig
from .unifier import polygen_solve

SOLVER_IDS = ("polygen", "eusolver")
MODEL_IDS = ("cegis", "random")


@dataclass(frozen=True)
class Benchmark:
    name: str
    grammar: GrammarParams
    truth: Program
    fixed_task: Optional[PbeTask] = None

    def __post_init__(self) -> None:
        if program_arity(self.truth) > self.grammar.num_vars:
            raise ValueError("ground truth uses variables beyond the grammar arity")


def parse_benchmark(text: str) -> Benchmark:
    """Benchmark file: `name <id>`, a grammar line, `truth <s-expression>`,
    and optional `in ... out ...` example lines."""
    rows = _split_content_lines(text)
    name = None
    grammar = None
    truth = None
    examples: list[Example] = []
    for lineno, parts in rows:
        if parts[0] == "name":
            if len(parts) != 2:
                raise ParseError("expected 'name <identifier>'", lineno)
            name = parts[1]
        elif parts[0] == "vars":
            grammar = parse_grammar_line(lineno, parts)
        elif parts[0] == "truth":
            try:
                truth = parse_program(" ".join(parts[1:]))
            except ParseError as err:
                raise ParseError(f"bad truth program: {err}", lineno) from None
        elif parts[0] == "in":
            if grammar is None:
                raise ParseError("examples must follow the grammar line", lineno)
            examples.append(parse_example_line(lineno, parts, grammar.num_vars))
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if name is None or grammar is None or truth is None:
        raise ParseError("benchmark needs name, grammar, and truth lines")
    fixed = PbeTask(examples, grammar) if examples else None
    return Benchmark(name, grammar, truth, fixed)


def serialize_benchmark(b: Benchmark) -> str:
    lines = [f"name {b.name}"]
    g = b.grammar
    lines.append(f"vars {g.num_vars} consts {g.const_min} {g.const_max}")
    lines.append(f"truth {serialize_program(b.truth)}")
    if b.fixed_task is not None:
        task_lines = serialize_task(b.fixed_task).splitlines()[1:]
        lines.extend(task_lines)
    return "\n".join(lines) + "\n"


def make_solver(
    solver_id: str,
    seed: int,
    term_cfg: TermSolverConfig | None = None,
    cond_cfg: CondSolverConfig | None = None,
    domain_cfg: DomainSolverConfig | None = None,
):
    if solver_id == "polygen":
        return lambda task: polygen_solve(
            task, term_cfg, cond_cfg, domain_cfg, seed=seed
        )
    if solver_id == "eusolver":
        return lambda task: eusolver_solve(task, cfg=domain_cfg)
    raise ValueError(f"unknown solver {solver_id!r} (expected one of {SOLVER_IDS})")


@dataclass
class AggregateRow:
    solver: str
    model: str
    reference: str
    common_runs: int
    example_ratio: Optional[float]
    time_ratio: Optional[float]

    def to_row(self) -> dict:
        return {
            "row": "aggregate",
            "solver": self.solver,
            "model": self.model,
            "reference": self.reference,
            "common_runs": self.common_runs,
            "example_ratio": self.example_ratio,
            "time_ratio": self.time_ratio,
        }


def _geomean(values: Sequence[float]) -> Optional[float]:
    vals = [v for v in values if v > 0]
    if not vals:
        return None
    return math.exp(sum(math.log(v) for v in vals) / len(vals))


def aggregate_reports(
    reports: Sequence[SynthesisReport], reference: str
) -> list[AggregateRow]:
    """Geometric-mean example and time ratios versus the reference solver,
    paired over (benchmark, model, seed) runs both solvers completed."""
    by_key = {(r.solver, r.benchmark, r.model, r.seed): r for r in reports}
    solvers = sorted({r.solver for r in reports if r.solver != reference})
    models = sorted({r.model for r in reports})
    rows = []
    for solver in solvers:
        for model in models:
            ex_ratios, time_ratios, common = [], [], 0
            for r in reports:
                if r.solver != reference or r.model != model or not r.success:
                    continue
                other = by_key.get((solver, r.benchmark, model, r.seed))
                if other is None or not other.success:
                    continue
                common += 1
                if r.examples_used > 0 and other.examples_used > 0:
                    ex_ratios.append(other.examples_used / r.examples_used)
                if r.wall_time > 0 and other.wall_time > 0:
                    time_ratios.append(other.wall_time / r.wall_time)
            rows.append(
                AggregateRow(
                    solver=solver,
                    model=model,
                    reference=reference,
                    common_runs=common,
                    example_ratio=_geomean(ex_ratios),
                    time_ratio=_geomean(time_ratios),
                )
            )
    return rows


def run_one(
    benchmark: Benchmark,
    solver_id: str,
    model: str,
    seed: int,
    oracle_cfg: OracleConfig | None = None,
    term_cfg: TermSolverConfig | None = None,
    cond_cfg: CondSolverConfig | None = None,
    domain_cfg: DomainSolverConfig | None = None,
) -> SynthesisReport:
    cfg = oracle_cfg or OracleConfig()
    cfg = OracleConfig(
        input_low=cfg.input_low,
        input_high=cfg.input_high,
        exhaustive_arity_cap=cfg.exhaustive_arity_cap,
        exhaustive_range=cfg.exhaustive_range,
        random_trials=cfg.random_trials,
        example_cap=cfg.example_cap,
        time_cap=cfg.time_cap,
        rng_seed=seed,
    )
    solver = make_solver(solver_id, seed, term_cfg, cond_cfg, domain_cfg)
    loop = cegis_loop if model == "cegis" else random_loop
    if model not in MODEL_IDS:
        raise ValueError(f"unknown oracle model {model!r}")

    def guarded(task):
        return solver(task)

    try:
        return loop(
            guarded, benchmark.truth, benchmark.grammar, cfg,
            benchmark=benchmark.name, solver_id=solver_id, seed=seed,
        )
    except SynthesisFailure:
        return SynthesisReport(
            benchmark=benchmark.name,
            solver=solver_id,
            model=model,
            seed=seed,
            examples_used=0,
            wall_time=0.0,
            program_size=0,
            success=False,
        )


def run_matrix(
    benchmarks: Sequence[Benchmark],
    solvers: Sequence[str] = SOLVER_IDS,
    models: Sequence[str] = MODEL_IDS,
    seeds: Sequence[int] = (0, 1, 2, 3, 4),
    oracle_cfg: OracleConfig | None = None,
    jobs: int = 1,
    term_cfg: TermSolverConfig | None = None,
    cond_cfg: CondSolverConfig | None = None,
    domain_cfg: DomainSolverConfig | None = None,
) -> list:
    """One report per combination plus appended aggregate rows.

    Per-run failures (budget exhaustion, caps) are recorded as unsuccessful
    rows and never abort the matrix.  Rows are merged in a deterministic
    order regardless of worker scheduling.
    """
    combos = [
        (b, solver, model, seed)
        for b in benchmarks
        for solver in solvers
        for model in models
        for seed in seeds
    ]

    def job(combo):
        b, solver, model, seed = combo
        return run_one(
            b, solver, model, seed, oracle_cfg, term_cfg, cond_cfg, domain_cfg
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(job, combos))
    else:
        reports = [job(c) for c in combos]
    reports.sort(key=lambda r: (r.benchmark, r.solver, r.model, r.seed))
    rows: list = list(reports)
    if solvers:
        rows.extend(aggregate_reports(reports, solvers[0]))
    return rows


def rows_to_json(rows: Sequence) -> str:
    return json.dumps([r.to_row() for r in rows], indent=2) + "\n"


def rows_from_json(text: str) -> list[dict]:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(r, dict) for r in data):
        raise ValueError("report JSON must be an array of row objects")
    return data


_CSV_FIELDS = [
    "row", "benchmark", "solver", "model", "seed", "examples_used",
    "wall_time", "program_size", "success", "reference", "common_runs",
    "example_ratio", "time_ratio",
]


def rows_to_csv(rows: Sequence) -> str:
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS)
    writer.writeheader()
    for r in rows:
        writer.writerow(r.to_row())
    return buf.getvalue()
