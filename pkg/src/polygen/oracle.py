"""Oracle-guided synthesis loops and the stand-in equivalence checker.

Two oracle models are provided: a counterexample-producing verifier driving
the classic synthesize/verify loop, and a random-example generator that adds
one fresh uniform example per failed attempt.  Equivalence checking is
bounded-exhaustive over a small grid plus randomized probing: sound for
counterexamples, incomplete for equivalence, which the reports make
explicit through the configured caps.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .grammar import GrammarParams
from .programs import Program, eval_program, node_count, program_arity, program_size
from .tasks import Example, PbeTask

SolverFn = Callable[[PbeTask], Program]


@dataclass(frozen=True)
class OracleConfig:
    input_low: int = -50
    input_high: int = 50
    exhaustive_arity_cap: int = 3
    exhaustive_range: int = 9
    random_trials: int = 100000
    example_cap: int = 10000
    time_cap: float = 120.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.input_low >= self.input_high:
            raise ValueError("input_low must be below input_high")
        if self.example_cap < 1 or self.random_trials < 1:
            raise ValueError("caps must be positive")


@dataclass
class SynthesisReport:
    benchmark: str
    solver: str
    model: str
    seed: int
    examples_used: int
    wall_time: float
    program_size: int
    success: bool

    def to_row(self) -> dict:
        return {
            "row": "run",
            "benchmark": self.benchmark,
            "solver": self.solver,
            "model": self.model,
            "seed": self.seed,
            "examples_used": self.examples_used,
            "wall_time": self.wall_time,
            "program_size": self.program_size,
            "success": self.success,
        }


_GRID_CACHE: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}


def _grid(arity: int, radius: int) -> tuple[tuple[int, ...], ...]:
    """Full grid [-radius, radius]^arity in a fixed pseudorandom order.

    A deterministic shuffle spreads successive counterexamples across the
    grid instead of feeding the learner long runs of adjacent points; the
    order is identical in every run and still covers the whole grid.
    """
    key = (arity, radius)
    cached = _GRID_CACHE.get(key)
    if cached is None:
        points = list(itertools.product(range(-radius, radius + 1), repeat=arity))
        random.Random(0x5EED).shuffle(points)
        cached = tuple(points)
        _GRID_CACHE[key] = cached
    return cached


def verify_equiv(
    candidate: Program,
    truth: Program,
    cfg: OracleConfig | None = None,
    arity: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Optional[tuple[int, ...]]:
    """Input where the programs differ, or None when none was found.

    Checks random_trials uniform samples over the input box, then (for
    arities up to the exhaustive cap) the whole grid
    [-exhaustive_range, exhaustive_range]^n.  Spread-out random probes come
    first because they surface disagreements over coincidence-free inputs;
    the grid pass still guarantees every boundary point inside the grid is
    examined.  None means "no counterexample found", not proved
    equivalence.
    """
    cfg = cfg or OracleConfig()
    if arity is None:
        arity = max(program_arity(candidate), program_arity(truth), 1)
    rng = rng or random.Random(cfg.rng_seed)
    for _ in range(cfg.random_trials):
        point = tuple(
            rng.randint(cfg.input_low, cfg.input_high) for _ in range(arity)
        )
        if eval_program(candidate, point) != eval_program(truth, point):
            return point
    if arity <= cfg.exhaustive_arity_cap:
        for point in _grid(arity, cfg.exhaustive_range):
            if eval_program(candidate, point) != eval_program(truth, point):
                return point
    return None


def _report(
    benchmark: str,
    solver_id: str,
    model: str,
    seed: int,
    examples: int,
    wall: float,
    program: Optional[Program],
    g: GrammarParams,
    success: bool,
) -> SynthesisReport:
    size = program_size(program, g) if program is not None and success else 0
    return SynthesisReport(
        benchmark=benchmark,
        solver=solver_id,
        model=model,
        seed=seed,
        examples_used=examples,
        wall_time=wall,
        program_size=size,
        success=success,
    )


def cegis_loop(
    solver: SolverFn,
    truth: Program,
    g: GrammarParams,
    cfg: OracleConfig | None = None,
    benchmark: str = "",
    solver_id: str = "",
    seed: int = 0,
) -> SynthesisReport:
    """Counterexample-guided loop: synthesize, verify, refute, repeat.

    Starts from an empty example set (the first candidate is whatever the
    solver returns for an empty task).  Each counterexample is completed
    into an example via the ground truth and must genuinely refute the
    candidate that produced it.  Examples-used equals the number of loop
    turns that found a counterexample.
    """
    cfg = cfg or OracleConfig()
    rng = random.Random(cfg.rng_seed)
    examples: list[Example] = []
    start = time.perf_counter()
    while True:
        elapsed = time.perf_counter() - start
        if elapsed > cfg.time_cap or len(examples) > cfg.example_cap:
            return _report(
                benchmark, solver_id, "cegis", seed,
                len(examples), elapsed, None, g, False,
            )
        candidate = solver(PbeTask(examples, g))
        cex = verify_equiv(candidate, truth, cfg, g.num_vars, rng)
        if cex is None:
            return _report(
                benchmark, solver_id, "cegis", seed,
                len(examples), time.perf_counter() - start, candidate, g, True,
            )
        expected = eval_program(truth, cex)
        if eval_program(candidate, cex) == expected:
            raise AssertionError(f"counterexample {cex} does not refute candidate")
        examples.append(Example(cex, expected))


def random_loop(
    solver: SolverFn,
    truth: Program,
    g: GrammarParams,
    cfg: OracleConfig | None = None,
    benchmark: str = "",
    solver_id: str = "",
    seed: int = 0,
) -> SynthesisReport:
    """Random-example loop: one fresh uniform example per failed attempt.

    The verifier only decides pass/fail; new examples are independent
    uniform draws over the input box (duplicate inputs are redrawn, which
    keeps outputs consistent automatically).  Reported time covers the
    final synthesis call only.
    """
    cfg = cfg or OracleConfig()
    rng = random.Random(cfg.rng_seed)
    examples: list[Example] = []
    seen: set[tuple[int, ...]] = set()
    start = time.perf_counter()
    last_synth = 0.0
    while True:
        elapsed = time.perf_counter() - start
        if elapsed > cfg.time_cap or len(examples) > cfg.example_cap:
            return _report(
                benchmark, solver_id, "random", seed,
                len(examples), last_synth, None, g, False,
            )
        t0 = time.perf_counter()
        candidate = solver(PbeTask(examples, g))
        last_synth = time.perf_counter() - t0
        cex = verify_equiv(candidate, truth, cfg, g.num_vars, rng)
        if cex is None:
            return _report(
                benchmark, solver_id, "random", seed,
                len(examples), last_synth, candidate, g, True,
            )
        space = (cfg.input_high - cfg.input_low + 1) ** g.num_vars
        while True:
            if len(seen) >= space:
                raise RuntimeError("input space exhausted without convergence")
            point = tuple(
                rng.randint(cfg.input_low, cfg.input_high)
                for _ in range(g.num_vars)
            )
            if point not in seen:
                seen.add(point)
                break
        examples.append(Example(point, eval_program(truth, point)))
