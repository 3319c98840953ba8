"""Sampling term solver: decompose a PBE task into per-term subtasks.

The solver repeatedly samples small example subsets, asks the domain solver
for a minimal fit, and keeps fits that are small and cover a large enough
share of the remaining examples.  Backtracking assembles at most k kept
fits into a full cover; an outer loop widens the (k, n_t) search range and
the admitted size budget until a cover is found.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .domain_solver import DomainSolverConfig, synth_min_linear
from .expr import LinearExpr
from .grammar import GrammarParams
from .tasks import Example, PbeTask

DomainSolverFn = Callable[[Sequence[Example], GrammarParams], Optional[LinearExpr]]


class SynthesisFailure(RuntimeError):
    """A solver exhausted its budget; carries partial progress for diagnosis."""

    def __init__(self, message: str, best_cover: int = 0, total: int = 0):
        super().__init__(message)
        self.best_cover = best_cover
        self.total = total


@dataclass(frozen=True)
class TermSolverConfig:
    c: float = 2.0
    alpha: float = 1.0
    beta: float = 0.0
    turn_cap: int = 10000
    s_cap: int = 16
    rng_seed: int = 0
    # Restart knob: begin the outer loop at this size budget.  At s_start=1
    # small (k, n_t) cells are permanently visited while the size filter is
    # still too tight for larger target terms, which can let shrapnel covers
    # assembled at large k win the race; restarting higher gives real terms
    # first shot at the small cells.
    s_start: int = 1

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        if not 0 <= self.beta < 1:
            raise ValueError("beta must lie in [0, 1)")
        if self.turn_cap < 1 or self.s_cap < 1:
            raise ValueError("caps must be positive")
        if self.s_start < 1:
            raise ValueError("s_start must be positive")

    def with_restart(self, rng_seed: int, s_start: int) -> "TermSolverConfig":
        return TermSolverConfig(
            c=self.c,
            alpha=self.alpha,
            beta=self.beta,
            turn_cap=self.turn_cap,
            s_cap=self.s_cap,
            rng_seed=rng_seed,
            s_start=min(s_start, self.s_cap),
        )


def default_domain_solver(cfg: DomainSolverConfig | None = None) -> DomainSolverFn:
    dcfg = cfg or DomainSolverConfig()

    def solve(examples: Sequence[Example], g: GrammarParams):
        return synth_min_linear(examples, g, dcfg)

    return solve


def _size_bound(cfg: TermSolverConfig, s: int, nt: int) -> float:
    return cfg.c * (s ** cfg.alpha) * (nt ** cfg.beta)


def get_candidates(
    task: PbeTask,
    live: frozenset[int],
    k: int,
    nt: int,
    s: int,
    cfg: TermSolverConfig,
    rng: random.Random,
    domain_solver: DomainSolverFn,
    _fit_cache: Optional[dict] = None,
) -> list[LinearExpr]:
    """One round of sampling: fits that are small and cover >= |live|/k.

    Performs up to min(n_t * k^n_t, turn_cap) turns; every turn draws n_t
    examples from the live set uniformly with replacement.  The loop stops
    early once max(100, 10*|live|) consecutive turns add no new candidate,
    a stagnation guard that never fires below 100 turns.  Results are
    deduplicated by canonical form and ordered by (node count, key).
    """
    if not live or k < 1 or nt < 1:
        return []
    live_list = sorted(live)
    turns = min(nt * (k ** nt), cfg.turn_cap)
    stagnation_cap = max(100, 10 * len(live))
    bound = _size_bound(cfg, s, nt)
    kept: dict[LinearExpr, None] = {}
    stale = 0
    for _ in range(turns):
        if stale >= stagnation_cap:
            break
        stale += 1
        picked = [live_list[rng.randrange(len(live_list))] for _ in range(nt)]
        key = frozenset(picked)
        if _fit_cache is not None and key in _fit_cache:
            p = _fit_cache[key]
        else:
            sample = [task.examples[i] for i in dict.fromkeys(picked)]
            p = domain_solver(sample, task.grammar)
            if _fit_cache is not None:
                _fit_cache[key] = p
        if p is None or p in kept:
            continue
        if p.node_count() > bound:
            continue
        cov = task.covered(p) & live
        if k * len(cov) < len(live):
            continue
        kept[p] = None
        stale = 0
    return sorted(
        kept,
        key=lambda e: (
            e.node_count(),
            -len(task.covered(e) & live),
            e.sort_key(),
        ),
    )


def search_terms(
    task: PbeTask,
    live: frozenset[int],
    k: int,
    nt: int,
    s: int,
    cfg: TermSolverConfig,
    rng: random.Random,
    domain_solver: DomainSolverFn,
    memo: Optional[set] = None,
    _stats: Optional[dict] = None,
    _fit_cache: Optional[dict] = None,
) -> Optional[list[LinearExpr]]:
    """Backtracking over candidate fits; None when no cover of <= k terms.

    Failed (live, k) keys are memoized when a memo set is supplied; passing
    None disables memoization without changing what a success guarantees.
    """
    if not live:
        return []
    key = (live, k)
    if k == 0 or (memo is not None and key in memo):
        return None
    candidates = get_candidates(
        task, live, k, nt, s, cfg, rng, domain_solver, _fit_cache
    )
    for p in candidates:
        rest = live - task.covered(p)
        if _stats is not None:
            covered_now = _stats["total"] - len(rest)
            _stats["best"] = max(_stats["best"], covered_now)
        tail = search_terms(
            task,
            frozenset(rest),
            k - 1,
            nt,
            s,
            cfg,
            rng,
            domain_solver,
            memo,
            _stats,
            _fit_cache,
        )
        if tail is not None:
            return [p] + tail
    if memo is not None:
        memo.add(key)
    return None


def solve_terms(
    task: PbeTask,
    cfg: TermSolverConfig | None = None,
    domain_solver: DomainSolverFn | None = None,
) -> list[LinearExpr]:
    """Full term-finding loop; returns a cover in first-found order.

    Iterates s = 1, 2, ...; each round allows k up to ceil(c*s*ln|T|) and
    n_t up to ceil(c*s^(alpha/(1-beta))), visiting unvisited (k, n_t) cells
    in ascending (k + n_t, k) order.  Failure memos live for a single s;
    the visited cell set persists across rounds.
    """
    cfg = cfg or TermSolverConfig()
    domain_solver = domain_solver or default_domain_solver()
    n = len(task.examples)
    if n == 0:
        return []
    rng = random.Random(cfg.rng_seed)
    full = frozenset(range(n))
    ln_t = max(1.0, math.log(n))
    visited: set[tuple[int, int]] = set()
    stats = {"best": 0, "total": n}
    fit_cache: dict = {}
    for s in range(cfg.s_start, cfg.s_cap + 1):
        k_l = math.ceil(cfg.c * s * ln_t)
        n_l = math.ceil(cfg.c * (s ** (cfg.alpha / (1.0 - cfg.beta))))
        cells = sorted(
            (
                (k, nt)
                for k in range(1, k_l + 1)
                for nt in range(1, n_l + 1)
                if (k, nt) not in visited
            ),
            key=lambda cell: (cell[0] + cell[1], cell[0]),
        )
        memo: set = set()
        for k, nt in cells:
            visited.add((k, nt))
            result = search_terms(
                task, full, k, nt, s, cfg, rng, domain_solver, memo, stats, fit_cache
            )
            if result is not None:
                uncovered = full
                for p in result:
                    uncovered = uncovered - task.covered(p)
                if uncovered:
                    raise AssertionError("term solver returned a non-cover")
                return result
    raise SynthesisFailure(
        f"no term cover within s_cap={cfg.s_cap} "
        f"(best partial cover {stats['best']}/{n} examples)",
        best_cover=stats["best"],
        total=n,
    )
