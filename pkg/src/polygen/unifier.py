"""Unifier: stitch a covering term set into a decision list.

For each term except the last, a boolean subtask is built (positives:
inputs only that term covers among the remaining examples; negatives:
inputs it does not cover; inputs also covered by a later term are left
unconstrained) and handed to the DNF solver.  Examples claimed by a
synthesized condition are dropped before the next term is processed.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .condition_solver import BoolTask, CondSolverConfig, dnf_solve
from .domain_solver import DomainSolverConfig
from .expr import LinearExpr
from .grammar import GrammarParams
from .programs import DecisionList, Program, Term, eval_program
from .tasks import PbeTask
from .term_solver import (
    DomainSolverFn,
    SynthesisFailure,
    TermSolverConfig,
    default_domain_solver,
    solve_terms,
)


class ConsistencyError(AssertionError):
    """A synthesized program disagrees with an example it was given."""


def check_consistent(program: Program, task: PbeTask) -> None:
    for ex in task.examples:
        got = eval_program(program, ex.input)
        if got != ex.output:
            raise ConsistencyError(
                f"synthesized program maps {ex.input} to {got}, expected {ex.output}"
            )


def build_condition_task(
    terms: Sequence[LinearExpr], i: int, task: PbeTask
) -> BoolTask:
    """Boolean subtask for branch i (0-based) over the residual task.

    Positives: inputs covered by terms[i] and by no later term.  Negatives:
    inputs terms[i] does not cover.  Inputs covered by terms[i] and some
    later term are don't-cares and appear in neither set.
    """
    if not 0 <= i < len(terms) - 1:
        raise ValueError("branch index must leave at least one later term")
    cov = task.covered(terms[i])
    later: frozenset[int] = frozenset()
    for j in range(i + 1, len(terms)):
        later = later | task.covered(terms[j])
    positives = frozenset(task.examples[x].input for x in cov - later)
    negatives = frozenset(
        task.examples[x].input for x in range(len(task.examples)) if x not in cov
    )
    return BoolTask(positives, negatives, task.grammar.num_vars)


def unify(
    terms: Sequence[LinearExpr],
    task: PbeTask,
    g: GrammarParams,
    cfg: CondSolverConfig | None = None,
    _retry: bool = True,
) -> DecisionList:
    """Decision list over the given terms, consistent with the whole task.

    Terms are used in the given order; the last becomes the default.  If
    condition synthesis exhausts its budget, one retry runs with the term
    order reversed before the failure propagates.
    """
    cfg = cfg or CondSolverConfig()
    terms = list(terms)
    if not terms:
        raise ValueError("cannot unify an empty term set")
    try:
        residual = task
        branches = []
        for i in range(len(terms) - 1):
            bool_task = build_condition_task(terms, i, residual)
            cond = dnf_solve(bool_task, g, cfg)
            branches.append((cond, terms[i]))
            residual = PbeTask(
                [ex for ex in residual.examples if not cond.holds(ex.input)],
                task.grammar,
            )
        result = DecisionList(tuple(branches), terms[-1])
    except SynthesisFailure:
        if not _retry or len(terms) < 2:
            raise
        result = unify(list(reversed(terms)), task, g, cfg, _retry=False)
    check_consistent(result, task)
    return result


def polygen_solve(
    task: PbeTask,
    term_cfg: TermSolverConfig | None = None,
    cond_cfg: CondSolverConfig | None = None,
    domain_cfg: DomainSolverConfig | None = None,
    seed: Optional[int] = None,
    domain_solver: DomainSolverFn | None = None,
) -> Program:
    """End-to-end synthesis: term cover, then unification.

    The empty task yields the constant 0, the minimal first candidate for
    oracle-guided loops.  The result is checked against every example
    before it is returned.
    """
    term_cfg = term_cfg or TermSolverConfig()
    if seed is not None:
        term_cfg = TermSolverConfig(
            c=term_cfg.c,
            alpha=term_cfg.alpha,
            beta=term_cfg.beta,
            turn_cap=term_cfg.turn_cap,
            s_cap=term_cfg.s_cap,
            rng_seed=seed,
        )
    domain_solver = domain_solver or default_domain_solver(domain_cfg)
    # The bounded condition grammar is not perfectly if-closed at the range
    # edges, so a shrapnel term cover (many near-singleton fits, assembled
    # at large k before the size filter admits the real terms) can induce
    # an unseparable branch labeling.  Retries restart the term search at a
    # larger size budget with fresh randomness, giving real covers first
    # shot at the small search cells.
    attempts = 3
    last_failure: SynthesisFailure | None = None
    for attempt in range(attempts):
        cfg = term_cfg if attempt == 0 else term_cfg.with_restart(
            rng_seed=term_cfg.rng_seed + 0x9E3779B9 * attempt,
            s_start=term_cfg.s_start + 3 * attempt,
        )
        terms = solve_terms(task, cfg, domain_solver)
        if not terms:
            return Term(LinearExpr.zero())
        if len(terms) == 1:
            program: Program = DecisionList((), terms[0])
        else:
            # Unify least-covering terms first: their positive sets are
            # small, so their conditions stay near single clauses, and the
            # widest term becomes the unconditioned default branch.
            ordered = sorted(
                terms, key=lambda t: (len(task.covered(t)), t.sort_key())
            )
            try:
                program = unify(ordered, task, task.grammar, cond_cfg)
            except SynthesisFailure as err:
                last_failure = err
                continue
        check_consistent(program, task)
        return program
    assert last_failure is not None
    raise last_failure
