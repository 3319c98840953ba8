"""Enumerative baseline: size-ordered term enumeration plus a decision-tree
unifier driven by multi-label information gain.

Kept deliberately faithful to the classic enumerate-then-learn shape so its
behavior (in particular, covers made of many small terms) can be contrasted
with the sampling solver.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

from .conditions import Atom, Dnf
from .domain_solver import DomainSolverConfig
from .expr import LinearExpr
from .grammar import GrammarParams
from .programs import IteTree, Program, Term, eval_program
from .condition_solver import enumerate_conditions
from .tasks import PbeTask
from .term_solver import SynthesisFailure


def _exprs_with_budget(
    g: GrammarParams, cfg: DomainSolverConfig, budget: int
) -> list[LinearExpr]:
    """All canonical expressions with exactly ``budget`` derivation nodes."""
    coeff_vals = sorted(
        {1, -1}
        | {
            v
            for v in range(g.const_min, g.const_max + 1)
            if abs(v) >= 2 and abs(v) <= cfg.coeff_cap
        }
    )
    const_vals = [
        c
        for c in range(g.const_min, g.const_max + 1)
        if c != 0 and abs(c) <= cfg.const_cap
    ]
    out: list[LinearExpr] = []

    def extend(start: int, coeffs: dict[int, int], used: int, operands: int) -> None:
        # Completed expression without a constant.
        if operands > 0 and used + operands - 1 == budget:
            out.append(LinearExpr.make(0, dict(coeffs)))
        # Completed expression with a constant appended.
        if operands >= 0 and used + 1 + operands == budget:
            for c in const_vals:
                out.append(LinearExpr.make(c, dict(coeffs)))
        for i in range(start, g.num_vars):
            for v in coeff_vals:
                cost = 1 if v == 1 else (2 if v == -1 else 3)
                if used + cost + operands > budget:
                    continue
                coeffs[i] = v
                extend(i + 1, coeffs, used + cost, operands + 1)
                del coeffs[i]

    if budget == 1:
        out.append(LinearExpr.zero())
    extend(0, {}, 0, 0)
    return sorted(set(out), key=LinearExpr.sort_key)


def enum_terms(
    task: PbeTask,
    g: GrammarParams | None = None,
    size_cap: int = 16,
    cfg: DomainSolverConfig | None = None,
) -> list[LinearExpr]:
    """Size-ordered enumeration keeping terms with novel covered-sets.

    A term is admitted iff its covered-set differs from every previously
    admitted term's.  Enumeration stops as soon as the admitted terms
    jointly cover the task; exhausting the size cap first raises, carrying
    the partial cover size.
    """
    g = g or task.grammar
    cfg = cfg or DomainSolverConfig()
    n = len(task.examples)
    full = frozenset(range(n))
    admitted: list[LinearExpr] = []
    signatures: set[frozenset[int]] = set()
    union: frozenset[int] = frozenset()
    if n == 0:
        return []
    for budget in range(1, size_cap + 1):
        for expr in _exprs_with_budget(g, cfg, budget):
            cov = task.covered(expr)
            if cov in signatures:
                continue
            signatures.add(cov)
            admitted.append(expr)
            union = union | cov
            if union == full:
                return admitted
    raise SynthesisFailure(
        f"term enumeration exhausted size cap {size_cap} "
        f"covering {len(union)}/{n} examples",
        best_cover=len(union),
        total=n,
    )


def _entropy(counts: Iterable[int]) -> float:
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log(p)
    return h


def id3_unify(
    terms: Sequence[LinearExpr],
    task: PbeTask,
    conditions: Sequence[Atom],
    max_depth: int = 32,
) -> Program:
    """Recursive decision-tree learning over term labels.

    A node returns a term covering all of its examples when one exists;
    otherwise it splits on the condition with the highest information gain
    over the label-count vector (label = set of terms covering an example)
    and recurses.  Conditions that leave either side empty are skipped;
    running out of conditions or depth raises.
    """
    cover = [task.covered(t) for t in terms]
    conds = sorted(conditions, key=lambda a: (a.node_count(), a.sort_key()))
    cond_true = [
        frozenset(
            i for i, ex in enumerate(task.examples) if atom.holds(ex.input)
        )
        for atom in conds
    ]

    def label_entropy(live: frozenset[int]) -> float:
        return _entropy([len(c & live) for c in cover])

    def learn(live: frozenset[int], depth: int) -> Program:
        for j, cov in enumerate(cover):
            if live <= cov:
                return Term(terms[j])
        if depth >= max_depth:
            raise SynthesisFailure("decision-tree depth bound reached")
        base = label_entropy(live)
        best: Optional[int] = None
        best_gain = -1.0
        for ci, true_set in enumerate(cond_true):
            t_live = live & true_set
            if not t_live or t_live == live:
                continue
            f_live = live - true_set
            gain = base - (
                len(t_live) / len(live) * label_entropy(t_live)
                + len(f_live) / len(live) * label_entropy(f_live)
            )
            if gain > best_gain + 1e-12:
                best = ci
                best_gain = gain
        if best is None:
            raise SynthesisFailure("no condition splits the remaining examples")
        true_set = cond_true[best]
        return IteTree(
            Dnf.of_atom(conds[best]),
            learn(live & true_set, depth + 1),
            learn(live - true_set, depth + 1),
        )

    return learn(frozenset(range(len(task.examples))), 0)


def eusolver_solve(
    task: PbeTask,
    term_size_cap: int = 16,
    cond_size_cap: int = 8,
    cfg: DomainSolverConfig | None = None,
) -> Program:
    """Baseline end-to-end solve: enumerate terms, grow the condition pool
    until the tree learner succeeds."""
    from .unifier import check_consistent

    if len(task.examples) == 0:
        return Term(LinearExpr.zero())
    g = task.grammar
    terms = enum_terms(task, g, term_size_cap, cfg)
    last_error: Exception | None = None
    for bound in range(1, cond_size_cap + 1):
        atoms = enumerate_conditions(g, bound, task.inputs())
        if not atoms:
            continue
        try:
            program = id3_unify(terms, task, atoms)
        except SynthesisFailure as err:
            last_error = err
            continue
        check_consistent(program, task)
        return program
    raise SynthesisFailure(
        f"tree learning failed up to condition size {cond_size_cap}: {last_error}"
    )
