"""Program representations: bare terms, decision lists, and if-then-else trees.

Decision lists are the normal form produced by the synthesizer; trees are
the general conditional space used by the baseline and as conversion input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .conditions import Atom, Clause, Dnf, Literal, dnf_and, dnf_not, dnf_or
from .expr import LinearExpr, eval_expr
from .grammar import GrammarParams


@dataclass(frozen=True)
class Term:
    """A bare linear expression, also serving as a tree leaf."""

    expr: LinearExpr


@dataclass(frozen=True)
class DecisionList:
    """Ordered (condition, term) branches with a default term.

    Evaluation takes the first branch whose condition holds; with no
    branches the list is just its default term.
    """

    branches: tuple[tuple[Dnf, LinearExpr], ...]
    default: LinearExpr


@dataclass(frozen=True)
class IteTree:
    cond: Dnf
    then_branch: "Program"
    else_branch: "Program"


Program = Union[Term, DecisionList, IteTree]

# Alias kept for the tree-leaf role of a bare term.
TreeLeaf = Term


def eval_program(p: Program, inputs: Sequence[int]) -> int:
    if isinstance(p, Term):
        return eval_expr(p.expr, inputs)
    if isinstance(p, DecisionList):
        for cond, term in p.branches:
            if cond.holds(inputs):
                return eval_expr(term, inputs)
        return eval_expr(p.default, inputs)
    if isinstance(p, IteTree):
        if p.cond.holds(inputs):
            return eval_program(p.then_branch, inputs)
        return eval_program(p.else_branch, inputs)
    raise TypeError(f"not a program: {p!r}")


def program_arity(p) -> int:
    """Smallest arity the object can be evaluated on."""
    if isinstance(p, LinearExpr):
        return p.arity_needed
    if isinstance(p, Atom):
        return p.lhs.arity_needed
    if isinstance(p, Literal):
        return p.atom.lhs.arity_needed
    if isinstance(p, Clause):
        return max((program_arity(l) for l in p.literals), default=0)
    if isinstance(p, Dnf):
        return max((program_arity(c) for c in p.clauses), default=0)
    if isinstance(p, Term):
        return p.expr.arity_needed
    if isinstance(p, DecisionList):
        arity = p.default.arity_needed
        for cond, term in p.branches:
            arity = max(arity, program_arity(cond), term.arity_needed)
        return arity
    if isinstance(p, IteTree):
        return max(
            program_arity(p.cond),
            program_arity(p.then_branch),
            program_arity(p.else_branch),
        )
    raise TypeError(f"not a program: {p!r}")


def node_count(p) -> int:
    """Grammar rules used by the canonical derivation of any program piece."""
    if isinstance(p, (LinearExpr, Atom, Literal, Clause, Dnf)):
        return p.node_count()
    if isinstance(p, Term):
        return p.expr.node_count()
    if isinstance(p, DecisionList):
        total = p.default.node_count()
        for cond, term in p.branches:
            total += 1 + cond.node_count() + term.node_count()
        return total
    if isinstance(p, IteTree):
        return (
            1
            + p.cond.node_count()
            + node_count(p.then_branch)
            + node_count(p.else_branch)
        )
    raise TypeError(f"not a program: {p!r}")


def _check_grammar(p, g: GrammarParams) -> None:
    if isinstance(p, (LinearExpr, Atom, Dnf)):
        p.check_grammar(g)
    elif isinstance(p, Literal):
        p.atom.check_grammar(g)
    elif isinstance(p, Clause):
        for lit in p.literals:
            lit.atom.check_grammar(g)
    elif isinstance(p, Term):
        p.expr.check_grammar(g)
    elif isinstance(p, DecisionList):
        p.default.check_grammar(g)
        for cond, term in p.branches:
            cond.check_grammar(g)
            term.check_grammar(g)
    elif isinstance(p, IteTree):
        p.cond.check_grammar(g)
        _check_grammar(p.then_branch, g)
        _check_grammar(p.else_branch, g)
    else:
        raise TypeError(f"not a program: {p!r}")


def program_size(p, g: GrammarParams) -> int:
    """Normalized size ceil(log2 N) * |p| of a program, expression, or DNF.

    Raises GrammarRangeError when the derivation needs a constant outside
    the grammar's range.
    """
    _check_grammar(p, g)
    return g.bits_per_rule * node_count(p)


def _leaf_paths(p: Program, prefix: tuple[tuple[Dnf, bool], ...]):
    """Yield (path, leaf expr) pairs; path entries are (cond, took_else)."""
    if isinstance(p, Term):
        yield prefix, p.expr
    elif isinstance(p, IteTree):
        yield from _leaf_paths(p.then_branch, prefix + ((p.cond, False),))
        yield from _leaf_paths(p.else_branch, prefix + ((p.cond, True),))
    elif isinstance(p, DecisionList):
        # Treat an embedded decision list as the tree it abbreviates.
        rest: Program = Term(p.default)
        for cond, term in reversed(p.branches):
            rest = IteTree(cond, Term(term), rest)
        yield from _leaf_paths(rest, prefix)
    else:
        raise TypeError(f"not a program: {p!r}")


def _path_condition(path: tuple[tuple[Dnf, bool], ...]) -> Dnf:
    acc = Dnf.true()
    for cond, took_else in path:
        factor = dnf_not(cond) if took_else else cond
        acc = dnf_and(acc, factor)
    return acc


def to_decision_list(p: Program) -> DecisionList:
    """Convert a conditional program to an equivalent decision list.

    One branch is produced per distinct leaf term (ordered by first
    occurrence, left to right); each branch condition is the disjunction of
    the root-to-leaf path conjunctions reaching that term.  The last
    distinct term becomes the default and its condition is dropped, which
    preserves semantics because the path conditions of distinct leaves are
    mutually exclusive.
    """
    order: list[LinearExpr] = []
    conds: dict[LinearExpr, Dnf] = {}
    for path, expr in _leaf_paths(p, ()):
        cond = _path_condition(path)
        if expr not in conds:
            order.append(expr)
            conds[expr] = cond
        else:
            conds[expr] = dnf_or(conds[expr], cond)
    if len(order) == 1:
        return DecisionList((), order[0])
    branches = tuple((conds[t], t) for t in order[:-1])
    return DecisionList(branches, order[-1])
