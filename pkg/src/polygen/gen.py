"""Random program generation for tests and synthetic benchmarks."""

from __future__ import annotations

import random
from typing import Optional

from .conditions import Atom, CmpOp, Dnf
from .expr import LinearExpr
from .grammar import GrammarParams
from .programs import IteTree, Program, Term


def random_linear_expr(
    rng: random.Random,
    g: GrammarParams,
    coeff_range: int = 2,
    max_support: Optional[int] = None,
) -> LinearExpr:
    lo = max(-coeff_range, g.const_min)
    hi = min(coeff_range, g.const_max)
    support = rng.randint(0, max_support if max_support is not None else g.num_vars)
    vars_used = rng.sample(range(g.num_vars), min(support, g.num_vars))
    coeffs = {}
    for i in vars_used:
        c = 0
        while c == 0:
            c = rng.randint(max(lo, -coeff_range), min(hi, coeff_range))
            if abs(c) == 1 and rng.random() < 0.5:
                break
        if c:
            coeffs[i] = c
    const = rng.randint(lo, hi)
    expr = LinearExpr.make(const, coeffs)
    if not expr.coeffs and expr.constant == 0 and rng.random() < 0.7:
        return LinearExpr.var(rng.randrange(g.num_vars))
    return expr


def random_atom(rng: random.Random, g: GrammarParams, coeff_range: int = 2) -> Atom:
    while True:
        lhs = random_linear_expr(rng, g, coeff_range)
        if lhs.coeffs:
            break
    op = rng.choice([CmpOp.LT, CmpOp.LE, CmpOp.EQ])
    return Atom.make(lhs, op)


def random_ite_tree(
    rng: random.Random,
    g: GrammarParams,
    depth: int,
    coeff_range: int = 2,
) -> Program:
    """Random tree with single-atom conditions and linear leaves."""
    if depth == 0 or rng.random() < 0.25:
        return Term(random_linear_expr(rng, g, coeff_range))
    cond = Dnf.of_atom(random_atom(rng, g, coeff_range))
    return IteTree(
        cond,
        random_ite_tree(rng, g, depth - 1, coeff_range),
        random_ite_tree(rng, g, depth - 1, coeff_range),
    )
