"""Comparison atoms and their boolean combinations (literal/clause/DNF).

Atoms are canonicalized comparisons against zero.  Clauses are conjunctions
of literals, DNFs are disjunctions of clauses; an empty clause means true
and an empty DNF means false.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .expr import LinearExpr, eval_expr
from .grammar import GrammarParams


class CmpOp(enum.Enum):
    LT = "<"
    LE = "<="
    EQ = "="


@dataclass(frozen=True)
class Atom:
    """Canonical comparison ``lhs op 0`` over integer inputs.

    Canonical form: for EQ the gcd of all coefficients and the constant is
    divided out and the leading coefficient is positive; for LT/LE only the
    coefficient gcd is divided out and the constant is floor/ceil-adjusted
    so the integer solution set is preserved.
    """

    lhs: LinearExpr
    op: CmpOp

    @staticmethod
    def make(lhs: LinearExpr, op: CmpOp) -> "Atom":
        coeffs = lhs.coeffs
        if not coeffs:
            # Variable-free atom: collapse the constant to its sign.
            c = lhs.constant
            c = 0 if c == 0 else (1 if c > 0 else -1)
            return Atom(LinearExpr(c, ()), op)
        if op is CmpOp.EQ:
            g = 0
            for _, a in coeffs:
                g = math.gcd(g, abs(a))
            g = math.gcd(g, abs(lhs.constant))
            if coeffs[0][1] < 0:
                lhs = lhs.negate()
                coeffs = lhs.coeffs
            if g > 1:
                lhs = LinearExpr(
                    lhs.constant // g, tuple((i, a // g) for i, a in coeffs)
                )
            return Atom(lhs, op)
        g = 0
        for _, a in coeffs:
            g = math.gcd(g, abs(a))
        if g > 1:
            new_coeffs = tuple((i, a // g) for i, a in coeffs)
            # lhs <= 0  <=>  t <= -c/g  <=>  t + ceil(c/g) <= 0 over integers;
            # for the strict form the floor keeps the solution set instead.
            if op is CmpOp.LE:
                new_const = -(-lhs.constant // g)  # ceil
            else:
                new_const = lhs.constant // g  # floor
            lhs = LinearExpr(new_const, new_coeffs)
        return Atom(lhs, op)

    @staticmethod
    def from_comparison(left: LinearExpr, op: str, right: LinearExpr) -> "Atom":
        """Build from ``left op right`` with op in {<, <=, =, >=, >}."""
        if op in (">", ">="):
            left, right = right, left
            op = "<" if op == ">" else "<="
        return Atom.make(left.add(right.negate()), CmpOp(op))

    def holds(self, inputs: Sequence[int]) -> bool:
        v = eval_expr(self.lhs, inputs)
        if self.op is CmpOp.LT:
            return v < 0
        if self.op is CmpOp.LE:
            return v <= 0
        return v == 0

    def sides(self) -> tuple[LinearExpr, LinearExpr]:
        """Two-sided rendering ``L op R`` with lhs = L - R, minimal nodes.

        Monomials keep their sign side (negative coefficients move right,
        negated).  The constant fills an otherwise-empty side when possible,
        matching the cheapest derivation in the two-sided comparison
        grammar; with monomials on both sides it joins the side where it
        stays positive.  An empty side becomes the constant 0.
        """
        pos_coeffs = tuple((i, a) for i, a in self.lhs.coeffs if a > 0)
        neg_coeffs = tuple((i, -a) for i, a in self.lhs.coeffs if a < 0)
        c = self.lhs.constant
        left_c = right_c = 0
        if c != 0:
            if pos_coeffs and not neg_coeffs:
                right_c = -c
            elif neg_coeffs and not pos_coeffs:
                left_c = c
            elif c > 0:
                left_c = c
            else:
                right_c = -c
        return LinearExpr(left_c, pos_coeffs), LinearExpr(right_c, neg_coeffs)

    def node_count(self) -> int:
        left, right = self.sides()
        return left.node_count() + right.node_count() + 1

    def sort_key(self) -> tuple:
        return (self.op.value, self.lhs.coeffs, self.lhs.constant)

    def check_grammar(self, g: GrammarParams) -> None:
        left, right = self.sides()
        left.check_grammar(g)
        right.check_grammar(g)


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def holds(self, inputs: Sequence[int]) -> bool:
        return self.atom.holds(inputs) != self.negated

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.negated)

    def node_count(self) -> int:
        return self.atom.node_count() + (1 if self.negated else 0)

    def sort_key(self) -> tuple:
        return (self.negated, self.atom.sort_key())


class ContradictionError(ValueError):
    """A clause contains a literal and its negation."""


@dataclass(frozen=True)
class Clause:
    """Conjunction of literals; the empty clause is the constant true."""

    literals: frozenset[Literal] = frozenset()

    def __post_init__(self) -> None:
        for lit in self.literals:
            if lit.negate() in self.literals:
                raise ContradictionError("clause contains complementary literals")

    @staticmethod
    def of(literals: Iterable[Literal]) -> "Clause":
        return Clause(frozenset(literals))

    @staticmethod
    def try_of(literals: Iterable[Literal]) -> Optional["Clause"]:
        """None instead of raising when the literals are contradictory."""
        try:
            return Clause(frozenset(literals))
        except ContradictionError:
            return None

    def holds(self, inputs: Sequence[int]) -> bool:
        return all(lit.holds(inputs) for lit in self.literals)

    def node_count(self) -> int:
        if not self.literals:
            return 1
        return sum(l.node_count() for l in self.literals) + len(self.literals) - 1

    def sorted_literals(self) -> list[Literal]:
        return sorted(self.literals, key=Literal.sort_key)

    def sort_key(self) -> tuple:
        return (self.node_count(), tuple(l.sort_key() for l in self.sorted_literals()))


@dataclass(frozen=True)
class Dnf:
    """Disjunction of clauses; the empty DNF is the constant false."""

    clauses: tuple[Clause, ...] = ()

    @staticmethod
    def false() -> "Dnf":
        return Dnf(())

    @staticmethod
    def true() -> "Dnf":
        return Dnf((Clause(),))

    @staticmethod
    def of_atom(atom: Atom, negated: bool = False) -> "Dnf":
        return Dnf((Clause.of([Literal(atom, negated)]),))

    def holds(self, inputs: Sequence[int]) -> bool:
        return any(c.holds(inputs) for c in self.clauses)

    def node_count(self) -> int:
        if not self.clauses:
            return 1
        return sum(c.node_count() for c in self.clauses) + len(self.clauses) - 1

    def check_grammar(self, g: GrammarParams) -> None:
        for clause in self.clauses:
            for lit in clause.literals:
                lit.atom.check_grammar(g)


def eval_cond(d: Dnf, inputs: Sequence[int]) -> bool:
    """True iff some clause has all its literals true on the input."""
    return d.holds(inputs)


def dnf_and(a: Dnf, b: Dnf) -> Dnf:
    """Conjunction, distributed back into DNF; contradictory clauses drop."""
    out: list[Clause] = []
    seen: set[frozenset[Literal]] = set()
    for ca in a.clauses:
        for cb in b.clauses:
            merged = Clause.try_of(ca.literals | cb.literals)
            if merged is not None and merged.literals not in seen:
                seen.add(merged.literals)
                out.append(merged)
    return Dnf(tuple(out))


def dnf_or(a: Dnf, b: Dnf) -> Dnf:
    out: list[Clause] = []
    seen: set[frozenset[Literal]] = set()
    for c in a.clauses + b.clauses:
        if c.literals not in seen:
            seen.add(c.literals)
            out.append(c)
    return Dnf(tuple(out))


def dnf_not(d: Dnf) -> Dnf:
    """De Morgan expansion of the negation, distributed into DNF."""
    result = Dnf.true()
    for clause in d.clauses:
        negs = Dnf(tuple(Clause.of([lit.negate()]) for lit in clause.sorted_literals()))
        result = dnf_and(result, negs)
    return result
