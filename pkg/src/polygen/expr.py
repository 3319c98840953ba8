"""Integer-coefficient affine expressions, the term language.

A LinearExpr is kept in canonical form (no zero coefficients, indices
sorted), so structural equality decides semantic equality for terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .grammar import GrammarParams

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


def checked64(value: int) -> int:
    """Reject results outside signed 64-bit range.

    Arithmetic itself is exact; an overflow signals a misconfigured grammar
    or input range rather than a value to be wrapped or saturated.
    """
    if value < INT64_MIN or value > INT64_MAX:
        raise OverflowError(f"value {value} exceeds 64-bit range")
    return value


@dataclass(frozen=True)
class LinearExpr:
    """a0 + sum(ai * x_i) with coeffs as a sorted tuple of (index, ai) pairs."""

    constant: int
    coeffs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        last = -1
        for idx, a in self.coeffs:
            if idx <= last:
                raise ValueError("coefficient indices must be strictly increasing")
            if idx < 0:
                raise ValueError("negative variable index")
            if a == 0:
                raise ValueError("zero coefficients must be dropped")
            last = idx

    @staticmethod
    def make(constant: int, coeffs: Mapping[int, int] | Iterable[tuple[int, int]]) -> "LinearExpr":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[int, int] = {}
        for idx, a in items:
            merged[idx] = merged.get(idx, 0) + a
        canon = tuple(sorted((i, a) for i, a in merged.items() if a != 0))
        return LinearExpr(constant, canon)

    @staticmethod
    def zero() -> "LinearExpr":
        return LinearExpr(0, ())

    @staticmethod
    def var(index: int) -> "LinearExpr":
        return LinearExpr(0, ((index, 1),))

    @property
    def arity_needed(self) -> int:
        """Smallest input length this expression can be evaluated on."""
        return self.coeffs[-1][0] + 1 if self.coeffs else 0

    def coeff(self, index: int) -> int:
        for idx, a in self.coeffs:
            if idx == index:
                return a
        return 0

    def negate(self) -> "LinearExpr":
        return LinearExpr(-self.constant, tuple((i, -a) for i, a in self.coeffs))

    def add(self, other: "LinearExpr") -> "LinearExpr":
        return LinearExpr.make(
            self.constant + other.constant, list(self.coeffs) + list(other.coeffs)
        )

    def scale(self, factor: int) -> "LinearExpr":
        if factor == 0:
            return LinearExpr.zero()
        return LinearExpr(
            self.constant * factor, tuple((i, a * factor) for i, a in self.coeffs)
        )

    def sort_key(self) -> tuple:
        return (self.coeffs, self.constant)

    def node_count(self) -> int:
        """Number of grammar rules in the canonical derivation.

        Each variable occurrence, constant occurrence and operator counts
        once: coefficient 1 costs 1 node (x), -1 costs 2 (-, x), any other
        nonzero value costs 3 (*, a, x).  Operands are joined by k `+` nodes
        for k+1 operands; a zero constant is omitted whenever at least one
        monomial exists.
        """
        if not self.coeffs:
            return 1
        nodes = 0
        operands = len(self.coeffs)
        for _, a in self.coeffs:
            if a == 1:
                nodes += 1
            elif a == -1:
                nodes += 2
            else:
                nodes += 3
        if self.constant != 0:
            nodes += 1
            operands += 1
        return nodes + operands - 1

    def check_grammar(self, g: GrammarParams) -> None:
        """Constants used by the derivation must lie in the grammar range."""
        if self.coeffs and self.constant == 0:
            pass  # omitted constant, nothing to check
        else:
            g.check_const(self.constant)
        for idx, a in self.coeffs:
            if idx >= g.num_vars:
                raise ValueError(f"variable x{idx} outside arity {g.num_vars}")
            if a not in (1, -1):
                g.check_const(a)


def eval_expr(e: LinearExpr, inputs: Sequence[int]) -> int:
    """Exact evaluation; raises on arity mismatch or 64-bit overflow."""
    if e.arity_needed > len(inputs):
        raise ValueError(
            f"expression needs {e.arity_needed} inputs, got {len(inputs)}"
        )
    total = e.constant
    for idx, a in e.coeffs:
        total += a * inputs[idx]
    return checked64(total)
