"""Grammar parameters for the bounded conditional linear arithmetic space.

A grammar is fully described by the input arity and the inclusive range of
integer constants.  Everything else (operators, comparison forms) is fixed
for the whole domain family; only the rule count N depends on the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass

# Operators shared by every grammar in the family:
# +, *, unary -, if-then-else, <, <=, =, and, or, not.
OPERATOR_COUNT = 10


class GrammarRangeError(ValueError):
    """A program uses a constant outside the grammar's constant range."""


@dataclass(frozen=True)
class GrammarParams:
    """Arity and constant range of one grammar instance.

    ``rule_count`` is the number of distinct grammar rules N: one per input
    variable, one per constant in [const_min, const_max], and one per
    operator.  ``const_min <= 0 <= const_max`` is enforced so that zero and
    one-step shifts stay expressible.
    """

    num_vars: int
    const_min: int
    const_max: int

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValueError("num_vars must be positive")
        if not (self.const_min <= 0 <= self.const_max):
            raise ValueError("constant range must contain 0")

    @property
    def rule_count(self) -> int:
        return self.num_vars + (self.const_max - self.const_min + 1) + OPERATOR_COUNT

    @property
    def bits_per_rule(self) -> int:
        """ceil(log2 N); at least 1 because N >= 2 always holds here."""
        return max(1, (self.rule_count - 1).bit_length())

    def const_in_range(self, value: int) -> bool:
        return self.const_min <= value <= self.const_max

    def check_const(self, value: int) -> None:
        if not self.const_in_range(value):
            raise GrammarRangeError(
                f"constant {value} outside grammar range "
                f"[{self.const_min}, {self.const_max}]"
            )
