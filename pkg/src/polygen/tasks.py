"""Input-output examples and PBE tasks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .expr import LinearExpr, eval_expr
from .grammar import GrammarParams


class ConflictingExamplesError(ValueError):
    """Two examples share an input but disagree on the output."""


@dataclass(frozen=True)
class Example:
    input: tuple[int, ...]
    output: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "input", tuple(self.input))


class PbeTask:
    """An ordered, deduplicated sequence of examples over a fixed grammar.

    Exact duplicates are dropped at construction; duplicate inputs with
    different outputs are rejected.  Instances are immutable by convention
    and hashable by value; covered-set computations are cached per task.
    """

    __slots__ = ("examples", "grammar", "_cov_cache")

    def __init__(self, examples: Iterable[Example], grammar: GrammarParams):
        seen: dict[tuple[int, ...], int] = {}
        kept: list[Example] = []
        for ex in examples:
            ex = ex if isinstance(ex, Example) else Example(*ex)
            if len(ex.input) != grammar.num_vars:
                raise ValueError(
                    f"example arity {len(ex.input)} != grammar arity {grammar.num_vars}"
                )
            if ex.input in seen:
                if seen[ex.input] != ex.output:
                    raise ConflictingExamplesError(
                        f"input {ex.input} mapped to both {seen[ex.input]} and {ex.output}"
                    )
                continue
            seen[ex.input] = ex.output
            kept.append(ex)
        self.examples: tuple[Example, ...] = tuple(kept)
        self.grammar = grammar
        self._cov_cache: dict[LinearExpr, frozenset[int]] = {}

    def __len__(self) -> int:
        return len(self.examples)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PbeTask)
            and self.examples == other.examples
            and self.grammar == other.grammar
        )

    def __hash__(self) -> int:
        return hash((self.examples, self.grammar))

    def __repr__(self) -> str:
        return f"PbeTask({len(self.examples)} examples, {self.grammar})"

    def inputs(self) -> tuple[tuple[int, ...], ...]:
        return tuple(ex.input for ex in self.examples)

    def covered(self, e: LinearExpr) -> frozenset[int]:
        """Indices of examples the expression reproduces exactly."""
        cached = self._cov_cache.get(e)
        if cached is None:
            cached = frozenset(
                i for i, ex in enumerate(self.examples)
                if eval_expr(e, ex.input) == ex.output
            )
            self._cov_cache[e] = cached
        return cached

    def subset(self, indices: Iterable[int]) -> "PbeTask":
        idx = sorted(set(indices))
        return PbeTask([self.examples[i] for i in idx], self.grammar)


def covered(e: LinearExpr, task: PbeTask) -> frozenset[int]:
    return task.covered(e)


def consistent(program, task: PbeTask) -> bool:
    from .programs import eval_program

    return all(eval_program(program, ex.input) == ex.output for ex in task.examples)
