"""Minimal-size linear fit: the PBE solver for the term language.

Given examples, find an integer-coefficient affine expression consistent
with all of them whose normalized size is globally minimal within the
configured caps, or report unrealizability (None).

The equality system is solved exactly over the integers by fraction-free
row reduction.  An infeasible system is unrealizable outright; a unique
rational solution only needs an integrality and range check.  Otherwise the
solution space is searched by iterative deepening on the derivation node
count: coefficient "patterns" (per-variable class zero / +1 / -1 / other,
plus constant presence) are visited in ascending node cost, the equations
are re-solved with the pattern's fixed entries substituted, and the first
pattern admitting a valid assignment yields the answer.  Size depends only
on the pattern, so the first hit is globally minimal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .expr import LinearExpr
from .grammar import GrammarParams
from .tasks import Example


@dataclass(frozen=True)
class DomainSolverConfig:
    coeff_cap: int = 64
    const_cap: int = 1024
    size_cap: int = 64

    def __post_init__(self) -> None:
        if min(self.coeff_cap, self.const_cap, self.size_cap) < 1:
            raise ValueError("caps must be positive")


def _eliminate(rows: list[list[int]]) -> Optional[tuple[list[list[int]], list[int]]]:
    """Integer row reduction of [A | b] with rows normalized by gcd.

    Returns None when the system is rationally infeasible, otherwise the
    reduced rows (pivot entry positive, zeros elsewhere in pivot columns)
    and the pivot column indices.
    """
    if not rows:
        return [], []
    width = len(rows[0]) - 1
    pivots: list[int] = []
    r = 0
    for c in range(width):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        row = rows[r]
        g = 0
        for v in row:
            g = math.gcd(g, v)
        if g > 1:
            row = [v // g for v in row]
        if row[c] < 0:
            row = [-v for v in row]
        rows[r] = row
        p = row[c]
        for i in range(len(rows)):
            other = rows[i]
            if i != r and other[c] != 0:
                f = other[c]
                new = [a * p - b * f for a, b in zip(other, row)]
                g = 0
                for v in new:
                    g = math.gcd(g, v)
                if g > 1:
                    new = [v // g for v in new]
                rows[i] = new
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return None
    return rows[:r], pivots


def _coeff_ok(value: int, g: GrammarParams, cfg: DomainSolverConfig) -> bool:
    if value in (0, 1, -1):
        return True
    return abs(value) <= cfg.coeff_cap and g.const_in_range(value)


def _const_ok(value: int, g: GrammarParams, cfg: DomainSolverConfig) -> bool:
    if value == 0:
        return True
    return abs(value) <= cfg.const_cap and g.const_in_range(value)


# Per-variable classes: fixed values 0/1/-1, or a free "big" coefficient.
_CLASS_COST = {0: 0, 1: 1, -1: 2, "big": 3}


def _patterns(n: int) -> list[tuple[int, tuple, bool]]:
    """All (node_count, var classes, has_const) patterns, cheapest first."""
    out = []
    for classes in itertools.product((0, 1, -1, "big"), repeat=n):
        support = sum(1 for c in classes if c != 0)
        var_nodes = sum(_CLASS_COST[c] for c in classes)
        for has_const in (False, True):
            operands = support + (1 if has_const else 0)
            if operands == 0:
                nodes = 1  # the zero expression
            else:
                nodes = var_nodes + (1 if has_const else 0) + operands - 1
            out.append((nodes, support, classes, has_const))
    out.sort(key=lambda t: (t[0], t[1], tuple(str(c) for c in t[2]), t[3]))
    return [(nodes, classes, has_const) for nodes, _, classes, has_const in out]


_PATTERN_CACHE: dict[int, list] = {}
_DOMAIN_CACHE: dict[tuple, list[int]] = {}


def _patterns_for(n: int) -> list:
    if n not in _PATTERN_CACHE:
        _PATTERN_CACHE[n] = _patterns(n)
    return _PATTERN_CACHE[n]


def _value_domain(g: GrammarParams, cap: int, kind: str) -> list[int]:
    """Candidate values for one free unknown, small magnitudes first."""
    key = (g.const_min, g.const_max, cap, kind)
    cached = _DOMAIN_CACHE.get(key)
    if cached is None:
        start = 2 if kind == "coeff" else 1
        cached = [
            v
            for mag in range(start, cap + 1)
            for v in (mag, -mag)
            if g.const_in_range(v)
        ]
        _DOMAIN_CACHE[key] = cached
    return cached


def _solve_pattern(
    inputs: Sequence[Sequence[int]],
    outputs: Sequence[int],
    classes: tuple,
    has_const: bool,
    g: GrammarParams,
    cfg: DomainSolverConfig,
) -> Optional[LinearExpr]:
    """Find an assignment matching the pattern, small magnitudes first."""
    big_vars = [i for i, c in enumerate(classes) if c == "big"]
    nunk = len(big_vars) + (1 if has_const else 0)
    rows = []
    for inp, out in zip(inputs, outputs):
        rhs = out
        for i, c in enumerate(classes):
            if c == 1:
                rhs -= inp[i]
            elif c == -1:
                rhs += inp[i]
        row = [inp[i] for i in big_vars]
        if has_const:
            row.append(1)
        row.append(rhs)
        rows.append(row)

    def build(values: list[int]) -> Optional[LinearExpr]:
        coeffs = {}
        for pos, i in enumerate(big_vars):
            v = values[pos]
            if v in (0, 1, -1) or not _coeff_ok(v, g, cfg):
                return None
            coeffs[i] = v
        for i, c in enumerate(classes):
            if c in (1, -1):
                coeffs[i] = c
        const = values[len(big_vars)] if has_const else 0
        if has_const and (const == 0 or not _const_ok(const, g, cfg)):
            return None
        return LinearExpr.make(const, coeffs)

    if nunk == 0:
        if all(r[-1] == 0 for r in rows):
            return build([])
        return None

    reduced = _eliminate(rows)
    if reduced is None:
        return None
    red_rows, pivots = reduced
    free_cols = [c for c in range(nunk) if c not in pivots]

    def solved(assign: dict[int, int]) -> Optional[list[int]]:
        values = [0] * nunk
        for fc, v in assign.items():
            values[fc] = v
        for row, pc in zip(red_rows, pivots):
            num = row[-1]
            for fc in free_cols:
                num -= row[fc] * values[fc]
            den = row[pc]
            if num % den:
                return None
            values[pc] = num // den
        return values

    if not free_cols:
        values = solved({})
        return build(values) if values is not None else None

    domains = [
        _value_domain(
            g,
            cfg.coeff_cap if c < len(big_vars) else cfg.const_cap,
            "coeff" if c < len(big_vars) else "const",
        )
        for c in free_cols
    ]
    for combo in itertools.product(*domains):
        values = solved(dict(zip(free_cols, combo)))
        if values is None:
            continue
        expr = build(values)
        if expr is not None:
            return expr
    return None


def synth_min_linear(
    examples: Sequence[Example],
    g: GrammarParams,
    cfg: DomainSolverConfig | None = None,
) -> Optional[LinearExpr]:
    """Smallest expression consistent with every example, or None.

    Deterministic: ties are broken by the fixed pattern order (fewer nonzero
    coefficients first, then pattern shape) and by ascending magnitude within
    a pattern.  The empty example set yields the constant 0.
    """
    cfg = cfg or DomainSolverConfig()
    seen: dict[tuple[int, ...], int] = {}
    inputs: list[tuple[int, ...]] = []
    outputs: list[int] = []
    for ex in examples:
        prev = seen.get(ex.input)
        if prev is not None:
            if prev != ex.output:
                return None
            continue
        seen[ex.input] = ex.output
        inputs.append(ex.input)
        outputs.append(ex.output)
    if not inputs:
        return LinearExpr.zero()

    n = g.num_vars
    rows = [[1, *inp, out] for inp, out in zip(inputs, outputs)]
    reduced = _eliminate(rows)
    if reduced is None:
        return None
    red_rows, pivots = reduced

    if len(pivots) == n + 1:
        # Unique rational solution: integrality plus caps decide everything.
        values = [0] * (n + 1)
        for row, pc in zip(red_rows, pivots):
            if row[-1] % row[pc]:
                return None
            values[pc] = row[-1] // row[pc]
        const, coeff_vals = values[0], values[1:]
        if not _const_ok(const, g, cfg):
            return None
        if not all(_coeff_ok(a, g, cfg) for a in coeff_vals):
            return None
        return LinearExpr.make(const, {i: a for i, a in enumerate(coeff_vals) if a})

    for nodes, classes, has_const in _patterns_for(n):
        if nodes > cfg.size_cap:
            break
        expr = _solve_pattern(inputs, outputs, classes, has_const, g, cfg)
        if expr is not None:
            return expr
    return None
