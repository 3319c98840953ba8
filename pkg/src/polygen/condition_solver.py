"""Boolean condition synthesis: clause solver and DNF solver.

The clause solver collects every literal that holds on all positive inputs
and greedily simplifies that conjunction by weighted set cover over the
negatives.  The DNF solver assembles clauses from an incrementally
maintained representative set, backtracking over clause choices, with an
outer loop widening the clause count, literal size bound, and clause size
budget until the task separates.

Internally, literal truth values over the task's points are bitmasks, and a
representative clause is recovered from its positive-satisfaction mask m as
{l : truth(l) covers m}, the unique maximal member of m's equivalence
class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .conditions import Atom, Clause, CmpOp, Dnf, Literal
from .expr import LinearExpr
from .grammar import GrammarParams
from .term_solver import SynthesisFailure


@dataclass(frozen=True)
class BoolTask:
    """Positive and negative input points for one branch condition."""

    positives: frozenset[tuple[int, ...]]
    negatives: frozenset[tuple[int, ...]]
    arity: int

    def __post_init__(self) -> None:
        overlap = self.positives & self.negatives
        if overlap:
            raise ValueError(f"inputs marked both positive and negative: {overlap}")

    def size(self) -> int:
        return len(self.positives) + len(self.negatives)


@dataclass(frozen=True)
class CondSolverConfig:
    c0: float = 2.0
    s_cap: int = 24
    literal_semantic_dedup: bool = True

    def __post_init__(self) -> None:
        if self.c0 <= 0:
            raise ValueError("c0 must be positive")
        if self.s_cap < 1:
            raise ValueError("s_cap must be positive")


# ---------------------------------------------------------------------------
# atom enumeration

_ATOM_CACHE: dict[tuple, tuple[Atom, ...]] = {}


def _coeff_values(g: GrammarParams) -> list[int]:
    vals = {1, -1}
    vals.update(v for v in range(g.const_min, g.const_max + 1) if abs(v) >= 2)
    return sorted(vals)


def _raw_atoms(g: GrammarParams, size_bound: int) -> tuple[Atom, ...]:
    key = (g, size_bound)
    cached = _ATOM_CACHE.get(key)
    if cached is not None:
        return cached
    coeff_vals = _coeff_values(g)
    const_vals = list(range(g.const_min, g.const_max + 1))
    atoms: set[Atom] = set()

    def emit(coeffs: dict[int, int], const: int) -> None:
        lhs = LinearExpr.make(const, coeffs)
        for op in (CmpOp.LT, CmpOp.LE, CmpOp.EQ):
            atom = Atom.make(lhs, op)
            if atom.lhs.coeffs and atom.node_count() <= size_bound:
                atoms.add(atom)

    def extend(start: int, coeffs: dict[int, int], used_nodes: int) -> None:
        # Loose lower bound on the final count: monomial nodes, one node for
        # a nonzero constant, and the comparison itself.
        for const in const_vals:
            const_nodes = 1 if const != 0 else 0
            if used_nodes + const_nodes + 1 <= size_bound:
                emit(coeffs, const)
        for i in range(start, g.num_vars):
            for v in coeff_vals:
                # The two-sided rendering gives every monomial a positive
                # coefficient, so only the magnitude matters for cost.
                cost = 1 if abs(v) == 1 else 3
                if used_nodes + cost + 1 > size_bound:
                    continue
                coeffs[i] = v
                extend(i + 1, coeffs, used_nodes + cost)
                del coeffs[i]

    extend(0, {}, 0)
    result = tuple(sorted(atoms, key=lambda a: (a.node_count(), a.sort_key())))
    _ATOM_CACHE[key] = result
    return result


def enumerate_conditions(
    g: GrammarParams,
    size_bound: int,
    inputs: Iterable[tuple[int, ...]] | None = None,
    semantic_dedup: bool = True,
) -> tuple[Atom, ...]:
    """Canonical atoms with node count <= size_bound and in-range constants.

    With ``inputs`` given and dedup enabled, atoms that evaluate identically
    on every observed input collapse to the smallest representative.
    """
    atoms = _raw_atoms(g, size_bound)
    if inputs is None or not semantic_dedup:
        return atoms
    points = sorted(set(inputs))
    seen: dict[tuple[bool, ...], Atom] = {}
    for atom in atoms:  # already sorted smallest-first
        vec = tuple(atom.holds(p) for p in points)
        if vec not in seen:
            seen[vec] = atom
    return tuple(sorted(seen.values(), key=lambda a: (a.node_count(), a.sort_key())))


def literals_for(atoms: Iterable[Atom]) -> list[Literal]:
    lits = [Literal(a, False) for a in atoms] + [Literal(a, True) for a in atoms]
    lits.sort(key=lambda l: (l.node_count(), l.sort_key()))
    return lits


# ---------------------------------------------------------------------------
# bitmask context shared by the clause and DNF machinery


class _MaskContext:
    """Literal truth bitmasks over a task's positive and negative points.

    With ``dedup_truth`` literals are collapsed by their joint truth vector
    over the task's points, keeping the smallest representative; clauses
    over the survivors express the same point separations.
    """

    def __init__(
        self, literals: Sequence[Literal], t: BoolTask, dedup_truth: bool = False
    ):
        self.pos_points = sorted(t.positives)
        self.neg_points = sorted(t.negatives)
        self.full_pos = (1 << len(self.pos_points)) - 1
        self.full_neg = (1 << len(self.neg_points)) - 1
        self.literals: list[Literal] = []
        self.pos_masks: list[int] = []
        self.neg_masks: list[int] = []
        self.sizes: list[int] = []
        ordered = sorted(literals, key=lambda l: (l.node_count(), l.sort_key()))
        seen: set[tuple[int, int]] = set()
        for lit in ordered:
            pm = 0
            for b, p in enumerate(self.pos_points):
                if lit.holds(p):
                    pm |= 1 << b
            nm = 0
            for b, p in enumerate(self.neg_points):
                if lit.holds(p):
                    nm |= 1 << b
            if dedup_truth:
                if (pm, nm) in seen:
                    continue
                seen.add((pm, nm))
            self.literals.append(lit)
            self.pos_masks.append(pm)
            self.neg_masks.append(nm)
            self.sizes.append(lit.node_count())
        self._clause_info: dict[int, Optional[tuple[int, int, tuple[int, ...]]]] = {}

    def maximal_clause_indices(self, mask: int) -> list[int]:
        """Members of the largest clause whose positive-satisfaction is mask."""
        return [
            i for i, pm in enumerate(self.pos_masks) if pm & mask == mask
        ]

    def clause_info(self, mask: int) -> Optional[tuple[int, int, tuple[int, ...]]]:
        """Simplified representative clause for a satisfaction mask.

        Returns (clause positive mask, node count, chosen literal indices),
        or None when the class' maximal clause cannot falsify every
        negative.  Independent of any live subset, hence cached.
        """
        hit = self._clause_info.get(mask, False)
        if hit is not False:
            return hit
        members = self.maximal_clause_indices(mask)
        neg_sat = self.full_neg
        for i in members:
            neg_sat &= self.neg_masks[i]
            if not neg_sat:
                break
        info = None
        if not neg_sat:
            chosen = self.greedy_simplify(members)
            if chosen is not None:
                clause_pos = self.full_pos
                nodes = 1 if not chosen else 0
                for i in chosen:
                    clause_pos &= self.pos_masks[i]
                    nodes += self.sizes[i]
                nodes += max(0, len(chosen) - 1)
                info = (clause_pos, nodes, tuple(sorted(chosen)))
        self._clause_info[mask] = info
        return info

    def reachable_masks(self, k: int) -> list[int]:
        """Positive-satisfaction masks meeting the 1/k coverage floor.

        Incremental closure under intersection with each literal's mask,
        pruned by the floor; mirrors inserting literals one at a time and
        keeping the maximal clause per satisfaction class.
        """
        total = len(self.pos_points)
        masks: set[int] = {self.full_pos}
        for pm in self.pos_masks:
            additions = []
            for m in masks:
                m2 = m & pm
                if m2 not in masks and k * m2.bit_count() >= total:
                    additions.append(m2)
            masks.update(additions)
        return sorted(masks)

    def greedy_simplify(self, member_indices: Sequence[int]) -> Optional[list[int]]:
        """Weighted set cover over negatives within the given clause members.

        Returns chosen literal indices, or None when the members cannot
        falsify every negative.  Ties prefer smaller size, then the literal
        order (which is canonical by construction).
        """
        members = sorted(
            member_indices,
            key=lambda i: (self.sizes[i], self.literals[i].sort_key()),
        )
        rem = self.full_neg
        chosen: list[int] = []
        while rem:
            best = None
            best_cov = 0
            best_size = 1
            for i in members:
                cov = (rem & ~self.neg_masks[i] & self.full_neg).bit_count()
                if cov == 0:
                    continue
                if best is None or cov * best_size > best_cov * self.sizes[i]:
                    best = i
                    best_cov = cov
                    best_size = self.sizes[i]
            if best is None:
                return None
            chosen.append(best)
            rem &= self.neg_masks[best]
        return chosen

    def clause_of(self, indices: Iterable[int]) -> Clause:
        return Clause.of(self.literals[i] for i in indices)


# ---------------------------------------------------------------------------
# clause solver

def simplify_clause(candidate: Clause, t: BoolTask) -> Clause:
    """Greedy weighted set cover over the negatives.

    Repeatedly picks the literal falsifying the most still-uncovered
    negatives per unit of size (ties: smaller size, then canonical order)
    until every negative is falsified.  The result is a subset of the
    candidate, so it still holds on every positive the candidate holds on.
    """
    ctx = _MaskContext(candidate.sorted_literals(), t)
    chosen = ctx.greedy_simplify(range(len(ctx.literals)))
    if chosen is None:
        raise ValueError("candidate clause does not falsify every negative")
    return ctx.clause_of(chosen)


def clause_solve(literals: Iterable[Literal], t: BoolTask) -> Optional[Clause]:
    """Largest clause true on all positives, simplified; None if it cannot
    falsify every negative."""
    ctx = _MaskContext(list(literals), t)
    usable = [
        i for i in range(len(ctx.literals)) if ctx.pos_masks[i] == ctx.full_pos
    ]
    chosen = ctx.greedy_simplify(usable)
    if chosen is None:
        return None
    return ctx.clause_of(chosen)


# ---------------------------------------------------------------------------
# representative clauses and the DNF solver

def representative_clauses(
    literals: Sequence[Literal],
    positives: Iterable[tuple[int, ...]],
    k: int,
) -> set[frozenset[Literal]]:
    """Maximal clauses per positive-satisfaction class meeting the 1/k floor."""
    t = BoolTask(frozenset(positives), frozenset(), 0)
    ctx = _MaskContext(literals, t)
    return {
        frozenset(ctx.literals[i] for i in ctx.maximal_clause_indices(m))
        for m in ctx.reachable_masks(k)
    }


def get_possible_clauses(
    literals: Sequence[Literal], t: BoolTask, k: int
) -> list[Clause]:
    """Representative clauses that falsify all negatives, simplified.

    Ordered by (node count, canonical key) for deterministic search.
    """
    ctx = _MaskContext(literals, t)
    out: dict[frozenset[Literal], Clause] = {}
    for mask in ctx.reachable_masks(k):
        info = ctx.clause_info(mask)
        if info is None:
            continue
        clause = ctx.clause_of(info[2])
        out[clause.literals] = clause
    return sorted(out.values(), key=Clause.sort_key)


# Safety valve for adversarially clustered tasks, where the number of
# distinct satisfaction classes can grow exponentially.  Classes with the
# widest positive coverage are kept; ties resolve deterministically by mask
# value.  Brute-force-checkable instances stay far below the cap.
_MASK_CAP = 20000


def _masked_possible_clauses(
    ctx: _MaskContext, live_pos: int, live_count: int, k: int
) -> list[tuple[int, int, tuple[int, ...]]]:
    """(clause positive-mask, node count, chosen indices) for the live set."""
    if live_count == 0:
        return []
    masks: set[int] = {live_pos}
    for pm in ctx.pos_masks:
        additions = []
        for m in masks:
            m2 = m & pm
            if m2 not in masks and k * m2.bit_count() >= live_count:
                additions.append(m2)
        masks.update(additions)
        if len(masks) > 4 * _MASK_CAP:
            trimmed = sorted(masks, key=lambda m: (-m.bit_count(), m))[:_MASK_CAP]
            masks = set(trimmed)
    if len(masks) > _MASK_CAP:
        masks = set(sorted(masks, key=lambda m: (-m.bit_count(), m))[:_MASK_CAP])
    out: dict[tuple[int, ...], tuple[int, int]] = {}
    for mask in masks:
        info = ctx.clause_info(mask)
        if info is None:
            continue
        clause_pos, nodes, key = info
        if key not in out:
            out[key] = (clause_pos, nodes)
    rows = [(pos, nodes, key) for key, (pos, nodes) in out.items()]
    rows.sort(
        key=lambda r: (
            r[1],
            -(r[0] & live_pos).bit_count(),
            tuple(ctx.literals[i].sort_key() for i in r[2]),
        )
    )
    return rows


def dnf_search(
    literals: Sequence[Literal],
    t: BoolTask,
    k: int,
    s: int,
    cfg: CondSolverConfig,
    memo: Optional[set] = None,
    _ctx: Optional[_MaskContext] = None,
) -> Optional[Dnf]:
    """Backtracking over representative clauses; None when no DNF of <= k
    clauses within the size budget separates the task.

    Literals with identical truth vectors over the task's points collapse
    to their smallest representative before the search.
    """
    ctx = _ctx if _ctx is not None else _MaskContext(literals, t, dedup_truth=True)
    budget = cfg.c0 * s * max(1.0, math.log(max(t.size(), 1)))
    memo_set = memo if memo is not None else None

    def search(live_pos: int, k: int) -> Optional[list[tuple[int, ...]]]:
        if live_pos == 0:
            return []
        key = (live_pos, k)
        if k == 0 or (memo_set is not None and key in memo_set):
            return None
        live_count = live_pos.bit_count()
        for clause_pos, nodes, indices in _masked_possible_clauses(
            ctx, live_pos, live_count, k
        ):
            if nodes > budget:
                continue
            tail = search(live_pos & ~clause_pos, k - 1)
            if tail is not None:
                return [indices] + tail
        if memo_set is not None:
            memo_set.add(key)
        return None

    result = search(ctx.full_pos, k)
    if result is None:
        return None
    return Dnf(tuple(ctx.clause_of(idx) for idx in result))


def dnf_solve(t: BoolTask, g: GrammarParams, cfg: CondSolverConfig | None = None) -> Dnf:
    """Full DNF synthesis loop.

    Iterates s = 1, 2, ...; each round allows k up to ceil(c0*s) and literal
    size bound s' up to s, visiting unvisited (k, s') cells in ascending
    (k + s', k) order.  The returned DNF is true on every positive input
    and false on every negative one.
    """
    cfg = cfg or CondSolverConfig()
    inputs = tuple(sorted(t.positives | t.negatives))
    visited: set[tuple[int, int]] = set()
    ctx_cache: dict[int, tuple[list[Literal], _MaskContext]] = {}
    for s in range(1, cfg.s_cap + 1):
        k_l = math.ceil(cfg.c0 * s)
        cells = sorted(
            (
                (k, sp)
                for k in range(1, k_l + 1)
                for sp in range(1, s + 1)
                if (k, sp) not in visited
            ),
            key=lambda cell: (cell[0] + cell[1], cell[0]),
        )
        for k, sp in cells:
            visited.add((k, sp))
            cached = ctx_cache.get(sp)
            if cached is None:
                atoms = enumerate_conditions(
                    g,
                    sp,
                    inputs if cfg.literal_semantic_dedup else None,
                    cfg.literal_semantic_dedup,
                )
                lits = literals_for(atoms)
                cached = (lits, _MaskContext(lits, t, dedup_truth=True))
                ctx_cache[sp] = cached
            lits, ctx = cached
            if not lits and t.positives and t.negatives:
                continue
            memo: set = set()
            d = dnf_search(lits, t, k, s, cfg, memo, _ctx=ctx)
            if d is not None:
                assert all(d.holds(p) for p in t.positives)
                assert not any(d.holds(p) for p in t.negatives)
                return d
    raise SynthesisFailure(
        f"no separating condition within s_cap={cfg.s_cap} "
        f"({len(t.positives)} positives, {len(t.negatives)} negatives)"
    )
