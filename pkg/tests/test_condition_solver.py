import itertools
import random

import pytest

from polygen import (
    Atom,
    BoolTask,
    Clause,
    CondSolverConfig,
    GrammarParams,
    LinearExpr,
    Literal,
    clause_solve,
    dnf_search,
    dnf_solve,
    enumerate_conditions,
    get_possible_clauses,
    representative_clauses,
    simplify_clause,
)
from polygen.condition_solver import literals_for
from polygen.gen import random_atom
from tests.conftest import NINE_ROWS

INPUTS = [r[0] for r in NINE_ROWS]


def lit_ge(coeffs, c):
    return Literal(
        Atom.from_comparison(LinearExpr.make(0, coeffs), ">=", LinearExpr(c, ()))
    )


def lit_lt(coeffs, c):
    return Literal(
        Atom.from_comparison(LinearExpr.make(0, coeffs), "<", LinearExpr(c, ()))
    )


def lit_le(coeffs, c):
    return Literal(
        Atom.from_comparison(LinearExpr.make(0, coeffs), "<=", LinearExpr(c, ()))
    )


L1 = lit_ge({0: 1, 1: 1}, 1)   # x + y >= 1
L2 = lit_ge({0: 1, 2: 1}, 1)   # x + z >= 1
L3 = lit_lt({1: 1, 2: 1}, 1)   # y + z < 1
L4 = lit_ge({0: 1, 1: 1}, 0)   # x + y >= 0
L5 = lit_le({2: 1}, 0)         # z <= 0


@pytest.fixture(scope="module")
def c1_task():
    return BoolTask(frozenset(INPUTS[:3]), frozenset(INPUTS[3:]), 3)


@pytest.fixture(scope="module")
def c2_task():
    return BoolTask(frozenset(INPUTS[3:6]), frozenset(INPUTS[6:]), 3)


def test_booltask_rejects_overlap():
    with pytest.raises(ValueError):
        BoolTask(frozenset({(0, 0, 0)}), frozenset({(0, 0, 0)}), 3)


def test_enumerate_small_arity_contains_shifts():
    g = GrammarParams(1, -1, 1)
    atoms = enumerate_conditions(g, 3)
    def has(text):
        from polygen.io import _serialize_atom
        return any(_serialize_atom(a) == text for a in atoms)
    for expected in ["(<= x0 0)", "(= x0 0)", "(< x0 0)",
                     "(<= x0 1)", "(<= x0 -1)", "(< x0 1)", "(< x0 -1)"]:
        assert has(expected), expected


def test_enumerate_below_minimum_size_is_empty():
    g = GrammarParams(1, -1, 1)
    assert enumerate_conditions(g, 2) == ()


def test_enumerate_contains_two_variable_sums(grammar3):
    from polygen.io import _serialize_atom
    atoms = {_serialize_atom(a) for a in enumerate_conditions(grammar3, 5)}
    assert "(<= 1 (+ x0 x1))" in atoms
    assert "(<= 1 (+ x0 x2))" in atoms
    assert "(<= 1 (+ x1 x2))" in atoms


def test_enumerate_semantic_dedup_keeps_smallest(grammar3):
    inputs = tuple(INPUTS)
    deduped = enumerate_conditions(grammar3, 5, inputs)
    plain = enumerate_conditions(grammar3, 5)
    assert len(deduped) < len(plain)
    seen = set()
    for a in deduped:
        vec = tuple(a.holds(p) for p in sorted(set(inputs)))
        assert vec not in seen
        seen.add(vec)


def test_simplify_clause_paper_trace(c1_task):
    result = simplify_clause(Clause.of([L1, L2, L4]), c1_task)
    assert result.literals == frozenset({L1, L2})


def test_simplify_clause_single_negative():
    t = BoolTask(frozenset(), frozenset({(1, 0, 0)}), 3)
    lit = lit_le({0: 1}, 0)
    assert simplify_clause(Clause.of([lit, L4]), t).literals == {lit}


def test_simplify_clause_requires_falsifiable_negatives(c1_task):
    with pytest.raises(ValueError):
        simplify_clause(Clause.of([L4]), c1_task)


def test_clause_solve_paper_trace(c1_task):
    result = clause_solve([L1, L2, L3, L4, L5], c1_task)
    assert result.literals == frozenset({L1, L2})


def test_clause_solve_no_negatives_gives_true():
    t = BoolTask(frozenset(INPUTS[:3]), frozenset(), 3)
    assert clause_solve([L1, L2], t) == Clause()


def test_clause_solve_bottom_when_uncoverable():
    t = BoolTask(frozenset(), frozenset({(0, 0, 0)}), 3)
    assert clause_solve([], t) is None


def test_get_possible_clauses_c2(c2_task):
    clauses = get_possible_clauses([L1, L2, L3, L4, L5], c2_task, 2)
    assert clauses
    # some clause behaves exactly like {l1} on the positive inputs
    sat_sets = {
        frozenset(p for p in c2_task.positives if c.holds(p)) for c in clauses
    }
    l1_sat = frozenset(p for p in c2_task.positives if L1.holds(p))
    assert l1_sat in sat_sets


def test_representative_clauses_match_brute_force():
    rng = random.Random(9)
    g = GrammarParams(2, -2, 2)
    for trial in range(40):
        n_lits = rng.randint(2, 8)
        literals = []
        while len(literals) < n_lits:
            lit = Literal(random_atom(rng, g), rng.random() < 0.3)
            if lit not in literals:
                literals.append(lit)
        positives = {
            (rng.randint(-3, 3), rng.randint(-3, 3))
            for _ in range(rng.randint(1, 6))
        }
        k = rng.randint(1, 3)
        got = representative_clauses(literals, positives, k)
        points = sorted(positives)
        total = len(points)
        achievable = set()
        for bits in itertools.product([0, 1], repeat=len(literals)):
            clause = frozenset(l for l, b in zip(literals, bits) if b)
            sat = frozenset(
                p for p in points if all(l.holds(p) for l in clause)
            )
            if k * len(sat) >= total:
                achievable.add(sat)
        expected = {
            # the maximal member of a class is the union of its members
            frozenset(l for l in literals if all(l.holds(p) for p in sat))
            for sat in achievable
        }
        assert got == expected, f"trial {trial}"


def test_dnf_search_single_literal_case(c1_task, grammar3):
    cfg = CondSolverConfig()
    t = BoolTask(frozenset(INPUTS[:3]), frozenset(), 3)
    d = dnf_search(literals_for(enumerate_conditions(grammar3, 3)), t, 1, 3, cfg)
    assert d is not None
    assert all(d.holds(p) for p in t.positives)


def test_dnf_search_k_zero(c1_task, grammar3):
    cfg = CondSolverConfig()
    lits = literals_for(enumerate_conditions(grammar3, 3))
    assert dnf_search(lits, c1_task, 0, 3, cfg) is None


def test_dnf_search_c2_two_clauses(c2_task, grammar3):
    cfg = CondSolverConfig()
    lits = literals_for(enumerate_conditions(grammar3, 4, tuple(INPUTS)))
    d = dnf_search(lits, c2_task, 2, 6, cfg)
    if d is not None:
        assert all(d.holds(p) for p in c2_task.positives)
        assert not any(d.holds(p) for p in c2_task.negatives)


def test_dnf_solve_c1(c1_task, grammar3):
    d = dnf_solve(c1_task, grammar3)
    assert all(d.holds(p) for p in c1_task.positives)
    assert not any(d.holds(p) for p in c1_task.negatives)


def test_dnf_solve_no_negatives(grammar3):
    t = BoolTask(frozenset(INPUTS[:2]), frozenset(), 3)
    d = dnf_solve(t, grammar3)
    assert all(d.holds(p) for p in t.positives)


def test_dnf_solve_no_positives(grammar3):
    t = BoolTask(frozenset(), frozenset(INPUTS[:2]), 3)
    d = dnf_solve(t, grammar3)
    assert d.clauses == ()


def test_dnf_solve_random_separable(grammar3):
    rng = random.Random(4)
    for _ in range(20):
        pts = set()
        while len(pts) < 6:
            pts.add(tuple(rng.randint(-4, 4) for _ in range(3)))
        pts = sorted(pts)
        atom = random_atom(rng, grammar3, coeff_range=1)
        pos = frozenset(p for p in pts if atom.holds(p))
        neg = frozenset(p for p in pts if not atom.holds(p))
        t = BoolTask(pos, neg, 3)
        d = dnf_solve(t, grammar3)
        assert all(d.holds(p) for p in pos)
        assert not any(d.holds(p) for p in neg)


def test_dnf_solve_deterministic(c1_task, grammar3):
    a = dnf_solve(c1_task, grammar3)
    b = dnf_solve(c1_task, grammar3)
    assert a == b
