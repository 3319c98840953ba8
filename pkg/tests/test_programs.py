import itertools
import math
import random

import pytest

from polygen import (
    DecisionList,
    Dnf,
    GrammarParams,
    IteTree,
    LinearExpr,
    Term,
    eval_program,
    node_count,
    program_size,
    to_decision_list,
)
from polygen.conditions import Atom, CmpOp
from polygen.eusolver import _exprs_with_budget
from polygen.domain_solver import DomainSolverConfig
from polygen.gen import random_ite_tree
from polygen.grammar import GrammarRangeError
from tests.conftest import NINE_ROWS


def test_eval_target_rows(target_program):
    for inputs, out in NINE_ROWS:
        assert eval_program(target_program, inputs) == out


def test_eval_decision_list_default():
    dl = DecisionList((), LinearExpr.make(1, {2: 1}))
    assert eval_program(dl, (-1, 0, 4)) == 5


def test_eval_bare_zero_term():
    assert eval_program(Term(LinearExpr.zero()), (7, -2)) == 0


def test_size_formula_components(grammar3):
    # The worked grammar {x, +, 1, 2} has N = 4: ceil(log2 4) * |x + 1| = 6.
    assert max(1, (4 - 1).bit_length()) * 3 == 6
    x_plus_1 = LinearExpr.make(1, {0: 1})
    assert node_count(x_plus_1) == 3
    # In any grammar with a vars, b consts, and the fixed operator set,
    # size(x0 + 1) = 3 * ceil(log2 N).
    for g in [grammar3, GrammarParams(1, -1, 1), GrammarParams(4, -12, 12)]:
        n_rules = g.num_vars + (g.const_max - g.const_min + 1) + 10
        assert g.rule_count == n_rules
        assert program_size(x_plus_1, g) == 3 * math.ceil(math.log2(n_rules))


def test_single_variable_size(grammar3):
    assert program_size(LinearExpr.var(0), grammar3) == grammar3.bits_per_rule


def test_size_out_of_range_constant(grammar3):
    with pytest.raises(GrammarRangeError):
        program_size(LinearExpr.make(3, {0: 1}), grammar3)


def test_size_additive_over_ite(grammar3):
    cond = Dnf.of_atom(Atom.make(LinearExpr.make(0, {0: 1}), CmpOp.LE))
    a = Term(LinearExpr.make(1, {0: 1}))
    b = Term(LinearExpr.var(1))
    tree = IteTree(cond, a, b)
    assert program_size(tree, grammar3) == (
        program_size(cond, grammar3)
        + program_size(a, grammar3)
        + program_size(b, grammar3)
        + grammar3.bits_per_rule
    )


def test_program_count_bound():
    # For every size bound S, the number of distinct expressions of size
    # <= S stays below 2^S (checked exhaustively on a small grammar).
    g = GrammarParams(1, -1, 1)
    cfg = DomainSolverConfig(coeff_cap=1, const_cap=1)
    exprs = []
    for budget in range(1, 7):
        exprs.extend(_exprs_with_budget(g, cfg, budget))
    assert exprs
    sizes = sorted(program_size(e, g) for e in set(exprs))
    for s in range(sizes[0], sizes[-1] + 1):
        count = sum(1 for v in sizes if v <= s)
        assert count <= 2 ** s


def test_to_decision_list_leaf():
    dl = to_decision_list(Term(LinearExpr.var(0)))
    assert dl.branches == ()
    assert dl.default == LinearExpr.var(0)


def test_to_decision_list_target(target_program, grammar3):
    dl = to_decision_list(target_program)
    assert len(dl.branches) == 2
    first_cond = dl.branches[0][0]
    assert dl.branches[0][1] == LinearExpr.make(1, {0: 1})
    # First condition is (x0 + x1 >= 1) and (x0 + x2 >= 1).
    for p in itertools.product(range(-4, 5), repeat=3):
        expected = p[0] + p[1] >= 1 and p[0] + p[2] >= 1
        assert first_cond.holds(p) == expected
    for p in itertools.product(range(-4, 5), repeat=3):
        assert eval_program(dl, p) == eval_program(target_program, p)


def test_to_decision_list_random_trees_equivalent():
    rng = random.Random(11)
    g = GrammarParams(3, -4, 4)
    samples = [
        tuple(rng.randint(-20, 20) for _ in range(3)) for _ in range(1000)
    ]
    for _ in range(40):
        tree = random_ite_tree(rng, g, depth=3)
        dl = to_decision_list(tree)
        for p in samples:
            assert eval_program(dl, p) == eval_program(tree, p)


def test_to_decision_list_size_bound_single_atom_conditions():
    rng = random.Random(5)
    g = GrammarParams(2, -4, 4)
    for _ in range(100):
        tree = random_ite_tree(rng, g, depth=3)
        dl = to_decision_list(tree)
        assert program_size(dl, g) <= 2 * program_size(tree, g) ** 2
