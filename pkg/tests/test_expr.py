import pytest
from hypothesis import given, strategies as st

from polygen import GrammarParams, LinearExpr, eval_expr
from polygen.expr import INT64_MAX, checked64


def expr(const, coeffs):
    return LinearExpr.make(const, coeffs)


def test_eval_x_plus_one_on_first_example():
    assert eval_expr(expr(1, {0: 1}), (0, 1, 2)) == 1


def test_eval_zero_expression():
    for inputs in [(0,), (5, -3), (1, 2, 3)]:
        assert eval_expr(LinearExpr.zero(), inputs) == 0


def test_eval_y_plus_one_on_fifth_example():
    assert eval_expr(expr(1, {1: 1}), (-1, 3, 0)) == 4


def test_eval_arity_mismatch():
    with pytest.raises(ValueError):
        eval_expr(expr(0, {2: 1}), (1, 2))


def test_eval_overflow_signals():
    assert eval_expr(expr(0, {0: 1}), (INT64_MAX,)) == INT64_MAX
    with pytest.raises(OverflowError):
        eval_expr(expr(1, {0: 1}), (INT64_MAX,))
    with pytest.raises(OverflowError):
        checked64(INT64_MAX + 1)


def test_make_drops_zero_coefficients_and_merges():
    e = LinearExpr.make(3, [(1, 2), (1, -2), (0, 5)])
    assert e.coeffs == ((0, 5),)
    assert e.constant == 3


def test_equality_is_semantic_for_canonical_forms():
    assert expr(1, {0: 1}) == expr(1, {0: 1, 2: 0})
    assert expr(0, {0: 1}) != expr(0, {1: 1})


def test_node_counts():
    assert expr(1, {0: 1}).node_count() == 3      # x0 + 1
    assert expr(0, {0: 1}).node_count() == 1      # x0
    assert expr(0, {0: -1}).node_count() == 2     # - x0
    assert expr(0, {0: 3}).node_count() == 3      # 3 * x0
    assert expr(0, {}).node_count() == 1          # 0
    assert expr(0, {0: 1, 1: 1}).node_count() == 3    # x0 + x1
    assert expr(2, {0: 1, 1: -1}).node_count() == 6   # x0 + (- x1) + 2


def test_grammar_range_check():
    g = GrammarParams(2, -1, 1)
    expr(1, {0: 1}).check_grammar(g)
    expr(0, {0: -1}).check_grammar(g)  # unary minus needs no constant
    with pytest.raises(ValueError):
        expr(2, {0: 1}).check_grammar(g)
    with pytest.raises(ValueError):
        expr(0, {0: 3}).check_grammar(g)
    with pytest.raises(ValueError):
        expr(0, {2: 1}).check_grammar(g)  # arity


coeff_maps = st.dictionaries(st.integers(0, 3), st.integers(-4, 4), max_size=4)


@given(const=st.integers(-4, 4), coeffs=coeff_maps)
def test_make_is_idempotent(const, coeffs):
    e = LinearExpr.make(const, coeffs)
    assert LinearExpr.make(e.constant, dict(e.coeffs)) == e


@given(const=st.integers(-4, 4), coeffs=coeff_maps,
       inputs=st.tuples(*[st.integers(-9, 9)] * 4))
def test_eval_matches_direct_sum(const, coeffs, inputs):
    e = LinearExpr.make(const, coeffs)
    expected = const + sum(a * inputs[i] for i, a in coeffs.items())
    assert eval_expr(e, inputs) == expected
