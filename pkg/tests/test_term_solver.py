import random

import pytest

from polygen import (
    DomainSolverConfig,
    Example,
    GrammarParams,
    LinearExpr,
    PbeTask,
    SynthesisFailure,
    TermSolverConfig,
    covered,
    eval_expr,
    get_candidates,
    node_count,
    search_terms,
    solve_terms,
)
from polygen.term_solver import default_domain_solver

X1 = LinearExpr.make(1, {0: 1})
Y1 = LinearExpr.make(1, {1: 1})
Z1 = LinearExpr.make(1, {2: 1})


def full(task):
    return frozenset(range(len(task)))


def test_get_candidates_monte_carlo_hit_rate(nine_task):
    # With k = 3 and n_t = 2 the sampler runs 2 * 3^2 = 18 turns; a turn
    # that draws two examples of one target term keeps that term, so a run
    # keeps at least one of {x0+1, x1+1, x2+1} with probability at least
    # 1 - (1 - (1/3)^2)^18 ~ 0.88.
    cfg = TermSolverConfig()
    solver = default_domain_solver()
    hits = 0
    runs = 1000
    for seed in range(runs):
        rng = random.Random(seed)
        result = get_candidates(nine_task, full(nine_task), 3, 2, 5, cfg, rng, solver)
        if {X1, Y1, Z1} & set(result):
            hits += 1
    assert hits / runs >= 0.88
    # every kept candidate covers at least |T|/k examples
    rng = random.Random(7)
    for p in get_candidates(nine_task, full(nine_task), 3, 2, 5, cfg, rng, solver):
        assert 3 * len(covered(p, nine_task)) >= 9


def test_get_candidates_single_example():
    g = GrammarParams(1, -5, 5)
    task = PbeTask([Example((2,), 3)], g)
    cfg = TermSolverConfig()
    result = get_candidates(
        task, full(task), 1, 1, 5, cfg, random.Random(0), default_domain_solver()
    )
    assert result == [LinearExpr(3, ())]


def test_get_candidates_all_bottom():
    # No pair of examples admits a linear fit within the caps, and k forces
    # full coverage, so every sampled fit is rejected.
    g = GrammarParams(1, -2, 2)
    task = PbeTask([Example((0,), 2), Example((1,), 0), Example((2,), 2)], g)
    solver = default_domain_solver(DomainSolverConfig(coeff_cap=1, const_cap=2))
    result = get_candidates(
        task, full(task), 1, 2, 4, TermSolverConfig(), random.Random(3), solver
    )
    assert result == []


def test_search_terms_nine_examples(nine_task):
    cfg = TermSolverConfig()
    solver = default_domain_solver()
    expected = [
        frozenset({0, 1, 2}),
        frozenset({3, 4, 5}),
        frozenset({6, 7, 8}),
    ]
    for attempt in range(5):  # success is probabilistic; retry a few seeds
        rng = random.Random(attempt)
        result = search_terms(
            nine_task, full(nine_task), 3, 3, 4, cfg, rng, solver, memo=set()
        )
        if result is not None:
            got = sorted((covered(p, nine_task) for p in result), key=sorted)
            assert got == sorted(expected, key=sorted)
            break
    else:
        pytest.fail("search_terms never found the three-term cover")


def test_search_terms_empty_and_k_zero(nine_task):
    cfg = TermSolverConfig()
    solver = default_domain_solver()
    rng = random.Random(0)
    assert search_terms(nine_task, frozenset(), 3, 2, 3, cfg, rng, solver) == []
    assert search_terms(nine_task, full(nine_task), 0, 2, 3, cfg, rng, solver) is None


def test_solve_terms_motivating(nine_task):
    terms = solve_terms(nine_task, TermSolverConfig(rng_seed=0))
    assert len(terms) <= 3
    uncovered = set(range(9))
    for t in terms:
        uncovered -= covered(t, nine_task)
    assert not uncovered


def test_solve_terms_pure_linear_target():
    rng = random.Random(7)
    g = GrammarParams(2, -2, 2)
    seen, examples = set(), []
    while len(examples) < 50:
        w = (rng.randint(-50, 50), rng.randint(-50, 50))
        if w in seen:
            continue
        seen.add(w)
        examples.append(Example(w, w[0] + 2 * w[1] + 1))
    task = PbeTask(examples, g)
    terms = solve_terms(task, TermSolverConfig(rng_seed=3))
    assert terms == [LinearExpr.make(1, {0: 1, 1: 2})]
    # brute-force check: no smaller expression fits all examples
    assert node_count(terms[0]) == 7


def test_solve_terms_adversarial_needs_singletons():
    g = GrammarParams(1, -2, 2)
    task = PbeTask(
        [Example((0,), 2), Example((1,), 0), Example((2,), -2)], g
    )
    cfg_small = DomainSolverConfig(coeff_cap=1, const_cap=2)
    solver = default_domain_solver(cfg_small)
    # pairwise-fit oracle: no expression within the caps covers two examples
    for i in range(3):
        for j in range(i + 1, 3):
            for a0 in range(-2, 3):
                for a1 in (-1, 0, 1):
                    fits = all(
                        a0 + a1 * task.examples[k].input[0]
                        == task.examples[k].output
                        for k in (i, j)
                    )
                    assert not fits
    terms = solve_terms(task, TermSolverConfig(rng_seed=0), solver)
    assert len(terms) == len(task)


def test_solve_terms_empty_task(grammar3):
    assert solve_terms(PbeTask([], grammar3), TermSolverConfig()) == []


def test_solve_terms_unrealizable_reports_partial():
    g = GrammarParams(1, -1, 1)
    task = PbeTask([Example((0,), 40), Example((1,), -17)], g)
    solver = default_domain_solver(DomainSolverConfig(coeff_cap=1, const_cap=1))
    with pytest.raises(SynthesisFailure) as err:
        solve_terms(task, TermSolverConfig(rng_seed=0, s_cap=3), solver)
    assert err.value.total == 2


def test_solve_terms_reproducible(nine_task):
    a = solve_terms(nine_task, TermSolverConfig(rng_seed=123))
    b = solve_terms(nine_task, TermSolverConfig(rng_seed=123))
    assert a == b


def test_solve_terms_size_discipline(nine_task):
    cfg = TermSolverConfig(rng_seed=5)
    terms = solve_terms(nine_task, cfg)
    # every returned term respects some admitted filter bound; with the
    # final success at (s, n_t) the loosest active bound is c * s_cap
    for t in terms:
        assert node_count(t) <= cfg.c * cfg.s_cap


def test_lemma_sample_floor(nine_task):
    # any produced cover has a member covering >= |T| / |P| examples
    for seed in range(5):
        terms = solve_terms(nine_task, TermSolverConfig(rng_seed=seed))
        best = max(len(covered(t, nine_task)) for t in terms)
        assert best * len(terms) >= len(nine_task)


def test_memo_disable_preserves_coverage(nine_task):
    cfg = TermSolverConfig()
    solver = default_domain_solver()
    result = search_terms(
        nine_task, full(nine_task), 3, 3, 4, cfg, random.Random(1), solver,
        memo=None,
    )
    if result is not None:
        uncovered = set(range(9))
        for t in result:
            uncovered -= covered(t, nine_task)
        assert not uncovered
