import pytest

from polygen import Example, GrammarParams, PbeTask, parse_program

# The nine-example conditional task used across the suite, together with
# its ground-truth program over inputs (x0, x1, x2).
NINE_ROWS = [
    ((0, 1, 2), 1),
    ((1, 0, 2), 2),
    ((-1, 3, 2), 0),
    ((0, 2, 0), 3),
    ((-1, 3, 0), 4),
    ((-1, 1, -1), 2),
    ((0, 0, 1), 2),
    ((-3, 3, -2), -1),
    ((-1, 0, 4), 5),
]

TARGET_TEXT = """
(ite (<= 1 (+ x0 x1))
     (ite (<= 1 (+ x0 x2)) (+ x0 1) (+ x1 1))
     (ite (<= 1 (+ x1 x2)) (+ x2 1) (+ x1 1)))
"""


@pytest.fixture(scope="session")
def grammar3():
    return GrammarParams(3, -1, 1)


@pytest.fixture(scope="session")
def trap_grammar():
    return GrammarParams(3, -1, 5)


@pytest.fixture(scope="session")
def nine_task(grammar3):
    return PbeTask([Example(i, o) for i, o in NINE_ROWS], grammar3)


@pytest.fixture(scope="session")
def trap_task(trap_grammar):
    return PbeTask([Example(i, o) for i, o in NINE_ROWS], trap_grammar)


@pytest.fixture(scope="session")
def target_program():
    return parse_program(TARGET_TEXT)
