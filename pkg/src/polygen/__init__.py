"""Programming-by-example synthesis for conditional linear integer
arithmetic: a sampling solver with an Occam-style size guarantee, an
enumerative baseline, and an oracle-guided benchmark harness."""

from .conditions import Atom, Clause, CmpOp, Dnf, Literal, eval_cond
from .condition_solver import (
    BoolTask,
    CondSolverConfig,
    clause_solve,
    dnf_search,
    dnf_solve,
    enumerate_conditions,
    get_possible_clauses,
    representative_clauses,
    simplify_clause,
)
from .domain_solver import DomainSolverConfig, synth_min_linear
from .eusolver import enum_terms, eusolver_solve, id3_unify
from .expr import LinearExpr, eval_expr
from .grammar import GrammarParams, GrammarRangeError
from .io import (
    ParseError,
    parse_program,
    parse_task,
    serialize_program,
    serialize_task,
)
from .oracle import (
    OracleConfig,
    SynthesisReport,
    cegis_loop,
    random_loop,
    verify_equiv,
)
from .programs import (
    DecisionList,
    IteTree,
    Program,
    Term,
    TreeLeaf,
    eval_program,
    node_count,
    program_size,
    to_decision_list,
)
from .tasks import ConflictingExamplesError, Example, PbeTask, covered
from .term_solver import (
    SynthesisFailure,
    TermSolverConfig,
    get_candidates,
    search_terms,
    solve_terms,
)
from .unifier import (
    ConsistencyError,
    build_condition_task,
    polygen_solve,
    unify,
)

__all__ = [
    "Atom", "BoolTask", "Clause", "CmpOp", "CondSolverConfig",
    "ConflictingExamplesError", "ConsistencyError", "DecisionList",
    "Dnf", "DomainSolverConfig", "Example", "GrammarParams",
    "GrammarRangeError", "IteTree", "LinearExpr", "Literal", "OracleConfig",
    "ParseError", "PbeTask", "Program", "SynthesisFailure",
    "SynthesisReport", "Term", "TermSolverConfig", "TreeLeaf",
    "build_condition_task", "cegis_loop", "clause_solve", "covered",
    "dnf_search", "dnf_solve", "enum_terms", "enumerate_conditions",
    "eusolver_solve", "eval_cond", "eval_expr", "eval_program",
    "get_candidates", "get_possible_clauses", "id3_unify", "node_count",
    "parse_program", "parse_task", "polygen_solve", "program_size",
    "random_loop", "representative_clauses", "search_terms",
    "serialize_program", "serialize_task", "simplify_clause", "solve_terms",
    "synth_min_linear", "to_decision_list", "unify", "verify_equiv",
]
