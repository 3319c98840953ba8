"""Textual formats: task files and s-expression programs.

Task file: first line ``vars <n> consts <min> <max>``, then one example per
line ``in <i1> ... <in> out <o>``; ``#`` starts a comment.  Programs use
s-expressions like ``(ite (and (>= (+ x0 x1) 1) ...) (+ x0 1) ...)`` with
variables ``x0 .. x{n-1}``.  Parsing yields canonical forms (trees for
conditional programs); serializing a canonical form and parsing it back is
the identity.
"""

from __future__ import annotations

import re
from typing import Iterator

from .conditions import Atom, Clause, CmpOp, Dnf, Literal, dnf_and, dnf_not, dnf_or
from .expr import LinearExpr
from .grammar import GrammarParams
from .programs import DecisionList, IteTree, Program, Term
from .tasks import ConflictingExamplesError, Example, PbeTask


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + where)


# ---------------------------------------------------------------------------
# s-expression layer


class _Token:
    __slots__ = ("text", "line", "col")

    def __init__(self, text: str, line: int, col: int):
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> Iterator[_Token]:
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";" or ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield _Token(ch, line, col)
            col += 1
            i += 1
        else:
            m = re.match(r"[^\s()]+", text[i:])
            word = m.group(0)
            yield _Token(word, line, col)
            col += len(word)
            i += len(word)


def _read_sexpr(tokens: list[_Token], pos: int):
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[pos]
    if tok.text == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise ParseError("unclosed '('", tok.line, tok.col)
            if tokens[pos].text == ")":
                return items, pos + 1
            node, pos = _read_sexpr(tokens, pos)
            items.append(node)
    if tok.text == ")":
        raise ParseError("unexpected ')'", tok.line, tok.col)
    return tok, pos + 1


_INT_RE = re.compile(r"-?\d+$")
_VAR_RE = re.compile(r"x(\d+)$")


def _expr_of(node) -> LinearExpr:
    if isinstance(node, _Token):
        if _INT_RE.match(node.text):
            return LinearExpr(int(node.text), ())
        m = _VAR_RE.match(node.text)
        if m:
            return LinearExpr.var(int(m.group(1)))
        raise ParseError(f"expected integer or variable, got {node.text!r}",
                         node.line, node.col)
    if not node:
        raise ParseError("empty expression")
    head = node[0]
    if not isinstance(head, _Token):
        raise ParseError("expression operator must be a symbol")
    args = [_expr_of(a) for a in node[1:]]
    if head.text == "+":
        if not args:
            raise ParseError("'+' needs operands", head.line, head.col)
        acc = args[0]
        for a in args[1:]:
            acc = acc.add(a)
        return acc
    if head.text == "-":
        if len(args) == 1:
            return args[0].negate()
        if len(args) == 2:
            return args[0].add(args[1].negate())
        raise ParseError("'-' takes one or two operands", head.line, head.col)
    if head.text == "*":
        if len(args) != 2:
            raise ParseError("'*' takes two operands", head.line, head.col)
        a, b = args
        if not a.coeffs:
            return b.scale(a.constant)
        if not b.coeffs:
            return a.scale(b.constant)
        raise ParseError("nonlinear product", head.line, head.col)
    raise ParseError(f"unknown term operator {head.text!r}", head.line, head.col)


_CMP_OPS = {"<", "<=", "=", ">=", ">"}


def _cond_of(node) -> Dnf:
    if isinstance(node, _Token):
        if node.text == "true":
            return Dnf.true()
        if node.text == "false":
            return Dnf.false()
        raise ParseError(f"expected condition, got {node.text!r}", node.line, node.col)
    if not node or not isinstance(node[0], _Token):
        raise ParseError("malformed condition")
    head = node[0]
    if head.text in _CMP_OPS:
        if len(node) != 3:
            raise ParseError("comparison takes two operands", head.line, head.col)
        atom = Atom.from_comparison(_expr_of(node[1]), head.text, _expr_of(node[2]))
        return Dnf.of_atom(atom)
    if head.text == "and":
        acc = Dnf.true()
        for child in node[1:]:
            acc = dnf_and(acc, _cond_of(child))
        return acc
    if head.text == "or":
        acc = Dnf.false()
        for child in node[1:]:
            acc = dnf_or(acc, _cond_of(child))
        return acc
    if head.text == "not":
        if len(node) != 2:
            raise ParseError("'not' takes one operand", head.line, head.col)
        return dnf_not(_cond_of(node[1]))
    raise ParseError(f"unknown condition operator {head.text!r}", head.line, head.col)


def _program_of(node) -> Program:
    if isinstance(node, list) and node and isinstance(node[0], _Token) \
            and node[0].text == "ite":
        if len(node) != 4:
            raise ParseError("'ite' takes three operands", node[0].line, node[0].col)
        return IteTree(_cond_of(node[1]), _program_of(node[2]), _program_of(node[3]))
    return Term(_expr_of(node))


def parse_program(text: str) -> Program:
    tokens = list(_tokenize(text))
    if not tokens:
        raise ParseError("empty program")
    node, pos = _read_sexpr(tokens, 0)
    if pos != len(tokens):
        tok = tokens[pos]
        raise ParseError("trailing input after program", tok.line, tok.col)
    return _program_of(node)


def serialize_expr(e: LinearExpr) -> str:
    operands: list[str] = []
    for idx, a in e.coeffs:
        if a == 1:
            operands.append(f"x{idx}")
        elif a == -1:
            operands.append(f"(- x{idx})")
        else:
            operands.append(f"(* {a} x{idx})")
    if e.constant != 0 or not operands:
        operands.append(str(e.constant))
    if len(operands) == 1:
        return operands[0]
    return "(+ " + " ".join(operands) + ")"


def _serialize_atom(atom: Atom) -> str:
    left, right = atom.sides()
    return f"({atom.op.value} {serialize_expr(left)} {serialize_expr(right)})"


def _serialize_literal(lit: Literal) -> str:
    body = _serialize_atom(lit.atom)
    return f"(not {body})" if lit.negated else body


def _serialize_clause(clause: Clause) -> str:
    lits = clause.sorted_literals()
    if not lits:
        return "true"
    if len(lits) == 1:
        return _serialize_literal(lits[0])
    return "(and " + " ".join(_serialize_literal(l) for l in lits) + ")"


def serialize_cond(d: Dnf) -> str:
    if not d.clauses:
        return "false"
    if len(d.clauses) == 1:
        return _serialize_clause(d.clauses[0])
    return "(or " + " ".join(_serialize_clause(c) for c in d.clauses) + ")"


def serialize_program(p: Program) -> str:
    if isinstance(p, Term):
        return serialize_expr(p.expr)
    if isinstance(p, IteTree):
        return (
            f"(ite {serialize_cond(p.cond)} "
            f"{serialize_program(p.then_branch)} {serialize_program(p.else_branch)})"
        )
    if isinstance(p, DecisionList):
        out = serialize_expr(p.default)
        for cond, term in reversed(p.branches):
            out = f"(ite {serialize_cond(cond)} {serialize_expr(term)} {out})"
        return out
    raise TypeError(f"not a program: {p!r}")


# ---------------------------------------------------------------------------
# task files


def _split_content_lines(text: str) -> list[tuple[int, list[str]]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    return rows


def parse_grammar_line(lineno: int, parts: list[str]) -> GrammarParams:
    if len(parts) != 5 or parts[0] != "vars" or parts[2] != "consts":
        raise ParseError("expected 'vars <n> consts <min> <max>'", lineno)
    try:
        n, lo, hi = int(parts[1]), int(parts[3]), int(parts[4])
    except ValueError:
        raise ParseError("grammar fields must be integers", lineno) from None
    try:
        return GrammarParams(n, lo, hi)
    except ValueError as err:
        raise ParseError(str(err), lineno) from None


def parse_example_line(lineno: int, parts: list[str], num_vars: int) -> Example:
    if (
        len(parts) != num_vars + 3
        or parts[0] != "in"
        or parts[num_vars + 1] != "out"
    ):
        raise ParseError(f"expected 'in <{num_vars} ints> out <int>'", lineno)
    try:
        values = [int(w) for w in parts[1 : num_vars + 1]]
        out = int(parts[num_vars + 2])
    except ValueError:
        raise ParseError("example fields must be integers", lineno) from None
    return Example(tuple(values), out)


def parse_task(text: str) -> PbeTask:
    rows = _split_content_lines(text)
    if not rows:
        raise ParseError("task file is empty")
    lineno, parts = rows[0]
    grammar = parse_grammar_line(lineno, parts)
    examples: list[Example] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, parts in rows[1:]:
        ex = parse_example_line(lineno, parts, grammar.num_vars)
        if seen.get(ex.input, ex.output) != ex.output:
            raise ParseError(
                f"input {ex.input} mapped to both {seen[ex.input]} and {ex.output}",
                lineno,
            )
        seen[ex.input] = ex.output
        examples.append(ex)
    try:
        return PbeTask(examples, grammar)
    except ConflictingExamplesError as err:  # unreachable, kept as a guard
        raise ParseError(str(err)) from None


def serialize_task(task: PbeTask) -> str:
    g = task.grammar
    lines = [f"vars {g.num_vars} consts {g.const_min} {g.const_max}"]
    for ex in task.examples:
        lines.append("in " + " ".join(str(v) for v in ex.input) + f" out {ex.output}")
    return "\n".join(lines) + "\n"
