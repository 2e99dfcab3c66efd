"""Replacement-function expression language.

A tiny total language for computed form fields: decimal literals, argument
references, ``+ - * /``, ``floor(e)``, comparisons, boolean connectives with
short-circuit evaluation, guarded branch chains with a mandatory ``else``, and
a ``missing(arg)`` test for rules that tolerate absent arguments::

    if not missing(Sex) and (missing(Age) or Age > 16) then 162 + 16 * Sex
    elif missing(Sex) and Age > 16 then 170
    else floor((Age - 1) / 16 * 130 + 30.5)

Grammar (precedence low to high; every chain ends in ``else``)::

    expr   := 'if' expr 'then' expr ('elif' expr 'then' expr)* 'else' expr
            | or
    or     := and ('or' and)*
    and    := not ('and' not)*
    not    := 'not' not | cmp
    cmp    := sum (('<'|'<='|'>'|'>='|'=='|'!=') sum)?
    sum    := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | atom
    atom   := NUMBER | NAME | 'floor' '(' expr ')' | 'missing' '(' NAME ')'
            | '(' expr ')'

``and``/``or`` short-circuit, so a ``missing(x)`` guard written before a use
of ``x`` protects it.  Reading a missing argument outside such a guard raises
:class:`MissingUnhandledError` at evaluation time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union


class ExprError(ValueError):
    """Base class for expression parse and evaluation errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownArgError(ExprError):
    def __init__(self, name: str):
        super().__init__(f"expression references {name!r}, which is not an argument")
        self.name = name


class ModeViolationError(ExprError):
    def __init__(self, name: str):
        super().__init__(f"missing({name}) is only allowed in partial-mode rules")
        self.name = name


class EvalError(ExprError):
    """Base class for runtime evaluation failures."""


class DivisionByZeroError(EvalError):
    def __init__(self) -> None:
        super().__init__("division by zero")


class MissingUnhandledError(EvalError):
    def __init__(self, name: str):
        super().__init__(f"argument {name!r} is missing and not guarded by missing()")
        self.name = name


class EvalTypeError(EvalError):
    pass


class _Missing:
    """Sentinel for an unbound argument."""

    def __repr__(self) -> str:
        return "MISSING"


MISSING = _Missing()


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Arg:
    name: str


@dataclass(frozen=True)
class Missing:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # '-' | 'not'
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # '+' '-' '*' '/'
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Compare:
    op: str  # '<' '<=' '>' '>=' '==' '!='
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class BoolOp:
    op: str  # 'and' | 'or'
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Floor:
    operand: "Expression"


@dataclass(frozen=True)
class IfChain:
    branches: tuple[tuple["Expression", "Expression"], ...]  # (condition, value)
    otherwise: "Expression"


Expression = Union[Num, Arg, Missing, Unary, BinOp, Compare, BoolOp, Floor, IfChain]

KEYWORDS = frozenset(
    {"if", "then", "elif", "else", "and", "or", "not", "floor", "missing"}
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|==|!=|[<>+\-*/()])
    """,
    re.VERBOSE,
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'name' | 'keyword' | 'op' | 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            value = m.group()
            if kind == "name" and value in KEYWORDS:
                kind = "keyword"
            tokens.append(_Token(kind, value, pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, args: Sequence[str], mode: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.args = set(args)
        self.mode = mode

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            raise ExprSyntaxError(f"expected {want!r}, got {got!r}", tok.pos)
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.text == word

    def parse(self) -> Expression:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected trailing {tok.text!r}", tok.pos)
        return e

    def expr(self) -> Expression:
        if self.at_keyword("if"):
            return self.if_chain()
        return self.or_expr()

    def if_chain(self) -> Expression:
        self.expect("keyword", "if")
        branches = []
        cond = self.expr()
        self.expect("keyword", "then")
        branches.append((cond, self.expr()))
        while self.at_keyword("elif"):
            self.advance()
            cond = self.expr()
            self.expect("keyword", "then")
            branches.append((cond, self.expr()))
        self.expect("keyword", "else")
        return IfChain(tuple(branches), self.expr())

    def or_expr(self) -> Expression:
        e = self.and_expr()
        while self.at_keyword("or"):
            self.advance()
            e = BoolOp("or", e, self.and_expr())
        return e

    def and_expr(self) -> Expression:
        e = self.not_expr()
        while self.at_keyword("and"):
            self.advance()
            e = BoolOp("and", e, self.not_expr())
        return e

    def not_expr(self) -> Expression:
        if self.at_keyword("not"):
            self.advance()
            return Unary("not", self.not_expr())
        return self.comparison()

    def comparison(self) -> Expression:
        e = self.sum_expr()
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("<", "<=", ">", ">=", "==", "!="):
            self.advance()
            return Compare(tok.text, e, self.sum_expr())
        return e

    def sum_expr(self) -> Expression:
        e = self.term()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.advance().text
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expression:
        e = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op = self.advance().text
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expression:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            return Unary("-", self.unary())
        return self.atom()

    def atom(self) -> Expression:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text not in self.args:
                raise UnknownArgError(tok.text)
            return Arg(tok.text)
        if tok.kind == "keyword" and tok.text == "floor":
            self.advance()
            self.expect("op", "(")
            inner = self.expr()
            self.expect("op", ")")
            return Floor(inner)
        if tok.kind == "keyword" and tok.text == "missing":
            self.advance()
            self.expect("op", "(")
            name_tok = self.expect("name")
            self.expect("op", ")")
            if self.mode != "partial":
                raise ModeViolationError(name_tok.text)
            if name_tok.text not in self.args:
                raise UnknownArgError(name_tok.text)
            return Missing(name_tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect("op", ")")
            return inner
        got = tok.text or "end of input"
        raise ExprSyntaxError(f"expected a value, got {got!r}", tok.pos)


def parse_expression(text: str, args: Sequence[str], mode: str) -> Expression:
    """Parse ``text`` into an AST, checking names against ``args`` and mode."""
    return _Parser(text, args, mode).parse()


def eval_expr(e: Expression, env: Mapping[str, object]) -> float | bool:
    """Evaluate an expression against ``env`` (values or MISSING per arg).

    Branch chains take the first true condition; ``and``/``or`` short-circuit;
    reading a MISSING argument raises :class:`MissingUnhandledError`.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Arg):
        value = env[e.name]
        if value is MISSING:
            raise MissingUnhandledError(e.name)
        return _require_number(value, f"argument {e.name!r}")
    if isinstance(e, Missing):
        return env[e.name] is MISSING
    if isinstance(e, Unary):
        inner = eval_expr(e.operand, env)
        if e.op == "-":
            return -_require_number(inner, "unary minus operand")
        return not _require_bool(inner, "'not' operand")
    if isinstance(e, BinOp):
        left = _require_number(eval_expr(e.left, env), f"left side of {e.op!r}")
        right = _require_number(eval_expr(e.right, env), f"right side of {e.op!r}")
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if right == 0:
            raise DivisionByZeroError()
        return left / right
    if isinstance(e, Compare):
        left = _require_number(eval_expr(e.left, env), f"left side of {e.op!r}")
        right = _require_number(eval_expr(e.right, env), f"right side of {e.op!r}")
        return {
            "<": left < right,
            "<=": left <= right,
            ">": left > right,
            ">=": left >= right,
            "==": left == right,
            "!=": left != right,
        }[e.op]
    if isinstance(e, BoolOp):
        left = _require_bool(eval_expr(e.left, env), f"left side of {e.op!r}")
        if e.op == "and" and not left:
            return False
        if e.op == "or" and left:
            return True
        return _require_bool(eval_expr(e.right, env), f"right side of {e.op!r}")
    if isinstance(e, Floor):
        return float(math.floor(_require_number(eval_expr(e.operand, env), "floor operand")))
    if isinstance(e, IfChain):
        for cond, value in e.branches:
            if _require_bool(eval_expr(cond, env), "branch condition"):
                return eval_expr(value, env)
        return eval_expr(e.otherwise, env)
    raise EvalTypeError(f"unknown expression node {e!r}")


def referenced_args(e: Expression) -> frozenset[str]:
    """All argument names the expression mentions (reads and missing-tests)."""
    out: set[str] = set()

    def visit(node: Expression) -> None:
        if isinstance(node, (Arg, Missing)):
            out.add(node.name)
        elif isinstance(node, Unary):
            visit(node.operand)
        elif isinstance(node, (BinOp, Compare, BoolOp)):
            visit(node.left)
            visit(node.right)
        elif isinstance(node, Floor):
            visit(node.operand)
        elif isinstance(node, IfChain):
            for cond, value in node.branches:
                visit(cond)
                visit(value)
            visit(node.otherwise)

    visit(e)
    return frozenset(out)


def _require_number(value: object, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise EvalTypeError(f"{where} must be a number, got {value!r}")
    return float(value)


def _require_bool(value: object, where: str) -> bool:
    if not isinstance(value, bool):
        raise EvalTypeError(f"{where} must be a condition, got {value!r}")
    return value
