"""Tokenizer, Pratt parser, printer and evaluator for generator expressions.

Grammar (standard precedence, ``^`` right-associative and binding tighter
than unary minus)::

    expr    := expr ('+'|'-') expr | expr ('*'|'/') expr
             | '-' expr | expr '^' expr
             | NUMBER | 'x' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from ..errors import DomainError, ParseError, UnknownIdentifierError
from . import elementary
from .jets import ORDER, TaylorJet


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Const, Neg, BinOp, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTION_NAMES = frozenset(elementary.FUNCTIONS)


# -- tokenizer ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    offset: int  # byte offset into the UTF-8 source


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(source)

    def byte_offset(i: int) -> int:
        return len(source[:i].encode("utf-8"))

    while True:
        while pos < n and source[pos].isspace():
            pos += 1
        if pos >= n:
            tokens.append(_Token("end", "", byte_offset(n)))
            return tokens
        m = _TOKEN.match(source, pos)
        if m is None or m.lastgroup is None:
            raise ParseError(f"unexpected character {source[pos]!r}", byte_offset(pos),
                             frozenset({"number", "identifier", "operator"}))
        start = m.start(m.lastgroup)
        tokens.append(_Token(m.lastgroup, m.group(m.lastgroup), byte_offset(start)))
        pos = m.end()


# -- Pratt parser -----------------------------------------------------------

_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_BP = 30
_PREFIX_START = frozenset({"number", "identifier", "(", "-"})


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        if self.tok.kind != "op" or self.tok.text != text:
            raise ParseError(f"expected {text!r}", self.tok.offset, frozenset({text}))
        self.advance()

    def parse(self) -> Node:
        node = self.expression(0)
        if self.tok.kind != "end":
            raise ParseError(f"unexpected token {self.tok.text!r}", self.tok.offset,
                             frozenset(_INFIX) | {"end of input"})
        return node

    def expression(self, rbp: int) -> Node:
        left = self.prefix()
        while True:
            t = self.tok
            if t.kind != "op" or t.text not in _INFIX:
                return left
            lbp = _INFIX[t.text]
            if lbp <= rbp:
                return left
            self.advance()
            # right-associative: parse the right side one notch looser
            right = self.expression(lbp - 1 if t.text == "^" else lbp)
            left = BinOp(t.text, left, right)

    def prefix(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "name":
            self.advance()
            if t.text == "x":
                return Var()
            if t.text in CONSTANTS:
                return Const(t.text)
            if t.text in FUNCTION_NAMES:
                self.expect("(")
                arg = self.expression(0)
                self.expect(")")
                return Call(t.text, arg)
            raise UnknownIdentifierError(t.text, t.offset)
        if t.kind == "op" and t.text == "-":
            self.advance()
            return Neg(self.expression(_UNARY_BP))
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expression(0)
            self.expect(")")
            return inner
        what = "end of input" if t.kind == "end" else f"token {t.text!r}"
        raise ParseError(f"unexpected {what}", t.offset, _PREFIX_START)


# -- printing -------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def to_source(node: Node) -> str:
    """Print with the minimal parentheses that re-parse to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        if _prec(node.operand) < 3:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[node.op]
    left, right = to_source(node.left), to_source(node.right)
    if node.op == "^":
        if _prec(node.left) <= p:
            left = f"({left})"
        if _prec(node.right) < 3:
            right = f"({right})"
    else:
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
    return f"{left} {node.op} {right}"


def has_variable(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Num, Const)):
        return False
    if isinstance(node, Neg):
        return has_variable(node.operand)
    if isinstance(node, Call):
        return has_variable(node.arg)
    return has_variable(node.left) or has_variable(node.right)


# -- evaluation ----------------------------------------------------------------

def _eval(node: Node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    try:
        if isinstance(node, Neg):
            return -_eval(node.operand, x)
        if isinstance(node, Call):
            return elementary.FUNCTIONS[node.func](_eval(node.arg, x))
        a = _eval(node.left, x)
        b = _eval(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return elementary.divide(a, b)
        if has_variable(node.right):
            return elementary.exp(b * elementary.log(a))
        return elementary.power(a, float(b))
    except DomainError as exc:
        if exc.node is not None:
            raise
        raise DomainError(str(exc), node=to_source(node), point=_point_of(x)) from None


def _point_of(x):
    if isinstance(x, TaylorJet):
        return x.value
    if isinstance(x, (int, float)):
        return float(x)
    return None


@dataclass(frozen=True)
class Expression:
    """A parsed generator expression in the single variable ``x``."""

    ast: Node
    source: str

    def __str__(self) -> str:
        return to_source(self.ast)

    def evaluate(self, x):
        """Evaluate on a float, a numpy array, or a :class:`TaylorJet`."""
        import numpy as np

        if isinstance(x, np.ndarray):
            try:
                return _eval(self.ast, x)
            except DomainError:
                # find the first offending grid point for the message
                for xi in x.ravel():
                    _eval(self.ast, float(xi))
                raise
        return _eval(self.ast, x)


def parse(source: str) -> Expression:
    if not source or not source.strip():
        raise ParseError("empty expression", 0, _PREFIX_START)
    return Expression(_Parser(source).parse(), source)


def eval_jet(expr: Expression, point: float, order: int = ORDER) -> TaylorJet:
    """Normalized Taylor coefficients of ``expr`` at ``point``."""
    value = expr.evaluate(TaylorJet.variable(float(point), order))
    if not isinstance(value, TaylorJet):
        return TaylorJet.constant(float(value), order)
    return value


def derivative(expr: Expression, point: float, order: int) -> float:
    if not 0 <= order <= ORDER:
        raise ValueError(f"derivative order must be in 0..{ORDER}, got {order}")
    return eval_jet(expr, point, max(order, 1)).derivative(order)
