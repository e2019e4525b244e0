"""Density expressions: a small recursive-descent parser and a vectorised evaluator.

Grammar (``^`` is right-associative, function names are lowercase)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := unary ('^' factor)?
    unary   := '-' unary | primary
    primary := number | 'x' | func '(' expr ')' | '(' expr ')'
    func    := sin | cos | abs | sqrt | exp

Note that unary minus binds tighter than ``^`` under this grammar, so
``-x^2`` means ``(-x)^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Node",
    "DensityExpr",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "EvaluationError",
    "parse_density",
    "to_source",
    "evaluate",
    "FUNCTIONS",
]


class ExprSyntaxError(ValueError):
    """Malformed expression; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class EvaluationError(ArithmeticError):
    """Domain violation while evaluating an expression."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

FUNCTIONS = ("sin", "cos", "abs", "sqrt", "exp")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), _byte_offset(source, pos)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, value, offset = self.take()
        if value != text or kind != "op":
            found = value if kind != "end" else "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", offset)

    def parse(self) -> Node:
        node = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {value!r}", offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> Node:
        kind, value, offset = self.take()
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            if value == "x":
                return Var()
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            raise UnknownIdentifierError(value, offset)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = value if kind != "end" else "end of input"
        raise ExprSyntaxError(f"unexpected token {found!r}", offset)


@dataclass(frozen=True)
class DensityExpr:
    """A parsed density expression in the variable ``x``."""

    source: str
    ast: Node

    def __call__(self, x):
        return evaluate(self.ast, x)


def parse_density(source: str) -> DensityExpr:
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    return DensityExpr(source, _Parser(source).parse())


def to_source(node: Node) -> str:
    """Print ``node`` fully parenthesised so that parsing it gives back ``node``."""
    if isinstance(node, Num):
        if node.value < 0 or not np.isfinite(node.value):
            raise ValueError("only finite non-negative literals are printable")
        return repr(float(node.value))
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: Node, x):
    """Evaluate ``node`` at ``x`` (scalar or array); raise EvaluationError on domain violations."""
    xa = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, xa)
    out = np.broadcast_to(out, xa.shape).astype(float, copy=True)
    if not np.all(np.isfinite(out)):
        bad = xa[~np.isfinite(out)] if xa.ndim else xa
        raise EvaluationError(f"non-finite result at x={np.ravel(bad)[0]!r}")
    return out if xa.ndim else float(out)


def _eval(node: Node, x: np.ndarray) -> np.ndarray:
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, Call):
        arg = _eval(node.arg, x)
        if node.func == "sqrt":
            if np.any(np.asarray(arg) < 0):
                raise EvaluationError("sqrt of a negative number")
            return np.sqrt(arg)
        return getattr(np, node.func)(arg)
    if isinstance(node, BinOp):
        left = _eval(node.left, x)
        right = _eval(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if np.any(np.asarray(right) == 0):
                raise EvaluationError("division by zero")
            return left / right
        if node.op == "^":
            return np.power(left, right)
    raise TypeError(f"not an expression node: {node!r}")
