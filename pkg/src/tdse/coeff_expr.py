"""Closed-form real functions of one time variable.

Every Hamiltonian coefficient and gauge function enters the package as a
short expression string such as ``"0.5 + 0.25*cos(3*t)"``.  The grammar is::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?            # right associative
    primary := NUMBER | 't' | 'pi' | FUNC '(' expr ')' | '(' expr ')'

so ``-t^2`` is ``-(t^2)`` and ``2^3^2`` is ``2^(3^2)``.  Evaluation accepts
scalars or numpy arrays and raises :class:`DomainError` instead of letting a
NaN or infinity escape.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, ParseError, UnknownIdentifierError

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "CoeffExpr",
    "parse",
    "evaluate",
    "pretty",
    "FUNCTIONS",
]

FUNCTIONS = ("sin", "cos", "exp", "ln", "tanh", "sqrt", "abs")
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(source, pos)
        if m is None or m.lastgroup is None:
            raise ParseError(f"unexpected character {source[pos]!r}", source, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, variable: str):
        self.source = source
        self.variable = variable
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        if tok[0] == "end":
            message = f"{message}, found end of input"
        else:
            message = f"{message}, found {tok[1]!r}"
        raise ParseError(message, self.source, tok[2])

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            self.fail(f"expected {value!r}")
        return self.take()

    def parse(self) -> Node:
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Node:
        tok = self.peek()
        kind, text, start = tok
        if kind == "num":
            self.take()
            value = float(text)
            if not math.isfinite(value):
                raise ParseError(f"numeric literal {text!r} overflows", self.source, start)
            return Num(value)
        if kind == "name":
            self.take()
            if text == self.variable:
                return Var()
            if text in CONSTANTS:
                return Num(CONSTANTS[text])
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise UnknownIdentifierError(f"unknown identifier {text!r}", self.source, start)
        if kind == "op" and text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expected a number, variable, function or '('")


def _pretty(node: Node, variable: str) -> str:
    if isinstance(node, Num):
        return repr(node.value) if node.value >= 0 else f"(-{repr(-node.value)})"
    if isinstance(node, Var):
        return variable
    if isinstance(node, Neg):
        return f"(-{_pretty(node.arg, variable)})"
    if isinstance(node, Call):
        return f"{node.fn}({_pretty(node.arg, variable)})"
    return f"({_pretty(node.left, variable)} {node.op} {_pretty(node.right, variable)})"


def _check(value, what):
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{what} is not finite")
    return value


def _eval(node: Node, t):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Neg):
        return -_eval(node.arg, t)
    if isinstance(node, Call):
        x = _eval(node.arg, t)
        fn = node.fn
        if fn == "ln":
            if np.any(x <= 0):
                raise DomainError("ln of a non-positive argument")
            return np.log(x)
        if fn == "sqrt":
            if np.any(x < 0):
                raise DomainError("sqrt of a negative argument")
            return np.sqrt(x)
        return _check(getattr(np, fn)(x), f"{fn}(...)")
    a = _eval(node.left, t)
    b = _eval(node.right, t)
    op = node.op
    if op == "+":
        return _check(a + b, "sum")
    if op == "-":
        return _check(a - b, "difference")
    if op == "*":
        return _check(a * b, "product")
    if op == "/":
        if np.any(b == 0):
            raise DomainError("division by zero")
        return _check(a / b, "quotient")
    if np.any((a == 0) & (b < 0)):
        raise DomainError("division by zero in 0^negative")
    out = np.power(np.asarray(a, dtype=float), b)
    if np.any(np.isnan(out)):
        raise DomainError("negative base raised to a non-integer power")
    return _check(out, "power")


@dataclass(frozen=True)
class CoeffExpr:
    """A parsed coefficient function.  Calling it evaluates at ``t``."""

    ast: Node
    source: str = field(compare=False)
    variable: str = "t"

    def __call__(self, t):
        return evaluate(self, t)

    def pretty(self) -> str:
        return _pretty(self.ast, self.variable)

    @property
    def is_constant(self) -> bool:
        return _no_var(self.ast)

    def __str__(self) -> str:
        return self.source


def _no_var(node: Node) -> bool:
    if isinstance(node, Var):
        return False
    if isinstance(node, Num):
        return True
    if isinstance(node, (Neg, Call)):
        return _no_var(node.arg)
    return _no_var(node.left) and _no_var(node.right)


def parse(source: str, variable: str = "t") -> CoeffExpr:
    if not isinstance(source, str) or not source.strip():
        raise ParseError("empty expression", str(source), 0)
    return CoeffExpr(_Parser(source, variable).parse(), source, variable)


def evaluate(expr: CoeffExpr, t):
    """Evaluate ``expr`` at a scalar or array of times.

    Scalars come back as ``float``; arrays keep their shape (constant
    expressions are broadcast).
    """
    arr = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(expr.ast, arr)
    out = np.broadcast_to(np.asarray(out, dtype=float), arr.shape)
    if out.ndim == 0:
        return float(out)
    return np.array(out)


def pretty(expr: CoeffExpr) -> str:
    return expr.pretty()


def as_expr(value, variable: str = "t") -> CoeffExpr:
    """Accept a CoeffExpr, expression string, or number."""
    if isinstance(value, CoeffExpr):
        return value
    if isinstance(value, (int, float)):
        return parse(repr(float(value)), variable)
    return parse(value, variable)
