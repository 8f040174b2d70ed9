"""Scalar expressions of ``t`` used for coefficients, forcing terms and exact solutions.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?
    primary := number | 't' | name '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-t^2``
is ``-(t^2)`` and ``2^3^2`` is ``2^9``. There is no implicit multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import EvaluationError, ExprSyntaxError
from .opmat import gamma

__all__ = ["Num", "Var", "Neg", "BinOp", "Call", "Expr", "parse", "evaluate", "to_string", "FUNCTIONS"]


@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"
    pos: int = field(default=0, compare=False)


Expr = Union[Num, Var, Neg, BinOp, Call]

FUNCTIONS = {
    "gamma": gamma,
    "sqrt": np.sqrt,
    "exp": np.exp,
    "log": np.log,
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(src: str):
    tokens = []
    i = 0
    while i < len(src):
        mt = _TOKEN.match(src, i)
        if mt is None:
            raise ExprSyntaxError(f"unexpected character {src[i]!r}", _byte_offset(src, i))
        kind = mt.lastgroup
        if kind != "ws":
            tokens.append((kind, mt.group(), i))
        i = mt.end()
    tokens.append(("end", "", len(src)))
    return tokens


def _byte_offset(src: str, i: int) -> int:
    return len(src[:i].encode("utf-8"))


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def error(self, msg, tok):
        raise ExprSyntaxError(msg, _byte_offset(self.src, tok[2]))

    def expect(self, text):
        tok = self.take()
        if tok[1] != text or tok[0] != "op":
            found = tok[1] or "end of input"
            self.error(f"expected {text!r}, found {found!r}", tok)
        return tok

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.error(f"unexpected {tok[1]!r}", tok)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op, pos = self.take()[1:]
            e = BinOp(op, e, self.term(), _byte_offset(self.src, pos))
        return e

    def term(self):
        e = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op, pos = self.take()[1:]
            e = BinOp(op, e, self.factor(), _byte_offset(self.src, pos))
        return e

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.factor(), _byte_offset(self.src, tok[2]))
        return self.power()

    def power(self):
        base = self.primary()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            return BinOp("^", base, self.factor(), _byte_offset(self.src, tok[2]))
        return base

    def primary(self):
        tok = self.take()
        kind, text, pos = tok
        bpos = _byte_offset(self.src, pos)
        if kind == "num":
            return Num(float(text), bpos)
        if kind == "name":
            if text == "t":
                return Var(bpos)
            if text not in FUNCTIONS:
                self.error(f"unknown function {text!r}", tok)
            nxt = self.peek()
            if not (nxt[0] == "op" and nxt[1] == "("):
                self.error(f"expected '(' after function name {text!r}", nxt)
            self.take()
            arg = self.expr()
            self.expect(")")
            return Call(text, arg, bpos)
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect(")")
            return e
        self.error(f"unexpected {text or 'end of input'!r}", tok)


def parse(src: str) -> Expr:
    """Parse expression text; raises :class:`ExprSyntaxError` with a byte offset."""
    if not isinstance(src, str) or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src).parse()


_BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}


def _eval(e, t):
    if isinstance(e, Num):
        v = np.float64(e.value)
    elif isinstance(e, Var):
        v = t
    elif isinstance(e, Neg):
        v = -_eval(e.operand, t)
    elif isinstance(e, BinOp):
        v = _BINARY[e.op](_eval(e.left, t), _eval(e.right, t))
    elif isinstance(e, Call):
        a = _eval(e.arg, t)
        if e.name == "gamma" and np.any(a <= 0):
            raise EvaluationError("gamma of a non-positive argument", e.pos)
        v = FUNCTIONS[e.name](a)
    else:
        raise TypeError(f"not an expression node: {e!r}")
    if not np.all(np.isfinite(v)):
        raise EvaluationError("non-finite value", e.pos)
    return v


def evaluate(e: Expr, t):
    """Evaluate ``e`` at ``t`` (float or array) in double precision.

    Raises :class:`EvaluationError` carrying the byte offset of the first
    subexpression whose value is not finite.
    """
    ta = np.asarray(t, dtype=float) if np.ndim(t) else np.float64(t)
    with np.errstate(all="ignore"):
        v = _eval(e, ta)
    if np.ndim(ta):
        return np.broadcast_to(np.asarray(v, dtype=float), np.shape(ta)).copy()
    return float(v)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_string(e: Expr) -> str:
    """Render ``e`` with the minimal parentheses needed to reparse the same tree."""
    return _fmt(e)


def _prec(e):
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    return 5


def _fmt(e) -> str:
    if isinstance(e, Num):
        s = repr(float(e.value))
        return s if e.value >= 0 else f"({s})"
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Call):
        return f"{e.name}({_fmt(e.arg)})"
    if isinstance(e, Neg):
        inner = _fmt(e.operand)
        if _prec(e.operand) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[e.op]
    left, right = _fmt(e.left), _fmt(e.right)
    if e.op == "^":
        # right-associative; the exponent may be any factor, including a negation
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < _PREC["neg"]:
            right = f"({right})"
    else:
        if _prec(e.left) < p:
            left = f"({left})"
        if _prec(e.right) <= p:
            right = f"({right})"
    return f"{left} {e.op} {right}"
