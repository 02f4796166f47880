"""Parse, evaluate, and serialize a small univariate expression language.

The language defines the functions f(x) that the rest of the package
certifies and integrates: decimal literals, the variable ``x``, the
constants ``e`` and ``pi``, the operators ``+ - * / ^`` and the calls
``exp, ln, sqrt, sin, cos, sinh, cosh, abs``.  ``^`` is right-associative
and binds tighter than unary minus, so ``-x^2`` is ``-(x^2)`` and
``x^2^3`` is ``x^(2^3)``.  ``log`` is rejected on purpose: its base is
ambiguous, and a loud failure beats a silent guess.

Trees are immutable after parsing and evaluation is pure, so expressions
are safe to share across threads without locking.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Expression",
    "ExpressionError",
    "ParseError",
    "DomainError",
    "EvaluationError",
    "parse",
    "evaluate",
    "evaluate_array",
    "serialize",
]


class ExpressionError(Exception):
    """Base class for everything this module raises."""


class ParseError(ExpressionError):
    """Syntax or identifier error, with the 0-based offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class DomainError(ExpressionError):
    """ln of a non-positive value, sqrt of a negative value, division by zero, ..."""


class EvaluationError(ExpressionError):
    """Evaluation left the finite doubles (overflow / non-finite result)."""


# --------------------------------------------------------------------------
# Syntax tree
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str  # "e" | "pi"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"


Node = Union[Num, Var, Const, Neg, BinOp, Call]

_CONSTANTS = {"e": math.e, "pi": math.pi}
_FUNCTIONS = ("exp", "ln", "sqrt", "sin", "cos", "sinh", "cosh", "abs")


@dataclass(frozen=True)
class Expression:
    """Immutable parsed function of one real variable."""

    root: Node

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def eval_array(self, xs) -> np.ndarray:
        return evaluate_array(self, xs)

    def __str__(self) -> str:
        return serialize(self)


# --------------------------------------------------------------------------
# Parser: recursive descent over the raw string, whitespace-insensitive
#
#   expr   := term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := '-' factor | power
#   power  := atom ('^' factor)?
#   atom   := NUMBER | 'x' | 'e' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
# --------------------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.peek() != ch:
            got = repr(self.peek()) if self.peek() else "end of input"
            raise ParseError(f"expected {ch!r}, got {got}", self.pos)
        self.pos += 1

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while True:
            self.skip_ws()
            op = self.peek()
            if op in ("+", "-"):
                self.pos += 1
                node = BinOp(op, node, self.parse_term())
            else:
                return node

    def parse_term(self) -> Node:
        node = self.parse_factor()
        while True:
            self.skip_ws()
            op = self.peek()
            if op in ("*", "/"):
                self.pos += 1
                node = BinOp(op, node, self.parse_factor())
            else:
                return node

    def parse_factor(self) -> Node:
        self.skip_ws()
        if self.peek() == "-":
            self.pos += 1
            return Neg(self.parse_factor())
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            return BinOp("^", base, self.parse_factor())
        return base

    def parse_atom(self) -> Node:
        self.skip_ws()
        ch = self.peek()
        if not ch:
            raise ParseError("unexpected end of input", self.pos)
        if ch == "(":
            self.pos += 1
            node = self.parse_expr()
            self.expect(")")
            return node
        if ch.isdigit() or ch == ".":
            m = _NUMBER_RE.match(self.text, self.pos)
            if m is None:
                raise ParseError(f"malformed number starting with {ch!r}", self.pos)
            start = self.pos
            self.pos = m.end()
            value = float(m.group())
            if not math.isfinite(value):
                raise ParseError("number literal out of double range", start)
            return Num(value)
        m = _IDENT_RE.match(self.text, self.pos)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", self.pos)
        name = m.group()
        start = self.pos
        self.pos = m.end()
        if name == "x":
            return Var()
        if name in _CONSTANTS:
            return Const(name)
        if name in _FUNCTIONS:
            self.expect("(")
            arg = self.parse_expr()
            self.expect(")")
            return Call(name, arg)
        if name == "log":
            raise ParseError("ambiguous 'log' (write 'ln' for the natural logarithm)", start)
        raise ParseError(f"unknown identifier {name!r}", start)


def parse(text: str) -> Expression:
    """Parse ``text`` into an immutable :class:`Expression`."""
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    if not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(text)
    root = parser.parse_expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise ParseError(f"unexpected character {text[parser.pos]!r}", parser.pos)
    return Expression(root)


# --------------------------------------------------------------------------
# Scalar evaluation (math module, explicit domain errors)
# --------------------------------------------------------------------------

def _call_scalar(name: str, v: float) -> float:
    if name == "exp":
        try:
            return math.exp(v)
        except OverflowError as exc:
            raise EvaluationError(f"overflow in exp({v!r})") from exc
    if name == "ln":
        if v <= 0.0:
            raise DomainError(f"ln of non-positive value {v!r}")
        return math.log(v)
    if name == "sqrt":
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v!r}")
        return math.sqrt(v)
    if name == "sin":
        return math.sin(v)
    if name == "cos":
        return math.cos(v)
    if name == "sinh":
        try:
            return math.sinh(v)
        except OverflowError as exc:
            raise EvaluationError(f"overflow in sinh({v!r})") from exc
    if name == "cosh":
        try:
            return math.cosh(v)
        except OverflowError as exc:
            raise EvaluationError(f"overflow in cosh({v!r})") from exc
    # name == "abs"
    return abs(v)


def _eval_scalar(node: Node, x: float) -> float:
    if isinstance(node, BinOp):
        left = _eval_scalar(node.left, x)
        right = _eval_scalar(node.right, x)
        op = node.op
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0.0:
                raise DomainError("division by zero")
            return left / right
        try:
            return math.pow(left, right)
        except ValueError as exc:
            raise DomainError(f"invalid power {left!r} ^ {right!r}") from exc
        except OverflowError as exc:
            raise EvaluationError(f"overflow in power {left!r} ^ {right!r}") from exc
    if isinstance(node, Call):
        return _call_scalar(node.name, _eval_scalar(node.arg, x))
    if isinstance(node, Var):
        return x
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        return -_eval_scalar(node.arg, x)
    return _CONSTANTS[node.name]


def evaluate(f: Expression, x: float) -> float:
    """Evaluate ``f`` at the finite real ``x`` with double-precision semantics."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"evaluation point must be finite, got {x!r}")
    out = _eval_scalar(f.root, x)
    if not math.isfinite(out):
        raise EvaluationError(f"non-finite result at x={x!r}")
    return out


# --------------------------------------------------------------------------
# Vectorized evaluation (numpy; domain violations become NaN/inf, callers
# decide how to report them — the scalar path has the precise messages)
# --------------------------------------------------------------------------

_NP_CALLS = {
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "abs": np.abs,
}


def _eval_np(node: Node, xs: np.ndarray):
    if isinstance(node, BinOp):
        left = _eval_np(node.left, xs)
        right = _eval_np(node.right, xs)
        op = node.op
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            return np.divide(left, right)
        return np.power(left, right)
    if isinstance(node, Call):
        return _NP_CALLS[node.name](_eval_np(node.arg, xs))
    if isinstance(node, Var):
        return xs
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        return -_eval_np(node.arg, xs)
    return _CONSTANTS[node.name]


def evaluate_array(f: Expression, xs) -> np.ndarray:
    """Evaluate ``f`` elementwise over ``xs`` (any shape).

    Domain violations are not raised here: the offending entries come back
    NaN or infinite and callers report them (usually by re-evaluating the
    scalar path at the bad abscissa for a precise error).
    """
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval_np(f.root, xs)
    out = np.asarray(out, dtype=float)
    if out.shape != xs.shape:
        out = np.broadcast_to(out, xs.shape).copy()
    return out


# --------------------------------------------------------------------------
# Canonical serialization: fully parenthesized, round-trip exact
# --------------------------------------------------------------------------

def _text(node: Node) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({_text(node.left)} {node.op} {_text(node.right)})"
    return f"{node.name}({_text(node.arg)})"


def serialize(f: Expression) -> str:
    """Emit canonical fully parenthesized text; ``parse`` inverts it exactly."""
    return _text(f.root)
