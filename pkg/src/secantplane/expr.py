"""Arithmetic expressions in ``x`` and ``y``.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' INTEGER)*      right-associative
    primary := NUMBER | 'x' | 'y' | '(' expr ')'

Exponents are non-negative integer literals.  ``x^2^3`` is ``x^(2^3)``; the
exponent chain is folded to a single integer.  Only polynomial-friendly
arithmetic is supported; a transcendental function would slot in as a new
node type plus a ``primary`` alternative.
"""

from __future__ import annotations

import math
import re
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Union

from .ga2 import Vector2

__all__ = [
    "MAX_DEPTH",
    "MAX_EXPONENT",
    "ExprSyntaxError",
    "EvalError",
    "Token",
    "Const",
    "Var",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Expr",
    "tokenize",
    "parse",
    "to_source",
    "eval2",
    "eval1",
    "variables",
    "depth",
    "grad_fd",
    "deriv_fd",
]

MAX_DEPTH = 512
MAX_EXPONENT = 1024


class ExprSyntaxError(ValueError):
    def __init__(self, pos: int, message: str):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos
        self.message = message


class EvalError(ArithmeticError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: int


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)
_OP_KINDS = {
    "+": "plus",
    "-": "minus",
    "*": "star",
    "/": "slash",
    "^": "caret",
    "(": "lparen",
    ")": "rparen",
}


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExprSyntaxError(pos, f"unexpected character {src[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind == "number":
            if not math.isfinite(float(text)):
                raise ExprSyntaxError(pos, f"number {text} is not finite")
            tokens.append(Token("number", text, pos))
        elif kind == "ident":
            if text not in ("x", "y"):
                raise ExprSyntaxError(pos, f"unknown identifier {text!r}")
            tokens.append(Token("ident", text, pos))
        elif kind == "op":
            tokens.append(Token(_OP_KINDS[text], text, pos))
        pos = m.end()
    return tokens


def _stack_depth() -> int:
    n = 0
    f = sys._getframe()
    while f is not None:
        n += 1
        f = f.f_back
    return n


@contextmanager
def _recursion_headroom(frames: int) -> Iterator[None]:
    # a parenthesis level costs three parser frames
    old = sys.getrecursionlimit()
    needed = _stack_depth() + frames
    if old < needed:
        sys.setrecursionlimit(needed)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


class _Parser:
    # binding powers for infix operators
    _INFIX = {"plus": 10, "minus": 10, "star": 20, "slash": 20}
    _NODES = {"plus": Add, "minus": Sub, "star": Mul, "slash": Div}
    _UNARY = 30

    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0
        self.nesting = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def end_pos(self) -> int:
        return len(self.src)

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError(self.end_pos(), "unexpected end of input")
        self.i += 1
        return tok

    def nest(self, pos: int) -> None:
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise ExprSyntaxError(pos, f"expression nested deeper than {MAX_DEPTH}")

    def parse(self) -> tuple[Expr, int]:
        if not self.tokens:
            raise ExprSyntaxError(0, "empty expression")
        node, d = self.expression(0)
        tok = self.peek()
        if tok is not None:
            if tok.kind == "rparen":
                raise ExprSyntaxError(tok.pos, "unbalanced ')'")
            raise ExprSyntaxError(tok.pos, f"unexpected {tok.text!r} after expression")
        return node, d

    def expression(self, min_bp: int) -> tuple[Expr, int]:
        left, d = self.prefix()
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in self._INFIX:
                break
            bp = self._INFIX[tok.kind]
            if bp <= min_bp:
                break
            self.advance()
            right, rd = self.expression(bp)
            left = self._NODES[tok.kind](left, right)
            d = 1 + max(d, rd)
            if d > MAX_DEPTH:
                raise ExprSyntaxError(tok.pos, f"expression tree deeper than {MAX_DEPTH}")
        return left, d

    def prefix(self) -> tuple[Expr, int]:
        tok = self.advance()
        if tok.kind == "minus":
            self.nest(tok.pos)
            operand, d = self.expression(self._UNARY - 1)
            self.nesting -= 1
            if d + 1 > MAX_DEPTH:
                raise ExprSyntaxError(tok.pos, f"expression tree deeper than {MAX_DEPTH}")
            return Neg(operand), d + 1
        node, d = self.primary(tok)
        return self.power(node, d)

    def primary(self, tok: Token) -> tuple[Expr, int]:
        if tok.kind == "number":
            return Const(float(tok.text)), 1
        if tok.kind == "ident":
            return Var(tok.text), 1
        if tok.kind == "lparen":
            self.nest(tok.pos)
            node, d = self.expression(0)
            closing = self.peek()
            if closing is None:
                raise ExprSyntaxError(self.end_pos(), f"unbalanced '(' opened at {tok.pos}")
            if closing.kind != "rparen":
                raise ExprSyntaxError(closing.pos, f"expected ')' but found {closing.text!r}")
            self.advance()
            self.nesting -= 1
            return node, d
        raise ExprSyntaxError(tok.pos, f"unexpected {tok.text!r}")

    def power(self, base: Expr, d: int) -> tuple[Expr, int]:
        caret = self.peek()
        if caret is None or caret.kind != "caret":
            return base, d
        self.advance()
        exps = [self.exponent()]
        while (tok := self.peek()) is not None and tok.kind == "caret":
            self.advance()
            exps.append(self.exponent())
        # fold right to left: x^a^b == x^(a^b)
        n = exps.pop()
        while exps:
            b = exps.pop()
            if b > 1 and n > MAX_EXPONENT.bit_length():
                raise ExprSyntaxError(caret.pos, f"exponent exceeds {MAX_EXPONENT}")
            n = b**n
            if n > MAX_EXPONENT:
                raise ExprSyntaxError(caret.pos, f"exponent exceeds {MAX_EXPONENT}")
        if d + 1 > MAX_DEPTH:
            raise ExprSyntaxError(self.end_pos(), f"expression tree deeper than {MAX_DEPTH}")
        return Pow(base, n), d + 1

    def exponent(self) -> int:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError(self.end_pos(), "missing exponent after '^'")
        if tok.kind != "number" or not tok.text.isdigit():
            raise ExprSyntaxError(tok.pos, "exponent must be a non-negative integer literal")
        self.advance()
        n = int(tok.text)
        if n > MAX_EXPONENT:
            raise ExprSyntaxError(tok.pos, f"exponent exceeds {MAX_EXPONENT}")
        return n


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree; raises :class:`ExprSyntaxError`."""
    if not src or not src.strip():
        raise ExprSyntaxError(0, "empty expression")
    parser = _Parser(src)
    with _recursion_headroom(3 * MAX_DEPTH + 100):
        node, _ = parser.parse()
    return node


# printer precedence levels
_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Const: 5, Var: 5}
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def to_source(e: Expr) -> str:
    """Print with the fewest parentheses that re-parse to the same tree.

    Constants must be finite and non-negative (the parser never produces
    negative ones; negation is a :class:`Neg` node).
    """
    if isinstance(e, Const):
        if not math.isfinite(e.value) or math.copysign(1.0, e.value) < 0:
            raise ValueError(f"constant {e.value!r} has no source form")
        return repr(float(e.value))
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = to_source(e.operand)
        if _PREC[type(e.operand)] < _PREC[Neg]:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Pow):
        inner = to_source(e.base)
        if _PREC[type(e.base)] <= _PREC[Pow]:
            inner = f"({inner})"
        return f"{inner}^{e.exponent}"
    prec = _PREC[type(e)]
    left = to_source(e.left)
    right = to_source(e.right)
    if _PREC[type(e.left)] < prec:
        left = f"({left})"
    if _PREC[type(e.right)] <= prec:
        right = f"({right})"
    return f"{left} {_SYMBOL[type(e)]} {right}"


def _finite(v: float, what: str) -> float:
    if not math.isfinite(v):
        raise EvalError(f"non-finite intermediate in {what}")
    return v


def eval2(e: Expr, x: float, y: float) -> float:
    """Evaluate at ``(x, y)``; division by zero and overflow raise :class:`EvalError`."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x if e.name == "x" else y
    if isinstance(e, Add):
        return _finite(eval2(e.left, x, y) + eval2(e.right, x, y), "addition")
    if isinstance(e, Sub):
        return _finite(eval2(e.left, x, y) - eval2(e.right, x, y), "subtraction")
    if isinstance(e, Mul):
        return _finite(eval2(e.left, x, y) * eval2(e.right, x, y), "multiplication")
    if isinstance(e, Div):
        num = eval2(e.left, x, y)
        den = eval2(e.right, x, y)
        if den == 0.0:
            raise EvalError("division by zero")
        return _finite(num / den, "division")
    if isinstance(e, Neg):
        return -eval2(e.operand, x, y)
    if isinstance(e, Pow):
        base = eval2(e.base, x, y)
        try:
            return _finite(base**e.exponent, "power")
        except OverflowError:
            raise EvalError("overflow in power") from None
    raise TypeError(f"not an expression node: {e!r}")


def eval1(e: Expr, x: float) -> float:
    """Evaluate a one-variable expression; ``y`` is bound to 0."""
    return eval2(e, x, 0.0)


def variables(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Neg):
        return variables(e.operand)
    if isinstance(e, Pow):
        return variables(e.base)
    return variables(e.left) | variables(e.right)


def depth(e: Expr) -> int:
    if isinstance(e, (Const, Var)):
        return 1
    if isinstance(e, Neg):
        return 1 + depth(e.operand)
    if isinstance(e, Pow):
        return 1 + depth(e.base)
    return 1 + max(depth(e.left), depth(e.right))


_FD_SCALE = sys.float_info.epsilon ** (1.0 / 3.0)


def _central(g, t: float) -> float:
    h = _FD_SCALE * max(1.0, abs(t))
    # use the step actually representable around t
    hp = (t + h) - t
    hm = t - (t - h)
    return (g(t + hp) - g(t - hm)) / (hp + hm)


def grad_fd(e: Expr, p: Vector2) -> Vector2:
    """Central-difference gradient; step ``eps^(1/3) * max(1, |coordinate|)``."""
    gx = _central(lambda t: eval2(e, t, p.y), p.x)
    gy = _central(lambda t: eval2(e, p.x, t), p.y)
    return Vector2(gx, gy)


def deriv_fd(e: Expr, x0: float) -> float:
    """One-variable analogue of :func:`grad_fd`."""
    return _central(lambda t: eval1(e, t), x0)
