"""Tiny expression language for scalar fields in chart coordinates.

Grammar (loosest binding first)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)*          right-associative, integer exponents only
    atom   := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'

Evaluation works on numpy arrays, so a whole grid is evaluated in one call.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "log": np.log, "sqrt": np.sqrt}


class ExprSyntaxError(ValueError):
    def __init__(self, msg: str, offset: int):
        self.offset = offset
        super().__init__(f"{msg} at offset {offset}")


class UnknownIdentifier(ValueError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at offset {offset}")


class DomainError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    index: int


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(src: str):
    pos, out = 0, []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, coords: Sequence[str]):
        self.toks = _tokenize(src)
        self.i = 0
        self.coords = {c: k for k, c in enumerate(coords)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str):
        kind, val, off = self.take()
        if val != text or kind == "end":
            raise ExprSyntaxError(f"expected {text!r}, got {val or 'end of input'!r}", off)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", off)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            r = self.unary()
            e = Mul(e, r) if op == "*" else Div(e, r)
        return e

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        kind, val, off = self.take()
        if kind != "num" or not val.isdigit():
            raise ExprSyntaxError("exponent must be an integer literal", off)
        n = sign * int(val)
        if self.peek()[:2] == ("op", "^"):
            self.take()
            m = self.exponent()
            if m < 0 and n not in (1, -1):
                raise ExprSyntaxError("exponent tower is not an integer", off)
            n = int(Fraction(n) ** m)
        return n

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Num(Fraction(val))
        if kind == "ident":
            if self.peek()[:2] == ("op", "("):
                if val not in FUNCS:
                    raise UnknownIdentifier(val, off)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in FUNCS:
                raise ExprSyntaxError(f"function {val!r} needs an argument", off)
            if val not in self.coords:
                raise UnknownIdentifier(val, off)
            return Var(val, self.coords[val])
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", off)


def parse(src: str, coords: Sequence[str]) -> Expr:
    return _Parser(src, coords).parse()


def evaluate(e: Expr, points) -> np.ndarray | float:
    """Evaluate at one point (1-d) or many points (last axis = coordinates)."""
    pts = np.asarray(points, dtype=float)
    out = _ev(e, pts)
    if pts.ndim == 1:
        return float(out)
    return np.broadcast_to(out, pts.shape[:-1]).astype(float)


eval_expr = evaluate


def _ev(e, pts):
    if isinstance(e, Num):
        return float(e.value)
    if isinstance(e, Var):
        if e.index >= pts.shape[-1]:
            raise ValueError(f"point has no coordinate {e.name!r}")
        return pts[..., e.index]
    if isinstance(e, Neg):
        return -_ev(e.arg, pts)
    if isinstance(e, Add):
        return _ev(e.left, pts) + _ev(e.right, pts)
    if isinstance(e, Sub):
        return _ev(e.left, pts) - _ev(e.right, pts)
    if isinstance(e, Mul):
        return _ev(e.left, pts) * _ev(e.right, pts)
    if isinstance(e, Div):
        den = _ev(e.right, pts)
        if np.any(np.asarray(den) == 0):
            raise DomainError("division by zero")
        return _ev(e.left, pts) / den
    if isinstance(e, Pow):
        b = _ev(e.base, pts)
        if e.exp < 0:
            if np.any(np.asarray(b) == 0):
                raise DomainError("zero to a negative power")
            return 1.0 / b ** (-e.exp)
        return b ** e.exp
    if isinstance(e, Call):
        a = _ev(e.arg, pts)
        if e.func == "log" and np.any(np.asarray(a) <= 0):
            raise DomainError("log of a non-positive number")
        if e.func == "sqrt" and np.any(np.asarray(a) < 0):
            raise DomainError("sqrt of a negative number")
        return FUNCS[e.func](a)
    raise TypeError(f"not an expression node: {e!r}")


# precedence used by the printer
_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _num_text(v: Fraction) -> tuple[str, int]:
    if v.denominator == 1:
        return str(v.numerator), 5
    d = v.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1:
        with localcontext() as ctx:
            ctx.prec = 200
            return format(Decimal(v.numerator) / Decimal(v.denominator), "f"), 5
    return f"{v.numerator}/{v.denominator}", 2


def _prec(e) -> int:
    if isinstance(e, Num):
        return _num_text(e.value)[1] if e.value >= 0 else 3
    return _PREC.get(type(e), 5)


def pretty(e: Expr) -> str:
    """Shortest-parenthesis rendering; parse(pretty(e)) rebuilds an equal tree."""
    if isinstance(e, Num):
        if e.value < 0:
            return "-" + pretty(Num(-e.value))
        return _num_text(e.value)[0]
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({pretty(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _prec(e.arg) < 3)
    if isinstance(e, Pow):
        return _wrap(e.base, _prec(e.base) <= 4) + "^" + str(e.exp)
    p = _PREC[type(e)]
    sym = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}[type(e)]
    return _wrap(e.left, _prec(e.left) < p) + sym + _wrap(e.right, _prec(e.right) <= p)


def _wrap(e, paren: bool) -> str:
    s = pretty(e)
    return f"({s})" if paren else s


def const(x) -> Num:
    return Num(Fraction(x))


ZERO = Num(Fraction(0))


def is_const_zero(e: Expr) -> bool:
    return isinstance(e, Num) and e.value == 0
