"""Parser for polynomial / rational-function text.

Accepts the canonical serialization (``3/2*x^2*y - hbar``) as well as
hand-written input with parentheses, ``/`` and ``**``.  ``I`` denotes the
imaginary unit.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import symbols as S
from .gaussrat import GaussRat, I
from .poly import ExactPoly
from .ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_']*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def _tokens(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text, register_new):
        self.toks = _tokens(text)
        self.i = 0
        self.register_new = register_new

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ParseError(f"expected {op!r}, got {t[1]!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input near {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            r = self.term()
            v = v + r if op == "+" else v - r
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            r = self.unary()
            v = v * r if op == "*" else v / r
        return v

    def unary(self):
        t = self.peek()
        if t == ("op", "-"):
            self.take()
            return -self.unary()
        if t == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            paren = False
            if self.peek() == ("op", "("):
                self.take()
                paren = True
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, n = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer")
            if paren:
                self.expect(")")
            base = base ** (sign * n)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return RatFunc(ExactPoly.const(Fraction(val)))
        if kind == "name":
            if val == "I":
                return RatFunc(ExactPoly.const(I))
            if not S.is_registered(val) and S.jet_from_name(val) is None:
                if not self.register_new:
                    raise S.UnknownSymbolError(val)
                S.register(val)
            return RatFunc(ExactPoly.sym(val))
        if (kind, val) == ("op", "("):
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {val!r}")


def parse_rational(text: str, register_new: bool = False) -> RatFunc:
    return _Parser(text, register_new).parse()


def parse_poly(text: str, register_new: bool = False) -> ExactPoly:
    """Parse text into an ExactPoly; non-monomial denominators are rejected."""
    r = parse_rational(text, register_new)
    if not r.is_polynomial():
        raise ParseError("expression has a non-monomial denominator")
    return r.num


def parse_number(text: str) -> GaussRat:
    p = parse_poly(text)
    if not p.is_constant():
        raise ParseError(f"{text!r} is not a constant")
    return p.constant_term()
