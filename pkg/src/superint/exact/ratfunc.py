"""Rational functions with a factored denominator.

A value is ``num / prod(atom**e)``.  Atoms are non-monomial polynomials;
monomial factors live in the (Laurent) numerator.  No gcd is computed, so
zero testing reduces to testing the numerator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .algebraic import reduce_all
from .gaussrat import GaussRat
from . import symbols as S
from .poly import ExactPoly, divide_exact


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den: Mapping[ExactPoly, int] | None = None):
        num = ExactPoly.coerce(num)
        clean: dict[ExactPoly, int] = {}
        for atom, e in (den or {}).items():
            if e == 0:
                continue
            if e < 0:
                raise ValueError("denominator exponents must be positive")
            if atom.is_zero():
                raise ZeroDivisionError("zero denominator atom")
            if atom.is_monomial():
                num = num * atom.inverse_monomial() ** e
                continue
            atom, unit = _normalize_atom(atom)
            if unit is not None:
                num = num * unit ** e
            clean[atom] = clean.get(atom, 0) + e
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", clean)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def coerce(v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        return RatFunc(ExactPoly.coerce(v))

    @classmethod
    def inverse_of(cls, p: ExactPoly, power: int = 1) -> "RatFunc":
        return cls(ExactPoly.const(1), {p: power})

    # -- predicates -------------------------------------------------------
    def is_zero(self, relations=()) -> bool:
        return reduce_all(self.num, relations).is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def as_poly(self) -> ExactPoly:
        if self.den:
            raise ValueError("rational function has a nontrivial denominator")
        return self.num

    def is_real(self) -> bool:
        return self.num.is_real() and all(a.is_real() for a in self.den)

    def denominator(self) -> ExactPoly:
        out = ExactPoly.const(1)
        for a, e in self.den.items():
            out = out * a ** e
        return out

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if not self.den and not o.den:
            return RatFunc(self.num + o.num)
        den = dict(self.den)
        for a, e in o.den.items():
            den[a] = max(den.get(a, 0), e)
        n1 = self.num * _prod({a: e - self.den.get(a, 0) for a, e in den.items()})
        n2 = o.num * _prod({a: e - o.den.get(a, 0) for a, e in den.items()})
        return RatFunc._raw(n1 + n2, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        den = dict(self.den)
        for a, e in o.den.items():
            den[a] = den.get(a, 0) + e
        return RatFunc._raw(self.num * o.num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(_prod(self.den), {self.num: 1})

    def __truediv__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, {a: e * n for a, e in self.den.items()})

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", {a: e for a, e in den.items() if e})
        return obj

    def __eq__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        raise TypeError("RatFunc is not hashable")

    # -- calculus / substitution -----------------------------------------
    def derivative(self, var: str, rules=None) -> "RatFunc":
        # (N / prod a^e)' = (N' prod a - N sum_a e a' prod_{b != a} b) / (prod a^e * prod a)
        dn = _d(self.num, var, rules)
        if not self.den:
            return dn if isinstance(dn, RatFunc) else RatFunc(dn)
        out = RatFunc.coerce(dn) * RatFunc._raw(ExactPoly.const(1), self.den)
        for a, e in self.den.items():
            da = _d(a, var, rules)
            if _is_zero(da):
                continue
            den = dict(self.den)
            den[a] = den[a] + 1
            out = out - RatFunc.coerce(da) * RatFunc._raw(self.num * e, den)
        return out

    def diff(self, *vars_: str, rules=None) -> "RatFunc":
        out = self
        for v in vars_:
            out = out.derivative(v, rules)
        return out

    def subs(self, mapping: Mapping[str, object]) -> "RatFunc":
        out = subs_into(self.num, mapping)
        for a, e in self.den.items():
            out = out / subs_into(a, mapping) ** e
        return out

    def reduce(self, relations) -> "RatFunc":
        return RatFunc._raw(reduce_all(self.num, relations), self.den)

    def cancel(self) -> "RatFunc":
        """Divide out denominator atoms that divide the numerator exactly."""
        num = self.num
        den = dict(self.den)
        for a in list(den):
            while den[a] and not num.is_zero():
                q = divide_exact(num, a)
                if q is None:
                    break
                num = q
                den[a] -= 1
        return RatFunc._raw(num, den)

    def evaluate(self, values):
        out = self.num.evaluate(values)
        for a, e in self.den.items():
            out = out / a.evaluate(values) ** e
        return out

    def symbols(self) -> set[str]:
        out = set(self.num.symbols())
        for a in self.den:
            out |= a.symbols()
        return out

    def to_text(self) -> str:
        if not self.den:
            return self.num.to_text()
        dens = sorted((a.to_text(), e) for a, e in self.den.items())
        dt = "*".join(f"({t})" if e == 1 else f"({t})^{e}" for t, e in dens)
        return f"({self.num.to_text()})/({dt})"

    def __repr__(self):
        return f"RatFunc({self.to_text()})"

    __str__ = to_text


def _normalize_atom(atom: ExactPoly):
    """Make atoms canonical: primitive-ish with leading coefficient 1.

    Returns (atom', unit) with atom = atom' / unit, i.e. 1/atom = unit/atom'.
    """
    m, c = atom.sorted_terms()[0]
    # strip a common monomial content so that x*(s^2-x) style atoms do not arise
    if c == 1:
        return atom, None
    return atom.scale(c.inverse()), ExactPoly.const(c.inverse())


def _prod(powers: Mapping[ExactPoly, int]) -> ExactPoly:
    out = ExactPoly.const(1)
    for a, e in powers.items():
        if e:
            out = out * a ** e
    return out


def _as_rf(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, (ExactPoly, int, Fraction, GaussRat, complex)):
        return RatFunc(ExactPoly.coerce(v))
    return None


def _d(p: ExactPoly, var, rules):
    """Derivative of a polynomial; rational symbol rules give a RatFunc."""
    if rules is None:
        return p.derivative(var)
    found = {n: _lookup(rules, n, var) for n in p.symbols()}
    if not any(isinstance(r, RatFunc) and not r.is_polynomial() for r in found.values()):
        return p.derivative(var, lambda n, v: _unwrap(_lookup(rules, n, v)))
    # chain rule over the symbols present, with rational symbol derivatives
    out = RatFunc(ExactPoly())
    for name, r in found.items():
        if r is None:
            if name == var:
                r = ExactPoly.const(1)
            else:
                j = S.jet_successor(S.index_of(name), var)
                if j is None:
                    continue
                r = ExactPoly.sym(S.name_of(j))
        partial = p.derivative(name, jets=False)
        if not partial.is_zero():
            out = out + RatFunc.coerce(partial) * RatFunc.coerce(r)
    return out


def _lookup(rules, name, var):
    if rules is None:
        return None
    if callable(rules):
        return rules(name, var)
    r = rules.get(name)
    return None if r is None else r.get(var)


def _unwrap(r):
    if isinstance(r, RatFunc):
        return r.num
    return r


def _is_zero(v):
    return v.is_zero()


def subs_into(p: ExactPoly, mapping: Mapping[str, object]):
    """Substitute values (polynomials, scalars or RatFuncs) into ``p``."""
    if not any(isinstance(v, RatFunc) and not v.is_polynomial() for v in mapping.values()):
        m = {k: (v.num if isinstance(v, RatFunc) else v) for k, v in mapping.items()}
        return RatFunc(p.subs(m))
    idx = {S.index_of(k): RatFunc.coerce(v) for k, v in mapping.items()}
    out = RatFunc(ExactPoly())
    cache: dict = {}
    for m, c in p.items():
        keep = []
        term = None
        for i, e in m:
            v = idx.get(i)
            if v is None:
                keep.append((i, e))
                continue
            key = (i, e)
            pw = cache.get(key)
            if pw is None:
                pw = v ** e
                cache[key] = pw
            term = pw if term is None else term * pw
        mono = ExactPoly({tuple(keep): c}, _trusted=True)
        out = out + (RatFunc(mono) if term is None else term * mono)
    return out
