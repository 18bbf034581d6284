"""Gaussian rationals: exact numbers ``re + i*im`` with rational parts."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


class GaussRat:
    """Immutable complex number with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRat):
            if im:
                raise TypeError("cannot combine a GaussRat real part with an imaginary part")
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussRat":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def coerce(value) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, complex):
            return GaussRat(Fraction(value.real), Fraction(value.imag))
        return GaussRat._raw(_as_fraction(value), _ZERO)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _try_coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _try_coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _try_coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussRat._raw(-self.re, -self.im)

    def __mul__(self, other):
        o = _try_coerce(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussRat._raw(self.re * o.re, _ZERO)
        return GaussRat._raw(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        if self.is_zero():
            raise ZeroDivisionError("division by zero GaussRat")
        if not self.im:
            return GaussRat._raw(1 / self.re, _ZERO)
        n = self.re * self.re + self.im * self.im
        return GaussRat._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = _try_coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _try_coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("GaussRat powers must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        result = GaussRat._raw(_ONE, _ZERO)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussRat":
        return GaussRat._raw(self.re, -self.im)

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        o = _try_coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __float__(self):
        if self.im:
            raise TypeError(f"{self} is not real")
        return float(self.re)

    # -- text -------------------------------------------------------------
    def to_text(self) -> str:
        """Canonical text: ``3/2``, ``-1/4*I`` or ``(3/2+1/4*I)``."""
        if not self.im:
            return _frac_text(self.re)
        if not self.re:
            return f"{_frac_text(self.im)}*I"
        sign = "+" if self.im > 0 else "-"
        return f"({_frac_text(self.re)}{sign}{_frac_text(abs(self.im))}*I)"

    def __repr__(self):
        return f"GaussRat({self.to_text()})"

    __str__ = to_text


I = GaussRat._raw(_ZERO, _ONE)
ONE = GaussRat._raw(_ONE, _ZERO)
ZERO = GaussRat._raw(_ZERO, _ZERO)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        # floats are accepted only when they are exact dyadic values
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to an exact rational")


def _try_coerce(v):
    if isinstance(v, GaussRat):
        return v
    if isinstance(v, (int, Fraction)):
        return GaussRat._raw(Fraction(v), _ZERO)
    if isinstance(v, complex):
        return GaussRat(Fraction(v.real), Fraction(v.imag))
    return None


def _frac_text(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"
