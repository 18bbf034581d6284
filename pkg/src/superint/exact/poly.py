"""Sparse multivariate (Laurent) polynomials over the Gaussian rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

from . import symbols as S
from .gaussrat import GaussRat, ONE

Monomial = tuple  # tuple[(symbol_index, exponent), ...] sorted by index, exponents nonzero

_EMPTY: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ia, ea = a[i]
        ib, eb = b[j]
        if ia == ib:
            e = ea + eb
            if e:
                out.append((ia, e))
            i += 1
            j += 1
        elif ia < ib:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


def mono_pow(a: Monomial, n: int) -> Monomial:
    if n == 0:
        return _EMPTY
    return tuple((i, e * n) for i, e in a)


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


def _coerce_scalar(v):
    if isinstance(v, GaussRat):
        return v
    if isinstance(v, (int, Fraction, complex)):
        return GaussRat.coerce(v)
    return None


class ExactPoly:
    """Immutable sparse polynomial with Gaussian-rational coefficients.

    Negative exponents are allowed, which makes the ring the Laurent
    polynomials; this keeps monomial denominators such as ``1/x**2``
    inside the polynomial layer.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, GaussRat] | None = None, *, _trusted: bool = False):
        if terms is None:
            terms = {}
        elif not _trusted:
            clean = {}
            for m, c in terms.items():
                c = GaussRat.coerce(c)
                if not c.is_zero():
                    clean[tuple(m)] = c
            terms = clean
        object.__setattr__(self, "_terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ExactPoly is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "ExactPoly":
        c = GaussRat.coerce(c)
        return cls({} if c.is_zero() else {_EMPTY: c}, _trusted=True)

    @classmethod
    def sym(cls, name: str) -> "ExactPoly":
        return cls({((S.index_of(name), 1),): ONE}, _trusted=True)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff=1) -> "ExactPoly":
        m = tuple(sorted((S.index_of(n), int(e)) for n, e in powers.items() if e))
        c = GaussRat.coerce(coeff)
        return cls({} if c.is_zero() else {m: c}, _trusted=True)

    @classmethod
    def jet(cls, base: str, orders: tuple[int, ...]) -> "ExactPoly":
        return cls({((S.jet_index(base, orders), 1),): ONE}, _trusted=True)

    @staticmethod
    def coerce(v) -> "ExactPoly":
        if isinstance(v, ExactPoly):
            return v
        c = _coerce_scalar(v)
        if c is None:
            raise TypeError(f"cannot convert {type(v).__name__} to ExactPoly")
        return ExactPoly.const(c)

    # -- basic access -----------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, GaussRat]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _EMPTY in self._terms)

    def constant_term(self) -> GaussRat:
        return self._terms.get(_EMPTY, GaussRat())

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def symbol_indices(self) -> set[int]:
        out = set()
        for m in self._terms:
            out.update(i for i, _ in m)
        return out

    def symbols(self) -> set[str]:
        return {S.name_of(i) for i in self.symbol_indices()}

    def degree(self, name: str) -> int:
        idx = S.index_of(name)
        return max((dict(m).get(idx, 0) for m in self._terms), default=0)

    def min_degree(self, name: str) -> int:
        idx = S.index_of(name)
        return min((dict(m).get(idx, 0) for m in self._terms), default=0)

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        t = dict(self._terms)
        for m, c in o._terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v.is_zero():
                    del t[m]
                else:
                    t[m] = v
        return ExactPoly(t, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly({m: -c for m, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        c = _coerce_scalar(other)
        if c is not None:
            return self.scale(c)
        if not isinstance(other, ExactPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return ExactPoly()
        if len(other._terms) == 1 and _EMPTY in other._terms:
            return self.scale(other._terms[_EMPTY])
        if len(self._terms) == 1 and _EMPTY in self._terms:
            return other.scale(self._terms[_EMPTY])
        t: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = mono_mul(ma, mb)
                v = t.get(m)
                t[m] = ca * cb if v is None else v + ca * cb
        return ExactPoly({m: c for m, c in t.items() if not c.is_zero()}, _trusted=True)

    def __rmul__(self, other):
        c = _coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self.scale(c)

    def scale(self, c) -> "ExactPoly":
        c = GaussRat.coerce(c)
        if c.is_zero():
            return ExactPoly()
        if c == ONE:
            return self
        return ExactPoly({m: v * c for m, v in self._terms.items()}, _trusted=True)

    def mul_monomial(self, m: Monomial, c: GaussRat = ONE) -> "ExactPoly":
        return ExactPoly({mono_mul(k, m): v * c for k, v in self._terms.items()}, _trusted=True)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("ExactPoly powers must be integers")
        if n < 0:
            return self.inverse_monomial() ** (-n)
        if len(self._terms) == 1:
            (m, c), = self._terms.items()
            return ExactPoly({mono_pow(m, n): c ** n}, _trusted=True) if n else ExactPoly.const(1)
        result = ExactPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse_monomial(self) -> "ExactPoly":
        """Inverse of a single-term polynomial (Laurent inverse)."""
        if len(self._terms) != 1:
            raise ZeroDivisionError("only monomials are invertible in the Laurent ring")
        (m, c), = self._terms.items()
        return ExactPoly({mono_pow(m, -1): c.inverse()}, _trusted=True)

    def __truediv__(self, other):
        c = _coerce_scalar(other)
        if c is not None:
            return self.scale(c.inverse())
        if isinstance(other, ExactPoly):
            if other.is_monomial():
                return self * other.inverse_monomial()
            q = divide_exact(self, other)
            if q is None:
                raise ZeroDivisionError("non-monomial divisor does not divide exactly; use RatFunc")
            return q
        return NotImplemented

    def conjugate(self) -> "ExactPoly":
        return ExactPoly({m: c.conjugate() for m, c in self._terms.items()}, _trusted=True)

    def real_part(self) -> "ExactPoly":
        return ExactPoly({m: GaussRat(c.re) for m, c in self._terms.items() if c.re}, _trusted=True)

    def imag_part(self) -> "ExactPoly":
        return ExactPoly({m: GaussRat(c.im) for m, c in self._terms.items() if c.im}, _trusted=True)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus ---------------------------------------------------------
    def derivative(self, var: str, rules=None, *, jets: bool = True) -> "ExactPoly":
        """Partial derivative with respect to the symbol ``var``.

        Symbols other than ``var`` are constants unless they are jets of a
        function of ``var`` or ``rules`` supplies their derivative.
        ``rules`` is a mapping ``{symbol: {var: ExactPoly}}`` or a callable
        ``(symbol_name, var) -> ExactPoly | None``.
        """
        vidx = S.index_of(var)
        lookup = _rule_lookup(rules)
        cache: dict[int, ExactPoly | None] = {}

        def dsym(i: int):
            if i in cache:
                return cache[i]
            if i == vidx:
                r = ExactPoly.const(1)
            else:
                r = lookup(S.name_of(i), var) if lookup else None
                if r is None:
                    if jets:
                        j = S.jet_successor(i, var)
                        r = None if j is None else ExactPoly({((j, 1),): ONE}, _trusted=True)
                elif not isinstance(r, ExactPoly):
                    r = ExactPoly.coerce(r)
            cache[i] = r
            return r

        acc: dict = {}
        simple: dict = {}
        for m, c in self._terms.items():
            for pos, (i, e) in enumerate(m):
                d = dsym(i)
                if d is None or d.is_zero():
                    continue
                if e == 1:
                    rest = m[:pos] + m[pos + 1:]
                else:
                    rest = m[:pos] + ((i, e - 1),) + m[pos + 1:]
                coeff = c * e
                if d.is_monomial():
                    (dm, dc), = d._terms.items()
                    mm = mono_mul(rest, dm)
                    v = simple.get(mm)
                    simple[mm] = coeff * dc if v is None else v + coeff * dc
                else:
                    for dm, dc in d._terms.items():
                        mm = mono_mul(rest, dm)
                        v = acc.get(mm)
                        acc[mm] = coeff * dc if v is None else v + coeff * dc
        for mm, v in acc.items():
            w = simple.get(mm)
            simple[mm] = v if w is None else w + v
        return ExactPoly({m: c for m, c in simple.items() if not c.is_zero()}, _trusted=True)

    def diff(self, *vars_: str, rules=None) -> "ExactPoly":
        out = self
        for v in vars_:
            out = out.derivative(v, rules)
        return out

    # -- structure --------------------------------------------------------
    def collect(self, names: Iterable[str]) -> dict[tuple[int, ...], "ExactPoly"]:
        """Split into ``{exponents of names: coefficient polynomial}``."""
        idxs = [S.index_of(n) for n in names]
        pos = {i: k for k, i in enumerate(idxs)}
        out: dict[tuple[int, ...], dict] = {}
        for m, c in self._terms.items():
            key = [0] * len(idxs)
            rest = []
            for i, e in m:
                k = pos.get(i)
                if k is None:
                    rest.append((i, e))
                else:
                    key[k] = e
            out.setdefault(tuple(key), {})[tuple(rest)] = c
        return {k: ExactPoly(v, _trusted=True) for k, v in out.items()}

    def coefficient(self, name: str, exponent: int) -> "ExactPoly":
        return self.collect([name]).get((exponent,), ExactPoly())

    def subs(self, mapping: Mapping[str, object]) -> "ExactPoly":
        """Substitute polynomials (or scalars) for symbols."""
        rep = {}
        for n, v in mapping.items():
            rep[S.index_of(n)] = ExactPoly.coerce(v)
        if not rep:
            return self
        powcache: dict = {}

        def power(i, e):
            key = (i, e)
            p = powcache.get(key)
            if p is None:
                p = rep[i] ** e
                powcache[key] = p
            return p

        out = ExactPoly()
        acc: dict = {}
        for m, c in self._terms.items():
            keep = []
            factors = []
            for i, e in m:
                if i in rep:
                    factors.append(power(i, e))
                else:
                    keep.append((i, e))
            if not factors:
                v = acc.get(tuple(keep))
                acc[tuple(keep)] = c if v is None else v + c
                continue
            prod = factors[0]
            for f in factors[1:]:
                prod = prod * f
            out = out + prod.mul_monomial(tuple(keep), c)
        if acc:
            out = out + ExactPoly({m: c for m, c in acc.items() if not c.is_zero()}, _trusted=True)
        return out

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value with ``values`` (scalars or broadcastable arrays)."""
        idx_vals = {S.index_of(n): v for n, v in values.items()}
        missing = self.symbol_indices() - set(idx_vals)
        if missing:
            raise S.UnknownSymbolError(", ".join(sorted(S.name_of(i) for i in missing)))
        complex_needed = any(not c.is_real() for c in self._terms.values())
        pcache: dict = {}

        def pw(i, e):
            key = (i, e)
            r = pcache.get(key)
            if r is None:
                base = idx_vals[i]
                r = base ** e if e > 0 else 1.0 / (base ** (-e))
                pcache[key] = r
            return r

        total = 0.0
        for m, c in self._terms.items():
            cv = complex(c) if complex_needed else float(c.re)
            term = cv
            for i, e in m:
                term = term * pw(i, e)
            total = total + term
        return total

    # -- text -------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, GaussRat]]:
        """Terms in descending graded-lexicographic order."""
        order = sorted(self.symbol_indices(), key=S.sort_key)
        return sorted(self._terms.items(), key=lambda mc: _grlex_key(mc[0], order), reverse=True)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            parts.append(_term_text(m, c, first=(k == 0)))
        return " ".join(parts)

    def __repr__(self):
        return f"ExactPoly({self.to_text()})"

    __str__ = to_text


def _grlex_key(m: Monomial, order: list[int]):
    exps = dict(m)
    return (mono_degree(m), tuple(exps.get(i, 0) for i in order))


def _term_text(m: Monomial, c: GaussRat, first: bool) -> str:
    sign = ""
    if c.is_real():
        if c.re < 0:
            sign = "-"
            c = -c
        else:
            sign = "+"
    else:
        sign = "+"
    factors = []
    for i, e in sorted(m, key=lambda ie: S.sort_key(ie[0])):
        n = S.name_of(i)
        factors.append(n if e == 1 else f"{n}^{e}" if e > 0 else f"{n}^({e})")
    ct = c.to_text()
    if factors:
        body = "*".join(factors) if ct == "1" else ct + "*" + "*".join(factors)
    else:
        body = ct
    if first:
        return body if sign == "+" else "-" + body
    return f"{sign} {body}"


def _as_poly(v):
    if isinstance(v, ExactPoly):
        return v
    c = _coerce_scalar(v)
    if c is None:
        return None
    return ExactPoly.const(c)


def _rule_lookup(rules) -> Callable | None:
    if rules is None:
        return None
    if callable(rules):
        return rules

    def look(name, var):
        r = rules.get(name)
        if r is None:
            return None
        return r.get(var)

    return look


def leading_term(p: ExactPoly, order: list[int]):
    """Leading (monomial, coeff) under lex order on the given symbol indices."""
    def key(mc):
        d = dict(mc[0])
        return tuple(d.get(i, 0) for i in order)
    return max(p.items(), key=key)


def divide_exact(a: ExactPoly, b: ExactPoly) -> ExactPoly | None:
    """Exact quotient ``a / b`` for polynomial ``b``, or None if inexact.

    Multivariate division with a lex order over the symbols present; the
    remainder being zero certifies exactness.  Negative exponents are
    shifted away first so the division runs in the polynomial ring.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return ExactPoly()
    if b.is_monomial():
        return a * b.inverse_monomial()
    shift_a = _min_exponents(a)
    shift_b = _min_exponents(b)
    a2 = a.mul_monomial(tuple(sorted((i, -e) for i, e in shift_a.items() if e)))
    b2 = b.mul_monomial(tuple(sorted((i, -e) for i, e in shift_b.items() if e)))
    order = sorted(a2.symbol_indices() | b2.symbol_indices())
    lm_b, lc_b = leading_term(b2, order)
    lbd = dict(lm_b)
    rem = a2
    quot: dict = {}
    guard = 0
    while not rem.is_zero():
        guard += 1
        if guard > 200000:
            return None
        lm_r, lc_r = leading_term(rem, order)
        d = dict(lm_r)
        qm = []
        for i in order:
            e = d.get(i, 0) - lbd.get(i, 0)
            if e < 0:
                return None
            if e:
                qm.append((i, e))
        qm = tuple(qm)
        qc = lc_r / lc_b
        quot[qm] = quot.get(qm, GaussRat()) + qc
        rem = rem - b2.mul_monomial(qm, qc)
    q = ExactPoly({m: c for m, c in quot.items() if not c.is_zero()}, _trusted=True)
    back = {i: shift_a.get(i, 0) - shift_b.get(i, 0) for i in set(shift_a) | set(shift_b)}
    return q.mul_monomial(tuple(sorted((i, e) for i, e in back.items() if e)))


def _min_exponents(p: ExactPoly) -> dict[int, int]:
    mins: dict[int, int] = {}
    for m in p.terms:
        for i, e in m:
            if e < mins.get(i, 0):
                mins[i] = e
    return mins


def sym(name: str) -> ExactPoly:
    """Shorthand for a registered symbol (registering it if new)."""
    S.register(name)
    return ExactPoly.sym(name)


def symbols_(*names: str) -> tuple[ExactPoly, ...]:
    return tuple(sym(n) for n in names)


def as_array(v, shape):
    """Broadcast a scalar evaluation result to ``shape``."""
    return np.broadcast_to(np.asarray(v), shape)
