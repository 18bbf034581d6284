"""Normal-ordered linear differential operators (derivatives to the right)."""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Mapping

from .gaussrat import GaussRat, I
from .poly import ExactPoly
from .ratfunc import RatFunc

XY = ("x", "y")


def _coerce_coeff(c):
    if isinstance(c, (ExactPoly, RatFunc)):
        return c
    return ExactPoly.coerce(c)


def _is_zero(c) -> bool:
    return c.is_zero()


class DiffOp:
    """Sum of ``coeff * d^orders`` with coefficients ExactPoly or RatFunc."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, vars: tuple[str, ...] = XY):
        clean = {}
        for k, c in (terms or {}).items():
            k = tuple(int(v) for v in k)
            if len(k) != len(vars) or min(k, default=0) < 0:
                raise ValueError(f"bad derivative signature {k} for variables {vars}")
            c = _coerce_coeff(c)
            if not _is_zero(c):
                clean[k] = clean[k] + c if k in clean else c
        object.__setattr__(self, "vars", tuple(vars))
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if not _is_zero(v)})

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def mult(cls, f, vars=XY) -> "DiffOp":
        return cls({(0,) * len(vars): f}, vars)

    @classmethod
    def d(cls, var: str, vars=XY, power: int = 1) -> "DiffOp":
        k = [0] * len(vars)
        k[vars.index(var)] = power
        return cls({tuple(k): ExactPoly.const(1)}, vars)

    @classmethod
    def zero(cls, vars=XY) -> "DiffOp":
        return cls({}, vars)

    @classmethod
    def identity(cls, vars=XY) -> "DiffOp":
        return cls.mult(ExactPoly.const(1), vars)

    # -- structure --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def coefficient(self, orders: tuple[int, ...]):
        return self.terms.get(tuple(orders), ExactPoly())

    def _check(self, other: "DiffOp"):
        if self.vars != other.vars:
            raise ValueError("operators act on different variables")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _as_op(other, self.vars)
        if other is None:
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        return DiffOp(t, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -c for k, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = _as_op(other, self.vars)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_op(other, self.vars)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return self.compose(other)
        o = _as_op(other, self.vars)
        if o is None:
            return NotImplemented
        return self.compose(o)

    def __rmul__(self, other):
        o = _as_op(other, self.vars)
        if o is None:
            return NotImplemented
        return o.compose(self)

    def __matmul__(self, other):
        return self.compose(other)

    def __pow__(self, n: int):
        out = DiffOp.identity(self.vars)
        for _ in range(n):
            out = out.compose(self)
        return out

    def compose(self, other: "DiffOp") -> "DiffOp":
        """Normal-ordered product ``self o other`` (Leibniz rule)."""
        self._check(other)
        out: dict = {}
        dcache: dict = {}

        def dcoef(kb, c, gamma):
            key = (kb, gamma)
            v = dcache.get(key)
            if v is None:
                v = c
                for var, g in zip(self.vars, gamma):
                    for _ in range(g):
                        v = v.derivative(var)
                dcache[key] = v
            return v

        for ka, ca in self.terms.items():
            ranges = [range(a + 1) for a in ka]
            for kb, cb in other.terms.items():
                for gamma in product(*ranges):
                    w = 1
                    for a, g in zip(ka, gamma):
                        w *= comb(a, g)
                    dc = dcoef(kb, cb, gamma)
                    if _is_zero(dc):
                        continue
                    k = tuple(a - g + b for a, g, b in zip(ka, gamma, kb))
                    term = ca * dc * w
                    out[k] = out[k] + term if k in out else term
        return DiffOp(out, self.vars)

    def apply(self, f):
        """Act on a function expression ``f`` (ExactPoly or RatFunc)."""
        total = None
        for k, c in self.terms.items():
            g = f
            for var, n in zip(self.vars, k):
                for _ in range(n):
                    g = g.derivative(var)
            t = c * g
            total = t if total is None else total + t
        return ExactPoly() if total is None else total

    def adjoint(self) -> "DiffOp":
        """Formal adjoint: ``(c d^k)^+ = (-1)^|k| d^k o conj(c)``."""
        out = DiffOp.zero(self.vars)
        for k, c in self.terms.items():
            dk = DiffOp({k: ExactPoly.const((-1) ** sum(k))}, self.vars)
            conj = c.conjugate() if isinstance(c, ExactPoly) else RatFunc(
                c.num.conjugate(), {a.conjugate(): e for a, e in c.den.items()})
            out = out + dk.compose(DiffOp.mult(conj, self.vars))
        return out

    def map_coefficients(self, fn) -> "DiffOp":
        return DiffOp({k: fn(c) for k, c in self.terms.items()}, self.vars)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.vars == other.vars and (self - other).is_zero()

    def __hash__(self):
        raise TypeError("DiffOp is not hashable")

    # -- text -------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (sum(k), k), reverse=True)
        parts = []
        for k in keys:
            d = "*".join(f"D{v}" if n == 1 else f"D{v}^{n}" for v, n in zip(self.vars, k) if n)
            c = self.terms[k].to_text()
            parts.append(f"[{c}]" + (f"*{d}" if d else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self.to_text()})"

    __str__ = to_text


def _as_op(v, vars):
    if isinstance(v, DiffOp):
        return v
    if isinstance(v, (ExactPoly, RatFunc)):
        return DiffOp.mult(v, vars)
    try:
        return DiffOp.mult(ExactPoly.coerce(v), vars)
    except TypeError:
        return None


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return a.compose(b) - b.compose(a)


def anticommutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return a.compose(b) + b.compose(a)


def momentum(var: str, hbar=None, vars=XY) -> DiffOp:
    """``p = -i hbar d/dvar``; ``hbar`` defaults to the symbol ``hbar``."""
    h = ExactPoly.sym("hbar") if hbar is None else ExactPoly.coerce(hbar)
    return DiffOp.d(var, vars).compose(DiffOp.mult(h * GaussRat(0, -1), vars))


def angular_momentum(hbar=None) -> DiffOp:
    """``L3 = x p2 - y p1``."""
    x = DiffOp.mult(ExactPoly.sym("x"))
    y = DiffOp.mult(ExactPoly.sym("y"))
    return x.compose(momentum("y", hbar)) - y.compose(momentum("x", hbar))


def symmetrize(f, powers: tuple[int, ...], hbar=None, vars=XY) -> DiffOp:
    """``{f, p1^j p2^k} = f D + D f`` with ``D = p1^j p2^k``."""
    D = DiffOp.identity(vars)
    for var, n in zip(vars, powers):
        for _ in range(n):
            D = D.compose(momentum(var, hbar, vars))
    F = DiffOp.mult(_coerce_coeff(f), vars)
    return F.compose(D) + D.compose(F)


def hamiltonian(V, hbar=None) -> DiffOp:
    """``H = (p1^2 + p2^2)/2 + V``."""
    p1 = momentum("x", hbar)
    p2 = momentum("y", hbar)
    return (p1.compose(p1) + p2.compose(p2)) * ExactPoly.const(GaussRat(1, 0) / 2) + DiffOp.mult(_coerce_coeff(V))


__all__ = [
    "DiffOp", "commutator", "anticommutator", "momentum", "angular_momentum",
    "symmetrize", "hamiltonian", "I",
]
