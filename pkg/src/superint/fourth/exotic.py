"""Nonlinear ODE for the exotic part and its reduction to the Chazy class."""

from __future__ import annotations

from dataclasses import dataclass

from ..exact import ExactPoly, GaussRat
from ..exact import symbols as S
from ..jets import formal, jet
from .linear import ExoticCase


@dataclass(frozen=True)
class OdePoly:
    """Polynomial in the jet ``(w, w', ..., w^(n))`` of ``base(var)``.

    Coefficients are Laurent polynomials in ``var`` and parameters.  The
    equation is ``expr = 0``.
    """

    expr: ExactPoly
    base: str = "W"
    var: str = "y"

    def __post_init__(self):
        formal(self.base, (self.var,))
        if self.order < 0:
            raise ValueError("OdePoly must involve the unknown function")
        own = {S.index_of(n) for n in self.jet_orders()}
        if any(e < 0 for m, _ in self.expr.items() for i, e in m if i in own):
            raise ValueError("OdePoly must be polynomial in the jet of the unknown function")

    def jet(self, k: int) -> ExactPoly:
        return jet(self.base, k)

    def jet_orders(self) -> dict[str, int]:
        out = {}
        for n in self.expr.symbols():
            si = S.info(S.index_of(n))
            if si.function == self.base:
                out[n] = si.orders[0]
        return out

    @property
    def order(self) -> int:
        return max(self.jet_orders().values(), default=-1)

    def terms(self) -> list[tuple[ExactPoly, tuple[int, ...]]]:
        """``[(coefficient, (e0, e1, ..., en))]`` grouped by jet monomial."""
        n = self.order
        names = [S.info(S.jet_index(self.base, (k,))).name for k in range(n + 1)]
        return [(c, k) for k, c in sorted(self.expr.collect(names).items())]

    def leading_coefficient(self) -> ExactPoly:
        return self.expr.coefficient(S.jet_name(self.base, (self.order,)), 1)

    def total_derivative(self) -> "OdePoly":
        return OdePoly(self.expr.derivative(self.var), self.base, self.var)

    def subs(self, mapping) -> "OdePoly":
        return OdePoly(self.expr.subs(mapping), self.base, self.var)

    def to_text(self) -> str:
        return self.expr.to_text()

    def __add__(self, other: "OdePoly") -> "OdePoly":
        return OdePoly(self.expr + other.expr, self.base, self.var)

    def __sub__(self, other: "OdePoly") -> "OdePoly":
        return OdePoly(self.expr - other.expr, self.base, self.var)

    def scaled(self, c) -> "OdePoly":
        return OdePoly(self.expr * c, self.base, self.var)


def _syms(*names):
    return tuple(ExactPoly.sym(n) for n in names)


def _param(v, name):
    return ExactPoly.sym(name) if v is None else ExactPoly.coerce(v)


# -- case I: fourth-order ODE and its first integral ------------------------

def vbii4(c2=None, hbar=None, k1=None) -> OdePoly:
    """Fourth-order ODE for ``W`` (``W' = V2``) in case I with ``A202 = 1``."""
    formal("W", ("y",))
    c2, hb, k1 = _param(c2, "c2"), _param(hbar, "hbar"), _param(k1, "k1")
    y = ExactPoly.sym("y")
    W = [jet("W", k) for k in range(5)]
    h2 = hb * hb
    third = GaussRat(1) / 3
    e = (h2 * y * W[4] * (GaussRat(1) / 2) + h2 * W[3] * 2 - y * W[1] * W[2] * 6 - W[0] * W[2] * 2
         + c2 * y ** 3 * W[2] * (third * 8) - W[1] * W[1] * 8 + c2 * y * y * W[1] * 16
         + c2 * y * W[0] * 16 - c2 * c2 * y ** 4 * (third * 16) + k1)
    return OdePoly(e)


def vbii3(c2=None, hbar=None, k1=None, k2=None) -> OdePoly:
    """Third-order once-integrated form with constants ``k1, k2``."""
    formal("W", ("y",))
    c2, hb = _param(c2, "c2"), _param(hbar, "hbar")
    k1, k2 = _param(k1, "k1"), _param(k2, "k2")
    y = ExactPoly.sym("y")
    W = [jet("W", k) for k in range(4)]
    h2 = hb * hb
    third = GaussRat(1) / 3
    e = (h2 * y * y * W[3] + h2 * y * W[2] * 2 - y * y * W[1] * W[1] * 6 - y * W[0] * W[1] * 4
         + (c2 * y ** 4 * (third * 16) - h2 * 2) * W[1] + W[0] * W[0] * 2 + c2 * y ** 3 * W[0] * (third * 32)
         - c2 * c2 * y ** 6 * (GaussRat(16, 0) / 9) + k1 * y * y + k2)
    return OdePoly(e)


@dataclass(frozen=True)
class ExoticOde:
    fourth: OdePoly
    third: OdePoly
    multiplier: ExactPoly  # d/dy(third) = multiplier * fourth


def assemble_exotic_ode(case: ExoticCase | None = None, c2=None, hbar=None) -> ExoticOde:
    """The case-I ODE pair, with the exact check ``d/dy(third) = 2y * fourth``."""
    if case is not None:
        if case.label != "I":
            raise ValueError(f"ODE assembly is implemented for case I, got {case.label}")
        a202 = case.A["A202"]
        if a202 != ExactPoly.const(1):
            raise ValueError("case I is normalized with A202 = 1")
    fourth = vbii4(c2, hbar)
    third = vbii3(c2, hbar)
    mult = ExactPoly.sym("y") * 2
    if not (third.total_derivative().expr - fourth.expr * mult).is_zero():
        raise RuntimeError("first integral check failed")
    return ExoticOde(fourth, third, mult)


# -- Chazy class I reduction ------------------------------------------------

CHAZY_VAR = "Y"  # y^2; distinct from the integral Y


@dataclass(frozen=True)
class ChazyReduction:
    """``chazy`` and ``sdib`` are ODEs for ``U(Y)``; ``factor`` relates them to the input.

    After the substitution, ``y^2``-even ``factor * chazy`` equals the
    transformed third-order ODE, and ``d/dY sdib = sdib_multiplier * chazy``.
    """

    chazy: OdePoly
    sdib: OdePoly
    k3: ExactPoly
    k4: ExactPoly
    factor: ExactPoly
    sdib_multiplier: ExactPoly


def chazy_equation(c2=None, hbar=None, k3=None, k4=None) -> OdePoly:
    formal("U", (CHAZY_VAR,))
    c2, hb = _param(c2, "c2"), _param(hbar, "hbar")
    k3, k4 = _param(k3, "k3"), _param(k4, "k4")
    Y = ExactPoly.sym(CHAZY_VAR)
    U = [jet("U", k) for k in range(4)]
    g = Y * U[1] - U[0]
    e = (Y * Y * U[3] + (U[1] * (Y * U[1] * 3 - U[0] * 2) - c2 * hb ** -2 * Y * g + k3 * Y + k4) * 2
         + Y * U[2])
    return OdePoly(e, "U", CHAZY_VAR)


def sdib_equation(c2=None, hbar=None, k3=None, k4=None, k5=None) -> OdePoly:
    formal("U", (CHAZY_VAR,))
    c2, hb = _param(c2, "c2"), _param(hbar, "hbar")
    k3, k4, k5 = _param(k3, "k3"), _param(k4, "k4"), _param(k5, "k5")
    Y = ExactPoly.sym(CHAZY_VAR)
    U = [jet("U", k) for k in range(3)]
    g = Y * U[1] - U[0]
    half = GaussRat(1) / 2
    e = (Y * Y * U[2] * U[2]
         + (U[1] * U[1] * g - c2 * hb ** -2 * half * g * g + k3 * g + k4 * U[1] + k5) * 4)
    return OdePoly(e, "U", CHAZY_VAR)


def chazy_constants(k1=None, k2=None, c2=None, hbar=None):
    """``k3, k4`` in terms of ``k1, k2``."""
    k1, k2 = _param(k1, "k1"), _param(k2, "k2")
    c2, hb = _param(c2, "c2"), _param(hbar, "hbar")
    h4inv = hb ** -4
    k3 = (k1 * -2 - c2 * hb * hb * 12) * h4inv * (GaussRat(1) / 64)
    k4 = -k2 * h4inv * (GaussRat(1) / 32)
    return k3, k4


def transform_to_U(ode: OdePoly, c2=None, hbar=None) -> ExactPoly:
    """Substitute ``W = -(2 hbar^2 / y) (U(y^2) - c2 y^4/(6 hbar^2) - 1/16)``.

    Returns the result in the jets of ``U`` with ``y^2`` replaced by ``Y``;
    the input must become even in ``y``.
    """
    formal("U", (CHAZY_VAR,))
    c2, hb = _param(c2, "c2"), _param(hbar, "hbar")
    if hbar is not None and hb.is_zero():
        raise ValueError("the Chazy transform is singular at hbar = 0")
    y = ExactPoly.sym("y")
    U0 = jet("U", 0)
    W = (hb * hb * -2) * y ** -1 * U0 + c2 * y ** 3 * (GaussRat(1) / 3) + hb * hb * y ** -1 * (GaussRat(1) / 8)

    def rule(name, var):
        if var != "y":
            return None
        si = S.info(S.index_of(name))
        if si.function == "U":
            return y * 2 * jet("U", si.orders[0] + 1)
        return None

    ders = [W]
    for _ in range(ode.order):
        ders.append(ders[-1].derivative("y", rule))
    out = ode.expr.subs({S.jet_name(ode.base, (k,)): ders[k] for k in range(ode.order + 1)})
    return _even_to_Y(out)


def _even_to_Y(p: ExactPoly) -> ExactPoly:
    yi = S.index_of("y")
    Y = ExactPoly.sym(CHAZY_VAR)
    acc = ExactPoly()
    for m, c in p.items():
        e = dict(m).get(yi, 0)
        if e % 2:
            raise ValueError("expression is not even in y")
        rest = tuple((i, k) for i, k in m if i != yi)
        acc = acc + ExactPoly({rest: c}) * Y ** (e // 2)
    return acc


def chazy_reduce(ode: OdePoly | None = None, c2=None, hbar=None) -> ChazyReduction:
    """Reduce the case-I third-order ODE to Chazy I and its SD-I.b first integral."""
    ode = vbii3(c2, hbar) if ode is None else ode
    if hbar is not None and ExactPoly.coerce(hbar).is_zero():
        raise ValueError("the Chazy transform is singular at hbar = 0")
    k3, k4 = chazy_constants(c2=c2, hbar=hbar)
    chazy = chazy_equation(c2, hbar, k3, k4)
    sdib = sdib_equation(c2, hbar, k3, k4)
    T = transform_to_U(ode, c2, hbar)
    factor = _ratio(T, chazy.expr)
    if factor is None:
        raise RuntimeError("transformed ODE is not a multiple of the Chazy equation")
    d = sdib.total_derivative().expr
    mult = _ratio(d, chazy.expr)
    if mult is None:
        raise RuntimeError("SD-I.b is not a first integral of the Chazy equation")
    return ChazyReduction(chazy, sdib, k3, k4, factor, mult)


def _ratio(p: ExactPoly, q: ExactPoly):
    """``r`` with ``p = r * q`` exactly, or None."""
    from ..exact.poly import divide_exact
    r = divide_exact(p, q)
    if r is None or not (r * q - p).is_zero():
        return None
    return r
