"""Second-order integrals of motion in the Euclidean plane.

The determining equations are obtained by expanding ``[H, X]`` for the
general second-order ansatz and reading off the first-order coefficients,
so nothing here depends on a transcription of the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .exact import (
    DiffOp, ExactPoly, GaussRat, RatFunc, anticommutator, angular_momentum, commutator,
    hamiltonian, momentum,
)
from .exact import symbols as S
from .exact.algebraic import reduce_all
from .exact.linalg import nullspace
from .jets import formal, jet, substitute_jets

PARAM_NAMES = ("a", "b1", "b2", "c1", "c2")
LABELS = ("Cartesian", "Polar", "Parabolic", "Elliptic")


@dataclass(frozen=True)
class IntegralParams2:
    """Constants ``a, b1, b2, c1, c2`` of the second-order ansatz (exact or symbolic)."""

    a: ExactPoly
    b1: ExactPoly
    b2: ExactPoly
    c1: ExactPoly
    c2: ExactPoly

    def __init__(self, a=0, b1=0, b2=0, c1=0, c2=0):
        for n, v in zip(PARAM_NAMES, (a, b1, b2, c1, c2)):
            object.__setattr__(self, n, ExactPoly.coerce(v))

    @classmethod
    def symbolic(cls) -> "IntegralParams2":
        return cls(*(ExactPoly.sym(n) for n in PARAM_NAMES))

    @classmethod
    def from_sequence(cls, values: Iterable) -> "IntegralParams2":
        values = list(values)
        if len(values) != 5:
            raise ValueError("expected five parameters (a, b1, b2, c1, c2)")
        return cls(*values)

    def as_tuple(self) -> tuple[ExactPoly, ...]:
        return (self.a, self.b1, self.b2, self.c1, self.c2)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.as_tuple())


@dataclass(frozen=True)
class SeparationClass:
    I1: ExactPoly
    I2: ExactPoly
    label: str
    degenerate: bool = False


def build_X2(params: IntegralParams2, phi=0, hbar=None) -> DiffOp:
    """``X = a L3^2 + b1{L3,p1} + b2{L3,p2} + c1(p1^2-p2^2) + 2 c2 p1 p2 + phi``."""
    L3 = angular_momentum(hbar)
    p1 = momentum("x", hbar)
    p2 = momentum("y", hbar)
    X = (
        L3.compose(L3) * params.a
        + anticommutator(L3, p1) * params.b1
        + anticommutator(L3, p2) * params.b2
        + (p1.compose(p1) - p2.compose(p2)) * params.c1
        + p1.compose(p2) * (params.c2 * 2)
    )
    if not isinstance(phi, (ExactPoly, RatFunc)):
        phi = ExactPoly.coerce(phi)
    return X + DiffOp.mult(phi)


def _check_phi_free(expr: ExactPoly, what: str):
    bad = [n for n in expr.symbols() if S.info(S.index_of(n)).function == "phi"]
    if bad:
        raise RuntimeError(f"{what} still contains {bad}")


def derive_determining_2nd(params: IntegralParams2 | None = None, V=None, *, rules=None):
    """Machine-derived right-hand sides ``(phi_x, phi_y)`` from ``[H, X] = 0``.

    ``V`` is None for a formal potential ``V(x, y)`` (result in its jets),
    or an explicit ExactPoly / RatFunc; ``rules`` supplies derivatives of
    auxiliary symbols inside an explicit ``V``.
    """
    params = IntegralParams2.symbolic() if params is None else params
    Vf = formal("V")
    phi = formal("phi")
    H = hamiltonian(Vf)
    X = build_X2(params, phi)
    C = commutator(H, X)
    for k in C.terms:
        if sum(k) >= 2 and not C.terms[k].is_zero():
            raise RuntimeError(f"unexpected order-{sum(k)} term in [H, X]")
    hb2 = ExactPoly.sym("hbar") ** 2
    out = []
    for k, name in (((1, 0), "phi_x"), ((0, 1), "phi_y")):
        coef = C.coefficient(k)
        lin = coef.coefficient(name, 1)
        if lin != -hb2:
            raise RuntimeError(f"unexpected coefficient of {name}: {lin}")
        rest = coef - lin * jet("phi", *k)
        _check_phi_free(rest, name)
        rhs = rest / hb2
        if "hbar" in rhs.symbols():
            raise RuntimeError("determining equations depend on hbar")
        out.append(rhs)
    phi_x, phi_y = out
    if V is not None:
        phi_x = substitute_jets(phi_x, "V", V, rules)
        phi_y = substitute_jets(phi_y, "V", V, rules)
    return phi_x, phi_y


def zeroth_order_defect(params: IntegralParams2 | None = None) -> ExactPoly:
    """Zeroth-order part of ``[H, X]`` after imposing the first-order equations.

    It vanishes identically once the compatibility condition holds; the
    value returned is the formal remainder for inspection in tests.
    """
    params = IntegralParams2.symbolic() if params is None else params
    Vf = formal("V")
    phi = formal("phi")
    C = commutator(hamiltonian(Vf), build_X2(params, phi))
    c0 = C.coefficient((0, 0))
    phi_x, phi_y = derive_determining_2nd(params)
    subs = {
        "phi_x": phi_x, "phi_y": phi_y,
        "phi_xx": phi_x.derivative("x"), "phi_yy": phi_y.derivative("y"),
    }
    present = {n for n in c0.symbols()}
    return c0.subs({k: v for k, v in subs.items() if k in present})


def compatibility_2nd(params: IntegralParams2 | None = None, V=None, *, rules=None, relations=()):
    """Residual of ``d_y phi_x - d_x phi_y``.

    Formal ``V`` gives an ExactPoly in the jets of V.  Explicit ``V`` gives
    the numerator after clearing denominators and reducing modulo
    ``relations`` (an ExactPoly; zero iff the condition holds).
    """
    phi_x, phi_y = derive_determining_2nd(params)
    R = phi_x.derivative("y") - phi_y.derivative("x")
    if V is None:
        return R
    sub = substitute_jets(R, "V", V, rules)
    return reduce_all(sub.num, relations)


def poisson_bracket(f: ExactPoly, g: ExactPoly) -> ExactPoly:
    """Canonical bracket in ``(x, y, px, py)``."""
    S.register("px")
    S.register("py")
    out = ExactPoly()
    for q, p in (("x", "px"), ("y", "py")):
        out = out + f.derivative(q) * g.derivative(p) - f.derivative(p) * g.derivative(q)
    return out


def derive_determining_2nd_classical(params: IntegralParams2 | None = None):
    """``(phi_x, phi_y)`` from the Poisson bracket ``{H, X} = 0``."""
    params = IntegralParams2.symbolic() if params is None else params
    S.register("px")
    S.register("py")
    x, y = ExactPoly.sym("x"), ExactPoly.sym("y")
    px, py = ExactPoly.sym("px"), ExactPoly.sym("py")
    L = x * py - y * px
    Vf = formal("V")
    phi = formal("phi")
    H = (px * px + py * py) * GaussRat(1) / 2 + Vf
    X = (params.a * L * L + params.b1 * 2 * L * px + params.b2 * 2 * L * py
         + params.c1 * (px * px - py * py) + params.c2 * 2 * px * py + phi)
    B = poisson_bracket(H, X)
    parts = B.collect(["px", "py"])
    out = []
    for key, name in (((1, 0), "phi_x"), ((0, 1), "phi_y")):
        coef = parts.get(key, ExactPoly())
        lin = coef.coefficient(name, 1)
        if lin != ExactPoly.const(-1):
            raise RuntimeError(f"unexpected coefficient of {name}: {lin}")
        out.append(coef - lin * jet("phi", *key))
    return tuple(out)


def compatibility_2nd_classical(params: IntegralParams2 | None = None) -> ExactPoly:
    phi_x, phi_y = derive_determining_2nd_classical(params)
    return phi_x.derivative("y") - phi_y.derivative("x")


def invariants(params: IntegralParams2) -> tuple[ExactPoly, ExactPoly]:
    a, b1, b2, c1, c2 = params.as_tuple()
    I2 = (a * c1 * 2 - b1 * b1 + b2 * b2) ** 2 + (a * c2 - b1 * b2) ** 2 * 4
    return a, I2


def classify_integral(params: IntegralParams2, phi=0) -> SeparationClass:
    """Separation class from the Euclidean invariants ``I1`` and ``I2``.

    Scaling ``X -> lambda X`` only changes magnitudes, so the label depends
    on whether each invariant vanishes.
    """
    I1, I2 = invariants(params)
    for v in (I1, I2):
        if not v.is_constant():
            raise ValueError("classification needs numeric parameters")
    z1, z2 = I1.is_zero(), I2.is_zero()
    if z1:
        label = "Cartesian" if z2 else "Parabolic"
    else:
        label = "Polar" if z2 else "Elliptic"
    phi = ExactPoly.coerce(phi) if not isinstance(phi, (ExactPoly, RatFunc)) else phi
    degenerate = params.is_zero() and phi.is_zero()
    return SeparationClass(I1, I2, label, degenerate)


def translate_params(params: IntegralParams2, t1, t2) -> IntegralParams2:
    """Parameters of the same integral after ``x -> x + t1``, ``y -> y + t2``.

    ``L3`` becomes ``L3 + t1 p2 - t2 p1``; the ``p1^2 + p2^2`` part created
    by the shift is dropped (it is a multiple of ``H`` up to potential terms).
    """
    a, b1, b2, c1, c2 = params.as_tuple()
    t1 = ExactPoly.coerce(t1)
    t2 = ExactPoly.coerce(t2)
    half = GaussRat(1) / 2
    return IntegralParams2(
        a,
        b1 - a * t2,
        b2 + a * t1,
        c1 + a * (t2 * t2 - t1 * t1) * half - b1 * t2 - b2 * t1,
        c2 - a * t1 * t2 + b1 * t1 - b2 * t2,
    )


def integral_space(V, *, rules=None, relations=(), keep=("x", "y")) -> list[IntegralParams2]:
    """Basis of parameter tuples for which ``V`` admits a second-order integral.

    The residual is linear in ``(a, b1, b2, c1, c2)``; requiring every
    coefficient (in all remaining symbols) to vanish gives a linear system
    whose null space is returned.
    """
    R = compatibility_2nd(IntegralParams2.symbolic(), V, rules=rules, relations=relations)
    parts = R.collect(PARAM_NAMES)
    cols = {}
    for key, coef in parts.items():
        if sum(key) != 1:
            raise RuntimeError("residual is not linear in the integral parameters")
        cols[key.index(1)] = coef
    monos = set()
    for coef in cols.values():
        monos.update(coef.terms)
    rows = []
    for m in monos:
        rows.append([cols[j].terms.get(m, GaussRat(0)) if j in cols else GaussRat(0) for j in range(5)])
    basis = nullspace(rows, 5)
    return [IntegralParams2(*[ExactPoly.const(c) for c in v]) for v in basis]


# -- the four superintegrable families -----------------------------------

SQRT_SYMBOL = "s"


def _sqrt_extension():
    """``s = sqrt(r + x)`` with ``r = sqrt(x^2 + y^2)``, so ``r = s^2 - x``.

    Returns (derivative rules, relations).  ``sqrt(r - x) = y / s`` on the
    upper half plane; ``s^4 = 2 x s^2 + y^2``.
    """
    from .exact.algebraic import AlgebraicRelation
    S.register(SQRT_SYMBOL)
    s = ExactPoly.sym(SQRT_SYMBOL)
    x, y = ExactPoly.sym("x"), ExactPoly.sym("y")
    r = s * s - x
    rules = {
        SQRT_SYMBOL: {
            "x": RatFunc(s * GaussRat(1, 0) / 2, {r: 1}),
            "y": RatFunc(y * GaussRat(1, 0) / 2 * s ** -1, {r: 1}),
        }
    }
    rel = AlgebraicRelation.from_minpoly(SQRT_SYMBOL, s ** 4 - x * s * s * 2 - y * y)
    return rules, (rel,)


def superintegrable_family(name: str):
    """``(V, rules, relations)`` for ``V_I`` ... ``V_IV`` with symbolic alpha, beta, gamma."""
    x, y = ExactPoly.sym("x"), ExactPoly.sym("y")
    al, be, ga = (ExactPoly.sym(n) for n in ("alpha", "beta", "gamma"))
    if name == "V_I":
        return RatFunc(al * (x * x + y * y) + be * x ** -2 + ga * y ** -2), None, ()
    if name == "V_II":
        return RatFunc(al * (x * x + y * y * 4) + be * x ** -2 + ga * y), None, ()
    rules, rels = _sqrt_extension()
    s = ExactPoly.sym(SQRT_SYMBOL)
    r = s * s - x
    if name == "V_III":
        # alpha/r + (1/r^2)(beta/cos^2(phi/2) + gamma/sin^2(phi/2))
        # cos^2(phi/2) = s^2/(2r), sin^2(phi/2) = y^2/(2 r s^2)
        V = (RatFunc(al, {r: 1}) + RatFunc(be * 2 * s ** -2, {r: 1})
             + RatFunc(ga * 2 * s * s * y ** -2, {r: 1}))
        return V, rules, rels
    if name == "V_IV":
        # alpha/r + r^(-1/2)(beta cos(phi/2) + gamma sin(phi/2)), with the
        # common factor 1/sqrt(2) absorbed into beta and gamma
        V = RatFunc(al, {r: 1}) + RatFunc(be * s + ga * y * s ** -1, {r: 1})
        return V, rules, rels
    raise ValueError(f"unknown family {name!r}")


def family_integrals(name: str) -> list[IntegralParams2]:
    V, rules, rels = superintegrable_family(name)
    return integral_space(V, rules=rules, relations=rels)
