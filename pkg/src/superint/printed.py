"""Closed forms as they appear in the standard presentation of these results.

These are literal transcriptions kept for regression comparison against
the machine derivations elsewhere in the package; obvious typesetting
glitches are noted where a reading had to be chosen.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import ExactPoly
from .exact import symbols as S
from .jets import formal, jet
from .second_order import IntegralParams2

F = Fraction


def _xy():
    return ExactPoly.sym("x"), ExactPoly.sym("y")


# -- second order -----------------------------------------------------------

def determining_2nd(params: IntegralParams2 | None = None):
    """Printed ``(phi_x, phi_y)``."""
    params = IntegralParams2.symbolic() if params is None else params
    formal("V")
    a, b1, b2, c1, c2 = params.as_tuple()
    x, y = _xy()
    Vx, Vy = jet("V", 1, 0), jet("V", 0, 1)
    phi_x = -2 * (a * y * y + 2 * b1 * y + c1) * Vx + 2 * (a * x * y + b1 * x - b2 * y - c2) * Vy
    phi_y = -2 * (a * x * y + b1 * x - b2 * y - c2) * Vx + 2 * (-a * x * x + 2 * b2 * x + c1) * Vy
    return phi_x, phi_y


def compatibility_2nd(params: IntegralParams2 | None = None) -> ExactPoly:
    """Printed left-hand side of the second-order compatibility condition."""
    params = IntegralParams2.symbolic() if params is None else params
    formal("V")
    a, b1, b2, c1, c2 = params.as_tuple()
    x, y = _xy()
    Vx, Vy = jet("V", 1, 0), jet("V", 0, 1)
    Vxx, Vyy = jet("V", 2, 0), jet("V", 0, 2)
    return ((-a * x * y - b1 * x + b2 * y + c2) * (Vxx - Vyy)
            - (a * (x * x + y * y) + 2 * b1 * x + 2 * b2 * y + 2 * c1) * Vxx
            - (a * y + b1) * Vx + 3 * (a * x - b2) * Vy)


# -- fourth order -----------------------------------------------------------

def ell_equations(A, f=None):
    """Printed right-hand sides of ``ell_x`` and ``ell_y``."""
    from .fourth.coeffs import build_fi
    formal("V")
    for n in ("g1", "g2", "g3"):
        formal(n)
    f1, f2, f3, f4, f5 = build_fi(A) if f is None else f
    a = A.values
    x, y = _xy()
    hb = ExactPoly.sym("hbar")
    V = {k: jet("V", *k) for k in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))}
    g1, g2, g3 = jet("g1", 0, 0), jet("g2", 0, 0), jet("g3", 0, 0)
    dx = lambda p: p.derivative("x")
    dy = lambda p: p.derivative("y")
    q = hb * hb / 4
    lx = 2 * g1 * V[1, 0] + g2 * V[0, 1] + q * (
        (f2 + f4) * V[2, 1] - 4 * (f1 - f5) * V[1, 2] - (f2 + f4) * V[0, 3]
        + (3 * dy(f2) - dx(f5)) * V[2, 0] - (13 * dy(f1) + dx(f4)) * V[1, 1]
        - 4 * (dy(f2) - dx(f5)) * V[0, 2]
        - 2 * (6 * a["A400"] * x * x + 62 * a["A400"] * y * y + 3 * a["A301"] * x - 29 * a["A310"] * y
               + 9 * a["A220"] + 3 * a["A202"]) * V[1, 0]
        + 2 * (56 * a["A400"] * x * y - 13 * a["A310"] * x + 13 * a["A301"] * y - 3 * a["A211"]) * V[0, 1])
    ly = g2 * V[1, 0] + 2 * g3 * V[0, 1] + q * (
        -(f2 + f4) * V[3, 0] + 4 * (f1 - f5) * V[2, 1] + (f2 + f4) * V[1, 2]
        + 4 * (dy(f1) - dx(f4)) * V[2, 0] - (dy(f2) + 13 * dx(f5)) * V[1, 1]
        - (dy(f1) - 3 * dx(f4)) * V[0, 2]
        + 2 * (56 * a["A400"] * x * y - 13 * a["A310"] * x + 13 * a["A301"] * y - 3 * a["A211"]) * V[1, 0]
        - 2 * (62 * a["A400"] * x * x + 6 * a["A400"] * y * y + 29 * a["A301"] * x - 3 * a["A310"] * y
               + 9 * a["A202"] + 3 * a["A220"]) * V[0, 1])
    return lx, ly


def _A(A):
    return {n: A[n] for n in A.values}


def separable_condition(A, v1_coeff_typo: bool = True):
    """Printed linear relation between ``V1`` and ``V2``.

    ``v1_coeff_typo`` keeps the printed ``-2140 x A400`` coefficient of
    ``V2'``; ``False`` substitutes ``-240``.
    """
    from .fourth.linear import declare_separable, v1, v2
    declare_separable()
    a = _A(A)
    x, y = _xy()
    c = 2140 if v1_coeff_typo else 240
    return ((-60 * a["A310"] + 240 * y * a["A400"]) * v1(1)
            + (-20 * a["A211"] + 60 * y * a["A301"] - 60 * x * a["A310"] + 240 * x * y * a["A400"]) * v1(2)
            + (-5 * a["A112"] + 10 * y * a["A202"] - 10 * x * a["A211"] + 30 * x * y * a["A301"]
               - 15 * x * x * a["A310"] + 60 * x * x * y * a["A400"]) * v1(3)
            + (-a["A013"] + y * a["A103"] - x * a["A112"] + 2 * x * y * a["A202"] - x * x * a["A211"]
               + 3 * x * x * y * a["A301"] - x ** 3 * a["A310"] + 4 * x ** 3 * y * a["A400"]) * v1(4)
            + (-60 * a["A301"] - c * x * a["A400"]) * v2(1)
            + (20 * a["A211"] - 60 * y * a["A301"] + 60 * x * a["A310"] - 240 * x * y * a["A400"]) * v2(2)
            + (-5 * a["A121"] + 10 * y * a["A211"] - 10 * x * a["A220"] - 15 * y * y * a["A301"]
               + 30 * x * y * a["A310"] - 60 * x * y * y * a["A400"]) * v2(3)
            + (a["A031"] - y * a["A121"] + x * a["A130"] + y * y * a["A211"] - 2 * x * y * a["A220"]
               - y ** 3 * a["A301"] + 3 * x * y * y * a["A310"] - 4 * x * y ** 3 * a["A400"]) * v2(4))


def split_odes(A):
    """Printed linear ODEs: ``((v1 a, v1 b), (v2 a, v2 b))``."""
    from .fourth.linear import declare_separable, v1, v2
    declare_separable()
    a = _A(A)
    x, y = _xy()
    v1a = (210 * a["A310"] * v1(3) + 42 * (a["A211"] + 3 * a["A310"] * x) * v1(4)
           + 7 * (a["A112"] + 2 * a["A211"] * x + 3 * a["A310"] * x * x) * v1(5)
           + (a["A013"] + a["A112"] * x + a["A211"] * x * x + a["A310"] * x ** 3) * v1(6))
    v1b = (840 * a["A400"] * v1(3) + (126 * a["A301"] + 504 * a["A400"] * x) * v1(4)
           + 14 * (a["A202"] + 3 * a["A301"] * x + 6 * a["A400"] * x * x) * v1(5)
           + (a["A103"] + 2 * a["A202"] * x + 3 * a["A301"] * x * x + 4 * a["A400"] * x ** 3) * v1(6))
    v2a = (210 * a["A301"] * v2(3) - 42 * (a["A211"] - 3 * a["A301"] * y) * v2(4)
           + 7 * (a["A121"] - 2 * a["A211"] * y + 3 * a["A301"] * y * y) * v2(5)
           - (a["A031"] - a["A121"] * y + a["A211"] * y * y - a["A301"] * y ** 3) * v2(6))
    v2b = (840 * a["A400"] * v2(3) - (126 * a["A310"] - 504 * a["A400"] * y) * v2(4)
           + 14 * (a["A220"] - 3 * a["A310"] * y + 6 * a["A400"] * y * y) * v2(5)
           - (a["A130"] - 2 * a["A220"] * y + 3 * a["A310"] * y * y - 4 * a["A400"] * y ** 3) * v2(6))
    return (v1a, v1b), (v2a, v2b)


def reduced_v1_odes(A):
    """Printed ``V1`` equations when the ``V2`` side is trivial."""
    from .fourth.linear import declare_separable, v1
    declare_separable()
    a = _A(A)
    x, _ = _xy()
    return (5 * a["A112"] * v1(3) + (a["A013"] + a["A112"] * x) * v1(4),
            10 * a["A202"] * v1(3) + (a["A103"] + 2 * a["A202"] * x) * v1(4))


def ell_compatibility_separable(A):
    """Printed ``ell_xy = ell_yx`` condition for ``V = V1(x) + V2(y)``."""
    from .fourth.coeffs import build_fi
    from .fourth.linear import declare_separable, v1, v2
    declare_separable()
    for n in ("g1", "g2", "g3"):
        formal(n)
    a = _A(A)
    x, y = _xy()
    hb = ExactPoly.sym("hbar")
    f1, f2, f3, f4, f5 = build_fi(A)
    dx = lambda p: p.derivative("x")
    dy = lambda p: p.derivative("y")
    g1y, g2, g2x, g2y, g3x = jet("g1", 0, 1), jet("g2", 0, 0), jet("g2", 1, 0), jet("g2", 0, 1), jet("g3", 1, 0)
    common = 6 * a["A211"] - 26 * a["A301"] * y + 26 * a["A310"] * x - 112 * a["A400"] * x * y
    return (-g2 * v1(2) + g2 * v2(2) + (2 * g1y - g2x) * v1(1) + (g2y - 2 * g3x) * v2(1)
            + hb * hb / 4 * ((f2 + f4) * (v1(4) - v2(4)) + (dx(f2) - 4 * dy(f1)) * v1(3)
                             + (4 * dx(f5) - 5 * dy(f2) - dy(f4)) * v2(3)
                             + (3 * dy(dy(f2)) + 4 * dx(dx(f4)) + common) * v1(2)
                             - (4 * dy(dy(f2)) + 3 * dx(dx(f4)) + common) * v2(2)
                             + (84 * a["A310"] - 360 * a["A400"] * y) * v1(1)
                             + (84 * a["A310"] + 360 * a["A400"] * y) * v2(1)))


# -- exotic cases with a fourth-order integral --------------------------------
#
# Transcendents are carried by symbols: ``P`` (value), ``PY`` (derivative in
# the transcendent's own argument), ``Pinv = 1/P``, ``Pm1inv = 1/(P-1)``.
# Irrational parameter combinations get their own symbols:
# Q1_1: ``s2a = sqrt(2 alpha)``; Q2_1: ``kappa = (8 c2 / hbar^2)^(1/4)``;
# Q3_1: ``sa = sqrt(alpha)``.

def _W_jets():
    formal("W", ("y",))
    return [jet("W", k) for k in range(5)]


TRANSCENDENT_SYMBOLS = ("P", "PY", "Pinv", "Pm1inv")
_EXTRA = ("kappa", "s2a", "sa") + TRANSCENDENT_SYMBOLS


def _s(*names):
    for n in _EXTRA:
        S.register(n)
    return tuple(ExactPoly.sym(n) for n in names)


def q1_1():
    """Isotropic oscillator case with a fifth-transcendent part; ``g3`` is not printed."""
    x, y = _xy()
    hb, a, s, be, ga, de = _s("hbar", "a", "s2a", "beta", "gamma", "delta")
    al = s * s * F(1, 2)
    P, PY, Q, R = _s("P", "PY", "Pinv", "Pm1inv")
    h2 = hb * hb
    Y = y * y
    yi = y ** -1
    V = (-de * h2 * (x * x + y * y) + a * x ** -2
         + h2 * (ga * R + yi * yi * (P - 1) * (s + al * (2 * P - 1) + be * Q)
                 + Y * (PY * PY * Q * F(1, 2) + de * P) * (2 * P - 1) * R * R - PY * R - 2 * s * PY)
         + h2 * F(3, 8) * yi * yi)
    Wexpr = (-h2 * F(1, 2) * yi * (Q * (Y * PY * R - P) ** 2 - (1 - s) ** 2 * (P - 1)
                                    - 2 * be * (P - 1) * Q + ga * Y * (P + 1) * R + 2 * de * Y * Y * P * R * R)
             + h2 * F(1, 8) * yi - de * h2 * F(1, 3) * y ** 3)
    W = _W_jets()
    g1 = 2 * y * (y * W[1] + W[0] + h2 * de * F(1, 3) * y ** 3)
    g2 = -2 * x * (3 * y * W[1] + W[0] + F(4, 3) * h2 * de * y ** 3)
    u = a * x ** -2 - h2 * de * x * x
    ell = (h2 * x * x * (y * W[4] * F(1, 4) + W[3]) - x * x * (3 * y * W[1] + W[0]) * W[2]
           - h2 * y * (F(4, 3) * de * x * x * y * y + F(3, 2)) * W[2]
           + (4 * u * y * y - 3 * h2) * W[1] + 4 * y * u * W[0]
           + F(4, 3) * a * x ** -2 * h2 * de * y ** 4 - 2 * h2 * de * x * x * (F(2, 3) * h2 * de * y ** 4 - h2)
           - 2 * h2 * h2 * de * y * y)
    return dict(V=V, W=Wexpr, g1=g1, g2=g2, g3=None, ell=ell, A={"A202": 1},
                transcendent="P5", params=("hbar", "a", "s2a", "beta", "gamma", "delta"))


def q2_1():
    """Anisotropic 1:2 oscillator case with a fourth-transcendent part."""
    x, y = _xy()
    hb, a, k, al, be, ep = _s("hbar", "a", "kappa", "alpha", "beta", "epsilon")
    P, PY, Q = _s("P", "PY", "Pinv")
    h2 = hb * hb
    c2 = k ** 4 * h2 * F(1, 8)
    Y = -k * y
    # (2 c2^3 hbar^2)^(1/4) = kappa^3 hbar^2 / 4, sqrt(2 c2) = kappa^2 hbar / 2
    V = (c2 * (x * x + 4 * y * y) + a * x ** -2 - 4 * (k ** 3 * h2 * F(1, 4)) * y * P
         + k * k * hb * F(1, 2) * hb * (ep * PY + P * P))
    Wexpr = (k * h2 * (PY * PY * Q * F(1, 8) - P ** 3 * F(1, 8) - Y * P * P * F(1, 2)
                       - (Y * Y - al + ep) * P * F(1, 2) + (al - ep) * Y * F(1, 3) + be * Q * F(1, 4))
             + F(4, 3) * c2 * y ** 3)
    W = _W_jets()
    g1 = -2 * y * W[1] - W[0] + F(4, 3) * c2 * y ** 3
    g2 = 3 * x * W[1] - 4 * c2 * x * y * y
    g3 = 2 * c2 * x * x * y - 2 * a * y * x ** -2
    ell = (-F(1, 8) * h2 * x * x * W[4] + F(3, 2) * x * x * W[1] * W[2]
           - (2 * c2 * x * x * y * y - F(3, 4) * h2) * W[2]
           - 2 * (2 * a * y * x ** -2 + 2 * c2 * x * x * y) * W[1]
           - 2 * (a * x ** -2 + c2 * x * x) * W[0]
           + F(8, 3) * c2 * y ** 3 * (c2 * x * x + a * x ** -2) - 2 * c2 * h2 * y)
    return dict(V=V, W=Wexpr, g1=g1, g2=g2, g3=g3, ell=ell, A={"A112": 1},
                transcendent="P4", params=("hbar", "a", "kappa", "alpha", "beta", "epsilon"))


def q3_1():
    """Non-confining case with a third-transcendent part."""
    x, y = _xy()
    hb, a, s, be, ga, de = _s("hbar", "a", "sa", "beta", "gamma", "delta")
    al = s * s
    P, PY, Q = _s("P", "PY", "Pinv")
    h2 = hb * hb
    yi = y ** -1
    V = (a * x ** -2 + h2 * F(1, 2) * (s * PY + F(3, 4) * al * P * P + de * Q * Q * F(1, 4)
                                     + be * P * yi * F(1, 2) + ga * Q * yi * F(1, 2)
                                     - PY * Q * yi * F(1, 2) + PY * PY * Q * Q * F(1, 4)))
    Wexpr = (-h2 * F(1, 2) * yi * (F(1, 4) * (y * PY * Q - 1) ** 2 - F(1, 16) * al * y * y * P * P
                                    - F(1, 8) * (be + 2 * s) * y * P + ga * F(1, 8) * Q * y
                                    + de * F(1, 16) * Q * Q * y * y)
             + h2 * F(1, 8) * yi)
    W = _W_jets()
    g1 = 2 * y * y * W[1] + 2 * y * W[0]
    g2 = -6 * x * y * W[1] - 2 * x * W[0]
    g3 = 4 * x * x * W[1] + 2 * a * y * y * x ** -2
    ell = (h2 * x * x * (y * W[4] * F(1, 4) + W[3]) - x * x * (3 * y * W[1] + W[0]) * W[2]
           - F(3, 2) * h2 * y * W[2] + (4 * a * x ** -2 * y * y - 3 * h2) * W[1] + 4 * a * x ** -2 * y * W[0])
    return dict(V=V, W=Wexpr, g1=g1, g2=g2, g3=g3, ell=ell, A={"A202": 1},
                transcendent="P3", params=("hbar", "a", "sa", "beta", "gamma", "delta"))


EXOTIC_CASES = {"Q1_1": q1_1, "Q2_1": q2_1, "Q3_1": q3_1}
