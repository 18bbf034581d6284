"""Certification of printed fourth-order integrals with transcendent potentials.

The potential, ``W``, ``g1, g2, g3`` and ``ell`` of each case are
polynomials in ``x^{+-1}, y^{+-1}``, the parameters and the symbols ``P``,
``PY``, ``Pinv = 1/P``, ``Pm1inv = 1/(P-1)``.  Differentiation in ``y``
uses the chain rule through the transcendent's argument and eliminates
``P''`` with its Painlevé equation, so every residual of the determining
equations becomes a polynomial that can be tested for zero exactly and
evaluated on a grid from ``(P, P')`` alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .. import printed
from ..exact import ExactPoly
from ..exact import symbols as S
from ..jets import derivatives_of, formal, jets_in
from .coeffs import LeadingCoeffs4
from .determining import G_NAMES, derive_determining_4th, ell_compatibility
from .linear import declare_separable

F = Fraction
EQUATIONS = ("g1_x", "g2_x+g1_y", "g3_x+g2_y", "g3_y", "ell_x", "ell_y", "ell_xy-ell_yx")


# -- transcendent chains ------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    """Transcendent ``P(Y)`` with ``Y = arg(y)``; ``rhs`` is ``P''(Y)`` in the symbols."""

    kind: str
    arg: ExactPoly
    darg: ExactPoly
    rhs: ExactPoly

    def rules(self, name, var):
        if var != "y":
            return None
        P, PY, Q, R = (ExactPoly.sym(n) for n in printed.TRANSCENDENT_SYMBOLS)
        if name == "P":
            return self.darg * PY
        if name == "PY":
            return self.darg * self.rhs
        if name == "Pinv":
            return -self.darg * PY * Q * Q
        if name == "Pm1inv":
            return -self.darg * PY * R * R
        return None


def chain_for(case_id: str) -> Chain:
    printed.q2_1()  # registers the transcendent symbols
    P, PY, Q, R = (ExactPoly.sym(n) for n in printed.TRANSCENDENT_SYMBOLS)
    y = ExactPoly.sym("y")
    if case_id == "Q2_1":
        k, al, be = (ExactPoly.sym(n) for n in ("kappa", "alpha", "beta"))
        Y = -k * y
        rhs = PY * PY * Q * F(1, 2) + F(3, 2) * P ** 3 + 4 * Y * P * P + 2 * (Y * Y - al) * P + be * Q
        return Chain("P4", Y, -k, rhs)
    if case_id == "Q1_1":
        s, be, ga, de = (ExactPoly.sym(n) for n in ("s2a", "beta", "gamma", "delta"))
        al = s * s * F(1, 2)
        Yi = y ** -2
        rhs = ((Q * F(1, 2) + R) * PY * PY - PY * Yi + (P - 1) ** 2 * Yi * Yi * (al * P + be * Q)
               + ga * P * Yi + de * P * (P + 1) * R)
        return Chain("P5", y * y, 2 * y, rhs)
    if case_id == "Q3_1":
        s, be, ga, de = (ExactPoly.sym(n) for n in ("sa", "beta", "gamma", "delta"))
        al = s * s
        yi = y ** -1
        rhs = PY * PY * Q - PY * yi + (al * P * P + be) * yi + ga * P ** 3 + de * Q
        return Chain("P3", y, ExactPoly.const(1), rhs)
    raise ValueError(f"unknown case {case_id!r}")


@lru_cache(maxsize=None)
def _mixed_power(p: int, q: int, r: int) -> tuple:
    """``P^p Pinv^q Pm1inv^r`` (``p*q = 0``) as ``((p', q', r'), n)`` pairs with no mixing."""
    if r == 0 or (p == 0 and q == 0):
        return (((p, q, r), 1),)
    acc: dict = {}
    if p:  # P*R = 1 + R
        parts = (((p - 1, 0, r - 1), 1), ((p - 1, 0, r), 1))
    else:  # Pinv*R = R - Pinv
        parts = (((0, q - 1, r), 1), ((0, q, r - 1), -1))
    for part, sg in parts:
        for key, n in _mixed_power(*part):
            acc[key] = acc.get(key, 0) + sg * n
    return tuple((k, n) for k, n in acc.items() if n)


def normalize(expr: ExactPoly) -> ExactPoly:
    """Partial-fraction normal form in ``P``, ``1/P``, ``1/(P-1)``.

    Uses ``P*Pinv = 1``, ``P*Pm1inv = 1 + Pm1inv`` and
    ``Pinv*Pm1inv = Pm1inv - Pinv`` so that no monomial mixes them; also
    ``epsilon^2 -> 1`` (the sign parameter is +-1).
    """
    names = printed.TRANSCENDENT_SYMBOLS
    special = tuple(S.index_of(n) for n in (names[0], names[2], names[3]))
    ie = S.index_of("epsilon")
    acc: dict = {}
    for m, c in expr.items():
        d = dict(m)
        if d.get(ie, 0) > 1:
            d[ie] %= 2
        p, q, r = (d.pop(i, 0) for i in special)
        k = min(p, q)
        rest = [(i, e) for i, e in d.items() if e]
        for exps, n in _mixed_power(p - k, q - k, r):
            mono = tuple(sorted(rest + [(i, e) for i, e in zip(special, exps) if e]))
            acc[mono] = acc[mono] + c * n if mono in acc else c * n
    return ExactPoly({m: c for m, c in acc.items() if not c.is_zero()})


# -- case assembly --------------------------------------------------------------

@dataclass(frozen=True)
class CaseData:
    case_id: str
    chain: Chain
    A: LeadingCoeffs4
    V: ExactPoly
    W: ExactPoly
    g: tuple
    ell: ExactPoly
    params: tuple
    notes: tuple = ()


def _d(expr, var, rules, n=1):
    for _ in range(n):
        expr = expr.derivative(var, rules)
    return expr


def _subs_W(expr: ExactPoly, W: ExactPoly, rules) -> ExactPoly:
    found = jets_in(expr, "W")
    if not found:
        return expr
    ders = {0: W}
    for k in range(1, max(o[0] for o in found.values()) + 1):
        ders[k] = ders[k - 1].derivative("y", rules)
    return normalize(expr.subs({n: ders[o[0]] for n, o in found.items()}))


_CASES: dict = {}


def case_data(case_id: str) -> CaseData:
    """Printed data with ``W`` substituted; ``g3`` of Q1_1 is reconstructed."""
    if case_id in _CASES:
        return _CASES[case_id]
    if case_id not in printed.EXOTIC_CASES:
        raise ValueError(f"unknown case {case_id!r}; expected one of {sorted(printed.EXOTIC_CASES)}")
    raw = printed.EXOTIC_CASES[case_id]()
    chain = chain_for(case_id)
    rules = chain.rules
    A = LeadingCoeffs4(raw["A"])
    V = normalize(raw["V"])
    W = normalize(raw["W"])
    g1, g2 = (_subs_W(raw[n], W, rules) for n in ("g1", "g2"))
    notes = ()
    if raw["g3"] is None:
        g3 = _reconstruct_g3(case_id, A, V, W, g2, rules)
        notes = ("g3 reconstructed from the determining equations (not printed)",)
    else:
        g3 = _subs_W(raw["g3"], W, rules)
    ell = _subs_W(raw["ell"], W, rules)
    out = CaseData(case_id, chain, A, V, W, (g1, g2, g3), ell, raw["params"], notes)
    _CASES[case_id] = out
    return out


def _reconstruct_g3(case_id, A, V, W, g2, rules):
    """``g3 = 4x^2 W' + 2a y^2/x^2 + 2 delta hbar^2 x^2 y^2 + h(x)`` with ``h`` fixed by the ``g3_x + g2_y`` equation."""
    x, y = ExactPoly.sym("x"), ExactPoly.sym("y")
    a, de, hb = (ExactPoly.sym(n) for n in ("a", "delta", "hbar"))
    base = normalize(4 * x * x * W.derivative("y", rules) + 2 * a * y * y * x ** -2
                     + 2 * de * hb * hb * x * x * y * y)
    system = derive_determining_4th(A)
    rc = _subs_V(system.rhs20[2], V, rules)
    hprime = normalize(rc - _d(g2, "y", rules) - base.derivative("x"))
    if S.index_of("y") in hprime.symbol_indices() or any(
            S.index_of(n) in hprime.symbol_indices() for n in printed.TRANSCENDENT_SYMBOLS):
        raise RuntimeError(f"{case_id}: g3 is not determined by a function of x alone")
    return base + _integrate_x(hprime)


def _integrate_x(p: ExactPoly) -> ExactPoly:
    xi = S.index_of("x")
    out = ExactPoly()
    for m, c in p.items():
        d = dict(m)
        e = d.get(xi, 0)
        if e == -1:
            raise RuntimeError("logarithmic term in the reconstruction of g3")
        d[xi] = e + 1
        out = out + ExactPoly({tuple(sorted((i, k) for i, k in d.items() if k)): c / (e + 1)})
    return out


def _subs_V(expr: ExactPoly, V: ExactPoly, rules) -> ExactPoly:
    found = jets_in(expr, "V")
    if not found:
        return expr
    ders = derivatives_of(V, ("x", "y"), set(found.values()), rules)
    return normalize(expr.subs({n: ders[o] for n, o in found.items()}))


def _subs_g(expr: ExactPoly, g, rules) -> ExactPoly:
    mapping = {}
    for name, val in zip(G_NAMES, g):
        found = jets_in(expr, name)
        if found:
            ders = derivatives_of(val, ("x", "y"), set(found.values()), rules)
            mapping.update({n: ders[o] for n, o in found.items()})
    return normalize(expr.subs(mapping)) if mapping else expr


def _split_separable(V: ExactPoly):
    xi, yi = S.index_of("x"), S.index_of("y")
    tr = {S.index_of(n) for n in printed.TRANSCENDENT_SYMBOLS}
    v1, v2 = ExactPoly(), ExactPoly()
    for m, c in V.items():
        idx = {i for i, _ in m}
        term = ExactPoly({m: c})
        if xi in idx:
            if yi in idx or idx & tr:
                raise ValueError("potential is not separable")
            v1 = v1 + term
        else:
            v2 = v2 + term
    return v1, v2


# -- residual expressions ----------------------------------------------------------

@dataclass(frozen=True)
class ResidualSystem:
    case_id: str
    expressions: dict
    printed_cross: ExactPoly


def residual_expressions(case_id: str, perturb: dict | None = None) -> ResidualSystem:
    """Exact residual polynomials of the ``g`` equations, the ``ell`` equations and the machine ell-compatibility.

    ``perturb`` adds expressions to ``g1, g2, g3, ell`` (keys of those names).
    """
    cd = case_data(case_id)
    rules = cd.chain.rules
    perturb = perturb or {}
    g = tuple(gi + ExactPoly.coerce(perturb.get(n, 0)) for gi, n in zip(cd.g, G_NAMES))
    ell = cd.ell + ExactPoly.coerce(perturb.get("ell", 0))
    system = derive_determining_4th(cd.A)
    ra, rb, rc, rd = (_subs_V(r, cd.V, rules) for r in system.rhs20)
    g1, g2, g3 = g
    dx = lambda p: p.derivative("x", rules)
    dy = lambda p: p.derivative("y", rules)
    ex = {
        "g1_x": dx(g1) - ra,
        "g2_x+g1_y": dx(g2) + dy(g1) - rb,
        "g3_x+g2_y": dx(g3) + dy(g2) - rc,
        "g3_y": dy(g3) - rd,
        "ell_x": dx(ell) - _subs_g(_subs_V(system.ell_x, cd.V, rules), g, rules),
        "ell_y": dy(ell) - _subs_g(_subs_V(system.ell_y, cd.V, rules), g, rules),
        "ell_xy-ell_yx": _subs_g(_subs_V(ell_compatibility(system), cd.V, rules), g, rules),
    }
    ex = {k: normalize(v) for k, v in ex.items()}
    pcross = _printed_cross(cd, g, rules)
    return ResidualSystem(case_id, ex, pcross)


def _printed_cross(cd: CaseData, g, rules) -> ExactPoly:
    declare_separable()
    expr = printed.ell_compatibility_separable(cd.A)
    v1, v2 = _split_separable(cd.V)
    mapping = {}
    for base, val, var in (("V1", v1, "x"), ("V2", v2, "y")):
        found = jets_in(expr, base)
        for n, (k,) in found.items():
            mapping[n] = _d(val, var, rules, k)
    expr = normalize(expr.subs(mapping)) if mapping else expr
    return _subs_g(expr, g, rules)


# -- numeric evaluation ------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    x: tuple
    y: tuple
    step: float

    def axes(self):
        nx = int(round((self.x[1] - self.x[0]) / self.step)) + 1
        ny = int(round((self.y[1] - self.y[0]) / self.step)) + 1
        return np.linspace(self.x[0], self.x[1], nx), np.linspace(self.y[0], self.y[1], ny)


def param_values(case_id: str, params: dict) -> dict:
    """Numeric values of the case's symbols from user parameters."""
    p = dict(params)
    hb = float(p.get("hbar", 1.0))
    out = {"hbar": hb, "a": float(p.get("a", 0.0))}
    if case_id == "Q2_1":
        c2 = float(p["c2"])
        if c2 <= 0:
            raise ValueError("Q2_1 needs c2 > 0")
        out.update(kappa=(8 * c2 / hb ** 2) ** 0.25, alpha=float(p["alpha"]), beta=float(p["beta"]),
                   epsilon=float(p.get("epsilon", 1.0)))
    else:
        al = float(p["alpha"])
        if al < 0:
            raise ValueError("alpha must be nonnegative (its square root enters the potential)")
        key, val = ("s2a", (2 * al) ** 0.5) if case_id == "Q1_1" else ("sa", al ** 0.5)
        out.update({key: val}, beta=float(p["beta"]), gamma=float(p["gamma"]), delta=float(p["delta"]))
    return out


def transcendent_values(case_id: str, values: dict, source, y: np.ndarray) -> dict:
    """``P, PY, Pinv, Pm1inv`` on the ``y`` axis from ``source(z, deriv)``."""
    chain = chain_for(case_id)
    Y = np.asarray(chain.arg.evaluate({**values, "y": y}), dtype=float) * np.ones_like(y)
    P = np.asarray(source(Y, 0), dtype=float)
    PY = np.asarray(source(Y, 1), dtype=float)
    with np.errstate(all="ignore"):
        return {"P": P, "PY": PY, "Pinv": 1.0 / P, "Pm1inv": 1.0 / (P - 1.0)}


def evaluate_grid(expr: ExactPoly, xs: np.ndarray, ys: np.ndarray, yvals: dict, consts: dict) -> np.ndarray:
    """Values on the ``(y, x)`` grid; terms are grouped by powers of ``x``."""
    xi = S.index_of("x")
    groups: dict = {}
    for m, c in expr.items():
        d = dict(m)
        e = d.pop(xi, 0)
        groups.setdefault(e, {})[tuple(sorted(d.items()))] = c
    env = {**consts, **yvals, "y": ys}
    out = np.zeros((len(ys), len(xs)))
    with np.errstate(all="ignore"):
        for e, terms in groups.items():
            coef = ExactPoly(terms).evaluate(env)
            coef = np.broadcast_to(np.real(np.asarray(coef, dtype=complex)), ys.shape)
            out += coef[:, None] * (xs ** e)[None, :]
    return out


@dataclass(frozen=True)
class FourthOrderReport:
    case_id: str
    params: dict
    grid: GridSpec
    max_residual: dict
    mean_residual: dict
    printed_cross_max: float
    excluded_cells: int
    total_cells: int
    tolerance: float
    exact_zero: dict
    notes: tuple = ()
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(v < self.tolerance for v in self.max_residual.values())

    def to_json(self) -> dict:
        return {
            "case": self.case_id,
            "params": self.params,
            "grid": {"x": list(self.grid.x), "y": list(self.grid.y), "step": self.grid.step},
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "exact_zero": self.exact_zero,
            "printed_cross_max_residual": self.printed_cross_max,
            "excluded_cells": self.excluded_cells,
            "total_cells": self.total_cells,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def seed_source(case_id: str, params: dict):
    """Closed-form transcendent from the catalogued rational seeds, or None."""
    from ..transcendents import rational_seed
    if case_id != "Q2_1":
        return None
    return rational_seed("P4", (params["alpha"], params["beta"]))


def verify_fourth_order_integral(case_id: str, params: dict, grid: GridSpec, source=None,
                                 perturb: dict | None = None, tol: float = 1e-6) -> FourthOrderReport:
    """Max-norm residuals of the determining equations over ``grid``.

    ``source(z, deriv)`` supplies the transcendent (a rational seed or a
    :class:`~superint.transcendents.Trajectory`); cells where it is
    undefined are excluded and counted.
    """
    t0 = time.perf_counter()
    consts = param_values(case_id, params)
    if source is None:
        source = seed_source(case_id, params)
        if source is None:
            raise ValueError("no transcendent source given and no rational seed for these parameters")
    system = residual_expressions(case_id, perturb)
    xs, ys = grid.axes()
    yvals = transcendent_values(case_id, consts, source, ys)
    bad_y = ~np.all(np.isfinite(np.vstack(list(yvals.values()))[:2]), axis=0)
    if case_id == "Q1_1":
        bad_y |= np.abs(yvals["P"] - 1.0) < 1e-8
    bad_y |= np.abs(yvals["P"]) < 1e-12
    bad_y |= ys == 0
    mask = np.broadcast_to(bad_y[:, None], (len(ys), len(xs))) | (xs == 0)[None, :]
    mx, mean, exact = {}, {}, {}
    for k, e in system.expressions.items():
        exact[k] = e.is_zero()
        vals = np.abs(evaluate_grid(e, xs, ys, yvals, consts))
        vals = vals[~mask]
        mx[k] = float(vals.max()) if vals.size else 0.0
        mean[k] = float(vals.mean()) if vals.size else 0.0
    pcross = np.abs(evaluate_grid(system.printed_cross, xs, ys, yvals, consts))[~mask]
    cd = case_data(case_id)
    return FourthOrderReport(case_id, dict(params), grid, mx, mean, float(pcross.max()) if pcross.size else 0.0,
                             int(mask.sum()), int(mask.size), tol, exact, cd.notes,
                             time.perf_counter() - t0)
