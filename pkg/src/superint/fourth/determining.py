"""Determining equations of a fourth-order integral, derived from ``[H, Y]``.

The third-order part of ``[H, Y]`` gives four linear equations for the
derivatives of ``g1, g2, g3``; the first-order part gives ``ell_x`` and
``ell_y``.  Derivatives of the ``g``'s that the four equations determine
are eliminated, leaving ``g1``, ``g1_y``, ``g2`` and ``g3_x^k`` as the only
independent ``g`` jets.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exact import DiffOp, ExactPoly, GaussRat, commutator, hamiltonian, symmetrize
from ..exact import symbols as S
from ..jets import formal, jet
from .coeffs import LeadingCoeffs4, build_fi, leading_operator

G_NAMES = ("g1", "g2", "g3")


def _declare():
    for n in ("V", "g1", "g2", "g3", "ell"):
        formal(n)


def build_Y4(A: LeadingCoeffs4, g1=None, g2=None, g3=None, ell=None, hbar=None) -> DiffOp:
    """Fourth-order operator with formal (default) or explicit lower-order terms."""
    _declare()
    g1 = jet("g1", 0, 0) if g1 is None else g1
    g2 = jet("g2", 0, 0) if g2 is None else g2
    g3 = jet("g3", 0, 0) if g3 is None else g3
    ell = jet("ell", 0, 0) if ell is None else ell
    half = ExactPoly.const(GaussRat(1) / 2)
    lower = (symmetrize(g1, (2, 0), hbar) + symmetrize(g2, (1, 1), hbar)
             + symmetrize(g3, (0, 2), hbar)) * half
    return leading_operator(A, hbar) + lower + DiffOp.mult(ell)


@dataclass(frozen=True)
class DeterminingSystem4:
    """Right-hand sides of the determining equations (formal ``V``).

    ``rhs20`` are the right-hand sides for ``g1_x``, ``g2_x + g1_y``,
    ``g3_x + g2_y`` and ``g3_y``; ``ell_x`` / ``ell_y`` are reduced modulo
    those equations.
    """

    A: LeadingCoeffs4
    rhs20: tuple[ExactPoly, ExactPoly, ExactPoly, ExactPoly]
    ell_x: ExactPoly
    ell_y: ExactPoly
    order2_remainder: tuple[ExactPoly, ...]

    def reduce(self, expr: ExactPoly) -> ExactPoly:
        return reduce_g_jets(expr, self.rhs20)


def reduce_g_jets(expr: ExactPoly, rhs20) -> ExactPoly:
    """Rewrite determined ``g`` derivatives using the four first-order equations."""
    ra, rb, rc, rd = rhs20
    cache: dict = {}

    def dd(p: ExactPoly, i: int, j: int) -> ExactPoly:
        key = (id(p), i, j)
        v = cache.get(key)
        if v is None:
            v = p
            for _ in range(i):
                v = v.derivative("x")
            for _ in range(j):
                v = v.derivative("y")
            cache[key] = v
        return v

    for _ in range(64):
        mapping = {}
        for n in expr.symbols():
            si = S.info(S.index_of(n))
            if si.function not in G_NAMES:
                continue
            i, j = si.orders
            if si.function == "g1" and i >= 1:
                mapping[n] = dd(ra, i - 1, j)
            elif si.function == "g3" and j >= 1:
                mapping[n] = dd(rd, i, j - 1)
            elif si.function == "g1" and j >= 2:
                # cross-derivative of g2: g1_yy - g3_xx = d_y rb - d_x rc
                mapping[n] = jet("g3", 2, j - 2) + dd(rb, 0, j - 1) - dd(rc, 1, j - 2)
            elif si.function == "g2" and i >= 1:
                mapping[n] = dd(rb, i - 1, j) - jet("g1", i - 1, j + 1)
            elif si.function == "g2" and j >= 1:
                mapping[n] = dd(rc, 0, j - 1) - jet("g3", 1, j - 1)
        if not mapping:
            return expr
        expr = expr.subs(mapping)
    raise RuntimeError("g-jet reduction did not terminate")


_CACHE: dict = {}


def derive_determining_4th(A: LeadingCoeffs4 | None = None) -> DeterminingSystem4:
    """Machine derivation of the fourth-order determining system (memoized)."""
    A = LeadingCoeffs4.symbolic() if A is None else A
    key = (tuple(sorted((k, v.to_text()) for k, v in A.values.items())), A.gauge_fixed)
    out = _CACHE.get(key)
    if out is None:
        out = _derive(A)
        _CACHE[key] = out
    return out


def _derive(A: LeadingCoeffs4) -> DeterminingSystem4:
    _declare()
    H = hamiltonian(jet("V", 0, 0))
    C = commutator(H, build_Y4(A))
    hb = ExactPoly.sym("hbar")
    hb2, hb4 = hb ** 2, hb ** 4
    lhs = (("g1_x",), ("g2_x", "g1_y"), ("g3_x", "g2_y"), ("g3_y",))
    rhs = []
    for k, names in zip(((3, 0), (2, 1), (1, 2), (0, 3)), lhs):
        c = C.coefficient(k) / hb4
        gpart = ExactPoly()
        for n in names:
            gpart = gpart + ExactPoly.sym(n)
        rest = c - gpart
        if any(S.info(S.index_of(n)).function in G_NAMES for n in rest.symbols()):
            raise RuntimeError(f"unexpected g terms at order 3, signature {k}")
        rhs.append(-rest)
    rhs20 = tuple(rhs)
    order2 = tuple(reduce_g_jets(C.coefficient(k), rhs20) for k in ((2, 0), (1, 1), (0, 2)))
    ells = []
    for k, name in (((1, 0), "ell_x"), ((0, 1), "ell_y")):
        c = C.coefficient(k)
        lin = c.coefficient(name, 1)
        # the coefficient of ell_x in the d_x term is -hbar^2 (times i-free units)
        if lin != -hb2:
            raise RuntimeError(f"unexpected coefficient of {name}: {lin}")
        rest = reduce_g_jets(c - lin * ExactPoly.sym(name), rhs20)
        ells.append(rest / hb2)
    return DeterminingSystem4(A, rhs20, ells[0], ells[1], order2)


def ell_compatibility(system: DeterminingSystem4) -> ExactPoly:
    """``d_y(ell_x) - d_x(ell_y)`` reduced modulo the first-order equations."""
    return system.reduce(system.ell_x.derivative("y") - system.ell_y.derivative("x"))


def rhs20_from_fi(A: LeadingCoeffs4):
    """The four right-hand sides written with ``f1 .. f5``."""
    f1, f2, f3, f4, f5 = build_fi(A)
    Vx, Vy = jet("V", 1, 0), jet("V", 0, 1)
    return (
        f1 * Vx * 4 + f2 * Vy,
        f2 * Vx * 3 + f3 * Vy * 2,
        f3 * Vx * 2 + f4 * Vy * 3,
        f4 * Vx + f5 * Vy * 4,
    )
