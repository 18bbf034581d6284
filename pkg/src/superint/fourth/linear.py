"""Linear compatibility condition, its Cartesian split and the exotic/standard dichotomy."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from ..exact import ExactPoly, GaussRat, RatFunc
from ..exact import symbols as S
from ..exact.linalg import solve
from ..exact.symbols import A_NAMES
from ..jets import formal, jet, substitute_jets
from .coeffs import LeadingCoeffs4, build_fi

# V1 ODEs trivial: every coefficient multiplying a V1 derivative vanishes
V1_TRIVIAL = ("A400", "A310", "A301", "A211", "A202", "A112", "A103", "A013")
# V2 ODEs trivial
V2_TRIVIAL = ("A400", "A310", "A301", "A211", "A220", "A121", "A130", "A031")


def _xy():
    return ExactPoly.sym("x"), ExactPoly.sym("y")


def _dpow(p, var: str, n: int):
    for _ in range(n):
        p = p.derivative(var)
    return p


# -- general order N --------------------------------------------------------

def leading_polys(N: int, A) -> list[ExactPoly]:
    """``f_{j0}``, ``j = 0..N``, for ``A[(N-m-n, m, n)]``; missing keys are zero."""
    x, y = _xy()
    out = []
    for j in range(N + 1):
        f = ExactPoly()
        for n in range(N - j + 1):
            for m in range(j + 1):
                key = (N - n - m, m, n)
                if key[0] < 0 or key not in A:
                    continue
                k = N - n - m
                if j - m > k:
                    continue
                f = f + ExactPoly.coerce(A[key]) * comb(k, j - m) * x ** (N - j - n) * (-y) ** (j - m)
        out.append(f)
    return out


def lcc_general(N: int, A, V=None, rules=None):
    """Order-``N`` linear compatibility condition in the ``f_{j0}`` form.

    ``f_{j0}`` multiplies ``p1^j p2^(N-j)`` in the leading part; for
    ``N = 4`` these are ``f5 .. f1`` and the result is minus the
    ``f1 .. f5`` form.
    """
    formal("V")
    f = leading_polys(N, A)
    Vx, Vy = jet("V", 1, 0), jet("V", 0, 1)
    R = ExactPoly()
    for j in range(N):
        t = f[j + 1] * Vx * (j + 1) + f[j] * Vy * (N - j)
        t = _dpow(_dpow(t, "x", N - 1 - j), "y", j)
        R = R + t * (-1) ** j
    if V is None:
        return R
    return substitute_jets(R, "V", V, rules)


def A4_as_general(A: LeadingCoeffs4) -> dict:
    return {(int(n[1]), int(n[2]), int(n[3])): A[n] for n in A_NAMES}


def A2_from_params(params) -> dict:
    """Leading constants of the second-order ansatz ``a L3^2 + b1{L3,p1} + ...``."""
    a, b1, b2, c1, c2 = params.as_tuple()
    return {(2, 0, 0): a, (1, 1, 0): b1 * 2, (1, 0, 1): b2 * 2, (0, 2, 0): c1, (0, 0, 2): -c1, (0, 1, 1): c2 * 2}


# -- fourth order ----------------------------------------------------------

def linear_compatibility_pde(A: LeadingCoeffs4, V=None, rules=None, relations=()):
    """Fourth-order linear PDE for the potential built from ``f1 .. f5``.

    Formal ``V`` gives an ExactPoly in the jets of V; an explicit ``V``
    gives the cleared numerator reduced modulo ``relations``.
    """
    from ..exact.algebraic import reduce_all
    formal("V")
    f1, f2, f3, f4, f5 = build_fi(A)
    Vx, Vy = jet("V", 1, 0), jet("V", 0, 1)
    R = (_dpow(f1 * Vx * 4 + f2 * Vy, "y", 3)
         - _dpow(_dpow(f2 * Vx * 3 + f3 * Vy * 2, "x", 1), "y", 2)
         + _dpow(_dpow(f3 * Vx * 2 + f4 * Vy * 3, "x", 2), "y", 1)
         - _dpow(f4 * Vx + f5 * Vy * 4, "x", 3))
    if V is None:
        return R
    return reduce_all(substitute_jets(R, "V", V, rules).num, relations)


def declare_separable():
    formal("V1", ("x",))
    formal("V2", ("y",))


def v1(k: int) -> ExactPoly:
    return jet("V1", k)


def v2(k: int) -> ExactPoly:
    return jet("V2", k)


def separable_substitute(expr: ExactPoly) -> ExactPoly:
    """Replace jets of ``V`` by those of ``V1(x) + V2(y)``."""
    declare_separable()
    mapping = {}
    for n in expr.symbols():
        si = S.info(S.index_of(n))
        if si.function != "V":
            continue
        i, j = si.orders
        if i and j:
            mapping[n] = ExactPoly()
        elif i:
            mapping[n] = v1(i)
        elif j:
            mapping[n] = v2(j)
        else:
            mapping[n] = v1(0) + v2(0)
    return expr.subs(mapping)


def separable_condition(A: LeadingCoeffs4) -> ExactPoly:
    """The linear condition relating ``V1`` and ``V2`` (machine-derived)."""
    return separable_substitute(linear_compatibility_pde(A))


@dataclass(frozen=True)
class SplitOdes:
    """Linear ODEs obtained by eliminating the other function.

    ``v1`` holds the ``y^0`` and ``y^1`` parts of ``d_x^2`` of the condition,
    ``v2`` the ``x^0`` and ``x^1`` parts of ``d_y^2``.
    """

    v1: tuple[ExactPoly, ExactPoly]
    v2: tuple[ExactPoly, ExactPoly]


def split_odes(A: LeadingCoeffs4) -> SplitOdes:
    C = separable_condition(A)
    ex = C.derivative("x").derivative("x")
    ey = C.derivative("y").derivative("y")
    for e, var, other in ((ex, "y", "V2"), (ey, "x", "V1")):
        if any(S.info(S.index_of(n)).function == other for n in e.symbols()):
            raise RuntimeError(f"elimination of {other} failed")
        if e.degree(var) > 1:
            raise RuntimeError(f"unexpected {var}-degree {e.degree(var)} after elimination")
    return SplitOdes((ex.coefficient("y", 0), ex.coefficient("y", 1)),
                     (ey.coefficient("x", 0), ey.coefficient("x", 1)))


def ell_compatibility_separable(system) -> ExactPoly:
    """``d_y ell_x - d_x ell_y`` for ``V = V1(x) + V2(y)``."""
    from .determining import ell_compatibility
    return separable_substitute(ell_compatibility(system))


# -- translations ----------------------------------------------------------

def translate_A(A: LeadingCoeffs4, t1, t2) -> LeadingCoeffs4:
    """Constants of the leading part after ``x -> x + t1``, ``y -> y + t2``.

    The shifted ``f_i`` are again of the printed form; the new constants
    are read off by exact linear solve.
    """
    t1 = ExactPoly.coerce(t1)
    t2 = ExactPoly.coerce(t2)
    x, y = _xy()
    target = [f.subs({"x": x + t1, "y": y + t2}) for f in build_fi(A)]
    unknown = LeadingCoeffs4.symbolic()
    gen = build_fi(unknown)
    rows, rhs = [], []
    for g, t in zip(gen, target):
        diff = (g - t).collect(("x", "y"))
        for _, c in diff.items():
            lin = c.collect(A_NAMES)
            row = [GaussRat(0)] * len(A_NAMES)
            const = ExactPoly()
            for key, coef in lin.items():
                if sum(key) == 0:
                    const = coef
                    continue
                row[key.index(1)] = _scalar(coef)
            rows.append(row)
            rhs.append(-_scalar(const) if not const.is_zero() else GaussRat(0))
    sol = solve(rows, rhs)
    if sol is None:
        raise RuntimeError("translated leading part left the ansatz")
    return LeadingCoeffs4(dict(zip(A_NAMES, (ExactPoly.const(v) for v in sol))), A.gauge_fixed)


def _scalar(p: ExactPoly) -> GaussRat:
    if not p.is_constant():
        raise ValueError("translation needs numeric coefficients and shifts")
    return p.constant_term()


# -- exotic classification -------------------------------------------------

@dataclass(frozen=True)
class ExoticCase:
    """Class of the leading part when one of ``V1``, ``V2`` is exotic.

    ``exotic`` names the function whose linear ODEs vanish identically;
    ``A`` is the (possibly mirrored) set of constants in the ``V2``-exotic
    frame; ``canonical`` says whether the constraints of the class hold
    without a translation, and ``shift = (t1, t2)`` is a translation
    ``x -> x + t1, y -> y + t2`` that achieves them.
    """

    label: str
    exotic: str
    A: LeadingCoeffs4
    canonical: bool
    shift: tuple[GaussRat, GaussRat] | None = None


@dataclass(frozen=True)
class NotExotic:
    reason: str  # "trivial" or "standard"
    detail: str = ""


def _nz(A, n):
    v = A[n]
    if not v.is_constant():
        raise ValueError("classification needs numeric coefficients")
    return not v.is_zero()


def classify_exotic(A: LeadingCoeffs4):
    v1_triv = A.is_zero(V1_TRIVIAL)
    v2_triv = A.is_zero(V2_TRIVIAL)
    if v1_triv and v2_triv:
        return NotExotic("trivial", "only the trivial fourth-order integrals H1^2, H2^2, H1 H2 remain")
    if not v1_triv and not v2_triv:
        return NotExotic("standard", "both V1 and V2 obey nontrivial linear ODEs")
    if v2_triv:
        frame, exotic = A, "V2"
    else:
        frame, exotic = A.mirrored(), "V1"
    a202, a112, a103, a013 = (_nz(frame, n) for n in ("A202", "A112", "A103", "A013"))
    if a202:
        label = "I"
        canonical = not a112 and not a103
    elif a112 or a103:
        label = "IIa" if a103 else "IIb"
        canonical = not a013
    else:
        label = "III"
        canonical = True
    shift = None if canonical else _normalizing_shift(frame, label)
    return ExoticCase(label, exotic, frame, canonical, shift)


def _normalizing_shift(A: LeadingCoeffs4, label: str) -> tuple[GaussRat, GaussRat]:
    """``(t1, t2)`` with ``x -> x + t1, y -> y + t2`` giving the canonical class form.

    In the ``V2``-exotic frame the shift acts as ``A103 -> A103 + 2 A202 t1``,
    ``A112 -> A112 - 2 A202 t2`` and ``A013 -> A013 + A112 t1 - A103 t2``.
    """
    a202, a112, a103, a013 = (A[n].constant_term() for n in ("A202", "A112", "A103", "A013"))
    zero = GaussRat(0)
    if label == "I":
        inv = (a202 * 2).inverse()
        return -(a103 * inv), a112 * inv
    if label == "IIa":
        return zero, a013 * a103.inverse()
    return -(a013 * a112.inverse()), zero


# -- standard V1 -----------------------------------------------------------

@dataclass(frozen=True)
class StandardV1:
    """Admissible ``V1`` families for a ``V2``-exotic leading part.

    ``path`` is ``"generic"`` when ``A112 A103 - 2 A202 A013 != 0`` (then
    ``V1''' = 0``) and ``"constraint"`` otherwise.  ``center`` is the
    location ``x0`` of the admissible ``a/(x - x0)^2`` singularity.
    """

    path: str
    constraint: ExactPoly
    families: tuple[tuple[str, RatFunc], ...]
    center: GaussRat | None = None
    odes: tuple[ExactPoly, ...] = field(default=())


def reduced_v1_odes(A: LeadingCoeffs4) -> tuple[ExactPoly, ExactPoly]:
    """``y^0`` and ``y^1`` parts of the separable condition with the ``V2`` side trivial.

    The condition is then at most linear in ``y`` and involves only the
    third and fourth derivatives of ``V1``.
    """
    vals = dict(A.values)
    for n in V2_TRIVIAL:
        vals[n] = ExactPoly()
    C = separable_condition(LeadingCoeffs4(vals))
    if any(S.info(S.index_of(n)).function == "V2" for n in C.symbols()) or C.degree("y") > 1:
        raise RuntimeError("V2 side did not vanish")
    return C.coefficient("y", 0), C.coefficient("y", 1)


def solve_standard_V1(case: ExoticCase, A: LeadingCoeffs4 | None = None) -> StandardV1:
    A = case.A if A is None else A
    if case.exotic == "V1" and A is not case.A:
        A = A.mirrored()
    constraint = A["A112"] * A["A103"] - A["A202"] * A["A013"] * 2
    odes = reduced_v1_odes(A)
    x = ExactPoly.sym("x")
    a, b, c = (ExactPoly.sym(n) for n in ("a", "b", "c"))
    base = (("zero", RatFunc(ExactPoly())), ("linear", RatFunc(a * x)), ("quadratic", RatFunc(a * x * x)))
    if not constraint.is_constant():
        raise ValueError("solve_standard_V1 needs numeric coefficients")
    if not constraint.is_zero():
        return StandardV1("generic", constraint, base, None, odes)
    x0 = _singular_center(A)
    if x0 is None:
        return StandardV1("constraint", constraint, base, None, odes)
    shifted = x - ExactPoly.const(x0)
    sing = RatFunc(a, {shifted: 2}) + RatFunc(b * x + c * x * x)
    return StandardV1("constraint", constraint, base + (("singular (bc=0)", sing),), x0, odes)


def _singular_center(A: LeadingCoeffs4):
    """Zero of the leading coefficient shared by the two ODEs, if any."""
    a112, a013 = A["A112"].constant_term(), A["A013"].constant_term()
    a202, a103 = A["A202"].constant_term(), A["A103"].constant_term()
    if not a202.is_zero():
        return -(a103 * (a202 * 2).inverse())
    if not a112.is_zero():
        return -(a013 * a112.inverse())
    return None
