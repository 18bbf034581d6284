"""Painleve test: leading balances, resonances and resonance conditions.

The ODE is an ``OdePoly`` ``E(y, W, W', ..., W^(n)) = 0`` whose coefficients
are (after clearing negative powers) polynomials in ``y``.  The Laurent
ansatz ``W = sum_k d_k (y - y0)^(k + p)`` is expanded with ``y0`` and the
resonance coefficients kept symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import ExactPoly, GaussRat
from .exact import symbols as S
from .exact.algebraic import AlgebraicRelation
from .exact.poly import divide_exact
from .fourth.exotic import OdePoly

Y0 = "y0"
D0 = "d0"
K = "k"

NON_INTEGER = "non-integer leading power"
NO_BALANCE = "no dominant balance"


def _d(k: int) -> str:
    return f"d{k}"


for _n in (Y0, K, "tau"):
    S.register(_n)


# -- preparation --------------------------------------------------------------

@dataclass(frozen=True)
class _Term:
    coef: ExactPoly  # polynomial in the independent variable and parameters
    exps: tuple[int, ...]  # exponents of W, W', ..., W^(n)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def weight(self) -> int:
        return sum(i * e for i, e in enumerate(self.exps))

    def power(self, p: Fraction) -> Fraction:
        return self.degree * p - self.weight


def _clear(ode: OdePoly) -> list[_Term]:
    """Terms with coefficients made polynomial in the independent variable."""
    terms = ode.terms()
    low = min((c.min_degree(ode.var) for c, _ in terms), default=0)
    shift = ExactPoly.sym(ode.var) ** (-low) if low < 0 else ExactPoly.const(1)
    return [_Term(c * shift, e) for c, e in terms if not c.is_zero()]


def _at_y0(c: ExactPoly, var: str) -> ExactPoly:
    return c.subs({var: ExactPoly.sym(Y0)})


def _falling(a, i: int):
    """``a (a - 1) ... (a - i + 1)`` for ExactPoly or Fraction ``a``."""
    out = ExactPoly.const(1) if isinstance(a, ExactPoly) else Fraction(1)
    for j in range(i):
        out = out * (a - j)
    return out


def _frac_poly(f: Fraction) -> ExactPoly:
    return ExactPoly.const(GaussRat(f.numerator, 0) / f.denominator)


# -- leading balances ---------------------------------------------------------

@dataclass(frozen=True)
class Balance:
    """A dominant balance.

    ``d0`` holds the explicit leading coefficients; when they are the
    roots of an irreducible quadratic ``relation`` is set and ``d0`` is
    the single symbolic root ``d0``.  ``defining`` is the polynomial whose
    nonzero roots are the admissible ``d0`` (after dividing out ``d0^m``).
    """

    p: Fraction
    terms: tuple[int, ...]
    defining: ExactPoly
    d0: tuple[ExactPoly, ...] = ()
    relation: AlgebraicRelation | None = None
    note: str = ""


def _candidate_powers(terms: list[_Term]) -> set[Fraction]:
    cands = set()
    for i, a in enumerate(terms):
        for b in terms[i + 1:]:
            if a.degree != b.degree:
                cands.add(Fraction(b.weight - a.weight, b.degree - a.degree))
    return cands


def _dominant(terms: list[_Term], p: Fraction) -> tuple[int, ...]:
    pw = [t.power(p) for t in terms]
    m = min(pw)
    return tuple(i for i, v in enumerate(pw) if v == m)


def leading_balances(ode: OdePoly) -> tuple[list[Balance], list[str]]:
    """Negative-``p`` balances with nonzero ``d0``, and failure causes.

    Balances with non-integer ``p`` are reported only as causes.
    """
    S.register(D0)
    terms = _clear(ode)
    d0 = ExactPoly.sym(D0)
    out, causes = [], []
    for p in sorted(_candidate_powers(terms)):
        if p >= 0:
            continue
        dom = _dominant(terms, p)
        if len({terms[i].degree for i in dom}) < 2:
            continue
        eq = ExactPoly()
        for i in dom:
            t = terms[i]
            c = _at_y0(t.coef, ode.var)
            for order, e in enumerate(t.exps):
                c = c * _frac_poly(_falling(p, order)) ** e
            eq = eq + c * d0 ** t.degree
        low = eq.min_degree(D0)
        defining = eq * d0 ** (-low)
        if defining.degree(D0) == 0:
            continue
        if p.denominator != 1:
            causes.append(f"{NON_INTEGER} p={p}")
            continue
        out.append(_solve_d0(p, dom, defining))
    if not out and not causes:
        causes.append(NO_BALANCE)
    return out, causes


def _solve_d0(p: Fraction, dom, defining: ExactPoly) -> Balance:
    parts = {k[0]: v for k, v in defining.collect([D0]).items()}
    deg = max(parts)
    lead = parts[deg]
    if deg == 1:
        root = divide_exact(-parts.get(0, ExactPoly()), lead)
        if root is None:
            return Balance(p, dom, defining, note="d0 not polynomial in the parameters")
        return Balance(p, dom, defining, (root,))
    if deg == 2:
        b = divide_exact(parts.get(1, ExactPoly()), lead)
        c = divide_exact(parts.get(0, ExactPoly()), lead)
        if b is None or c is None:
            return Balance(p, dom, defining, note="d0 quadratic not monic-reducible")
        roots = _rational_quadratic_roots(b, c)
        if roots is not None:
            return Balance(p, dom, defining, tuple(roots))
        rel = AlgebraicRelation.from_minpoly(D0, ExactPoly.sym(D0) ** 2 + b * ExactPoly.sym(D0) + c)
        return Balance(p, dom, defining, (ExactPoly.sym(D0),), rel)
    return Balance(p, dom, defining, note=f"d0 of degree {deg}: branch not analyzed")


def _rational_quadratic_roots(b: ExactPoly, c: ExactPoly):
    """Roots of ``t^2 + b t + c`` when both are numeric rationals with rational roots."""
    if not (b.is_constant() and c.is_constant()):
        return None
    bb, cc = b.constant_term(), c.constant_term()
    if not (bb.is_real() and cc.is_real()):
        return None
    B, C = bb.re, cc.re
    disc = B * B - 4 * C
    r = _rational_sqrt(disc)
    if r is None:
        return None
    return [_frac_poly((-B + r) / 2), _frac_poly((-B - r) / 2)]


def _rational_sqrt(q: Fraction):
    from math import isqrt
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    a, b = isqrt(n), isqrt(d)
    if a * a == n and b * b == d:
        return Fraction(a, b)
    return None


# -- resonances ---------------------------------------------------------------

@dataclass(frozen=True)
class ResonanceResult:
    polynomial: ExactPoly  # P(k) normalized to leading coefficient 1
    roots: tuple[int, ...]  # all roots with multiplicity, sorted
    cause: str = ""


def resonance_polynomial(ode: OdePoly, balance: Balance, d0: ExactPoly) -> ExactPoly:
    """``P(k)``: coefficient of ``eps`` at dominant order for ``W = d0 t^p + eps t^(p+k)``."""
    terms = _clear(ode)
    k = ExactPoly.sym(K)
    p = balance.p
    pk = k + _frac_poly(p)
    P = ExactPoly()
    for i in balance.terms:
        t = terms[i]
        c = _at_y0(t.coef, ode.var)
        base = [d0 * _frac_poly(_falling(p, o)) for o in range(len(t.exps))]
        for o, e in enumerate(t.exps):
            if e == 0:
                continue
            rest = ExactPoly.const(e)
            for o2, e2 in enumerate(t.exps):
                rest = rest * base[o2] ** (e2 - (1 if o2 == o else 0))
            P = P + c * rest * _falling(pk, o)
    if balance.relation is not None:
        P = balance.relation.reduce(P)
    return P


def resonances(ode: OdePoly, balance: Balance, d0: ExactPoly | None = None) -> ResonanceResult:
    d0 = balance.d0[0] if d0 is None else d0
    P = resonance_polynomial(ode, balance, d0)
    parts = {kk[0]: v for kk, v in P.collect([K]).items()}
    deg = max(parts)
    lead = parts[deg]
    norm = {}
    for e, v in parts.items():
        q = divide_exact(v, lead)
        if q is None or not q.is_constant() or not q.constant_term().is_real():
            return ResonanceResult(P, (), "resonance polynomial has parameter-dependent roots")
        norm[e] = q.constant_term().re
    roots = _integer_roots(norm, deg)
    monic = ExactPoly()
    kk = ExactPoly.sym(K)
    for e, v in norm.items():
        monic = monic + _frac_poly(v) * kk ** e
    if roots is None:
        return ResonanceResult(monic, (), "non-integer resonance")
    return ResonanceResult(monic, tuple(sorted(roots)))


def _integer_roots(coeffs: dict[int, Fraction], deg: int):
    """All roots (with multiplicity) if they are integers, else None."""
    from math import lcm
    den = 1
    for v in coeffs.values():
        den = lcm(den, v.denominator)
    ints = [int(coeffs.get(e, 0) * den) for e in range(deg + 1)]
    roots = []
    while len(ints) > 1:
        # strip zero roots
        if ints[0] == 0:
            roots.append(0)
            ints = ints[1:]
            continue
        c0 = abs(ints[0])
        found = None
        for r in _divisors(c0):
            for s in (r, -r):
                if _horner(ints, s) == 0:
                    found = s
                    break
            if found is not None:
                break
        if found is None:
            return None
        roots.append(found)
        ints = _deflate(ints, found)
    return roots


def _divisors(n: int):
    return [d for d in range(1, n + 1) if n % d == 0]


def _horner(ints, x):
    acc = 0
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _deflate(ints, r):
    """Divide ``sum ints[e] k^e`` by ``(k - r)``."""
    n = len(ints) - 1
    out = [0] * n
    acc = 0
    for e in range(n, 0, -1):
        acc = acc * r + ints[e]
        out[e - 1] = acc
    return out


# -- Laurent expansion --------------------------------------------------------

class _Series:
    """Truncated Laurent series ``{power: coefficient}`` in ``tau``."""

    __slots__ = ("c", "hi")

    def __init__(self, c: dict[int, ExactPoly], hi: int):
        self.c = {e: v for e, v in c.items() if e <= hi and not v.is_zero()}
        self.hi = hi

    def mul(self, other: "_Series") -> "_Series":
        out: dict[int, ExactPoly] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                if e > self.hi:
                    continue
                w = v1 * v2
                out[e] = out[e] + w if e in out else w
        return _Series(out, self.hi)

    def deriv(self) -> "_Series":
        return _Series({e - 1: v * e for e, v in self.c.items() if e != 0}, self.hi)

    def scale(self, poly_series: "_Series") -> "_Series":
        return self.mul(poly_series)

    def low(self) -> int:
        return min(self.c) if self.c else self.hi + 1


@dataclass
class BranchReport:
    p: Fraction
    d0: str
    resonances: tuple[int, ...] = ()
    free: tuple[str, ...] = ()
    conditions: dict = field(default_factory=dict)  # resonance -> "satisfied" or residual text
    coefficients: dict = field(default_factory=dict)  # k -> text of d_k
    passes: bool = False
    cause: str = ""

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "d0": self.d0,
            "resonances": list(self.resonances),
            "free": list(self.free),
            "conditions": {str(k): v for k, v in self.conditions.items()},
            "passes": self.passes,
            "cause": self.cause,
        }


@dataclass
class TestReport:
    order: int
    branches: list[BranchReport]
    causes: list[str]

    @property
    def passes(self) -> bool:
        return any(b.passes for b in self.branches)

    @property
    def overall(self) -> str:
        if self.passes:
            return "passes"
        reasons = list(self.causes) + [b.cause for b in self.branches if b.cause]
        return "fails(" + "; ".join(reasons or ["no passing branch"]) + ")"

    def to_json(self) -> dict:
        return {"order": self.order, "passes": self.passes, "overall": self.overall,
                "branches": [b.to_json() for b in self.branches], "causes": list(self.causes)}


def laurent_coefficients(ode: OdePoly, balance: Balance, d0: ExactPoly, kmax: int,
                         resonant: tuple[int, ...] = ()):
    """Solve the recursion ``P(k) d_k = phi_k`` up to ``kmax``.

    Returns ``(coefficients, conditions)``; resonant ``d_k`` stay symbolic
    and ``conditions[k]`` is the reduced ``phi_k`` (zero iff satisfied).
    """
    terms = _clear(ode)
    p = int(balance.p)
    rel = balance.relation
    for k in range(1, kmax + 1):
        S.register(_d(k))
    tau = ExactPoly.sym("tau")
    y0 = ExactPoly.sym(Y0)
    m0 = min(terms[i].power(balance.p) for i in balance.terms)
    hi = int(m0) + kmax
    Wc = {p: d0}
    for k in range(1, kmax + 1):
        Wc[p + k] = ExactPoly.sym(_d(k))
    # a partial product above ``margin`` cannot come back below ``hi``
    n = max(len(t.exps) for t in terms) - 1
    margin = hi + max(t.degree for t in terms) * (n - p)
    W = _Series(Wc, margin)
    ders = [W]
    for _ in range(max(len(t.exps) for t in terms)):
        ders.append(ders[-1].deriv())
    total: dict[int, ExactPoly] = {}
    for t in terms:
        c = t.coef.subs({ode.var: y0 + tau})
        cser = _Series({kk[0]: v for kk, v in c.collect(["tau"]).items()}, margin)
        acc = cser
        for o, e in enumerate(t.exps):
            for _ in range(e):
                acc = acc.mul(ders[o])
        for e, v in acc.c.items():
            if e <= hi:
                total[e] = total[e] + v if e in total else v
    lowest = min((e for e, v in total.items() if not v.is_zero()), default=int(m0))
    if lowest < m0:
        raise RuntimeError("dominant balance is inconsistent with the expansion")
    solved: dict[str, ExactPoly] = {}
    coeffs = {0: d0}
    conditions = {}
    for k in range(1, kmax + 1):
        Ek = total.get(int(m0) + k, ExactPoly()).subs(solved) if solved else total.get(int(m0) + k, ExactPoly())
        if rel is not None:
            Ek = rel.reduce(Ek)
        name = _d(k)
        lin = Ek.coefficient(name, 1)
        if Ek.degree(name) > 1:
            raise RuntimeError(f"recursion is nonlinear in {name}")
        rest = Ek - lin * ExactPoly.sym(name)
        if k in resonant:
            if not lin.is_zero():
                raise RuntimeError(f"P({k}) should vanish at a resonance")
            conditions[k] = rest
            coeffs[k] = ExactPoly.sym(name)
            continue
        if lin.is_zero():
            raise RuntimeError(f"P({k}) = 0 off resonance")
        q = _divide(-rest, lin, rel)
        if q is None:
            raise RuntimeError(f"d{k} is not polynomial in y0 and the free parameters")
        solved[name] = q
        coeffs[k] = q
    return coeffs, conditions


def _divide(a: ExactPoly, b: ExactPoly, rel):
    if rel is not None and S.index_of(rel.name) in b.symbol_indices():
        # multiply by the conjugate-free inverse of a monomial in d0
        if b.is_monomial():
            return rel.reduce(a * b.inverse_monomial())
        return None
    return divide_exact(a, b)


def painleve_test(ode: OdePoly) -> TestReport:
    n = ode.order
    balances, causes = leading_balances(ode)
    reports = []
    for bal in balances:
        if not bal.d0:
            reports.append(BranchReport(bal.p, "?", cause=bal.note))
            continue
        for d0 in bal.d0:
            label = d0.to_text()
            if bal.relation is not None:
                label = f"root of {bal.relation.minpoly().to_text()}"
            rep = BranchReport(bal.p, label)
            res = resonances(ode, bal, d0)
            if res.cause:
                rep.cause = res.cause
                reports.append(rep)
                continue
            roots = list(res.roots)
            if -1 in roots:
                roots.remove(-1)
            else:
                rep.cause = "no resonance at -1"
            rep.resonances = tuple(roots)
            bad = [r for r in roots if r < 0]
            if bad:
                rep.cause = rep.cause or f"negative resonance {bad}"
            elif len(set(roots)) != len(roots):
                rep.cause = rep.cause or "repeated resonance"
            elif len(roots) != n - 1:
                rep.cause = rep.cause or f"{len(roots)} nonnegative resonances for order {n}"
            if rep.cause:
                reports.append(rep)
                continue
            positive = tuple(r for r in roots if r > 0)
            kmax = max(positive, default=0)
            coeffs, conds = laurent_coefficients(ode, bal, d0, kmax, positive)
            rep.coefficients = {k: v.to_text() for k, v in coeffs.items()}
            rep.free = tuple([Y0] + [_d(r) for r in positive] + ([D0] if 0 in roots else []))
            ok = True
            for r, v in conds.items():
                rep.conditions[r] = "satisfied" if v.is_zero() else v.to_text()
                ok = ok and v.is_zero()
            if 0 in roots:
                rep.conditions[0] = "d0 free"
            rep.passes = ok and not rep.cause
            if not ok:
                rep.cause = "resonance condition violated"
            reports.append(rep)
    return TestReport(n, reports, causes)


def painleve_ode(kind: str, params=None, base: str = "W", var: str = "y") -> OdePoly:
    """P1, P2 and P4 (multiplied through by ``2W``) as polynomial ODEs.

    ``params`` defaults to symbols ``alpha`` (P2) or ``alpha, beta`` (P4).
    """
    from .jets import formal
    w = formal(base, (var,))
    d1, d2 = w.derivative(var), w.derivative(var).derivative(var)
    t = ExactPoly.sym(var)
    if kind == "P1":
        return OdePoly(d2 - 6 * w * w - t, base, var)
    if kind == "P2":
        (al,) = _params(params, ("alpha",))
        return OdePoly(d2 - 2 * w ** 3 - t * w - al, base, var)
    if kind == "P4":
        al, be = _params(params, ("alpha", "beta"))
        return OdePoly(2 * w * d2 - d1 * d1 - 3 * w ** 4 - 8 * t * w ** 3
                       - 4 * (t * t - al) * w * w - 2 * be, base, var)
    raise ValueError(f"no polynomial form for {kind!r}; expected P1, P2 or P4")


def _params(values, names):
    if values is None:
        return tuple(ExactPoly.sym(n) for n in names)
    values = tuple(values)
    if len(values) != len(names):
        raise ValueError(f"expected parameters {names}")
    return tuple(ExactPoly.coerce(v) for v in values)
