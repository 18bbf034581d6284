"""Cubic algebra of the P4 oscillator model: structure relations, Casimir and energy series.

Noncommutative elements are dictionaries ``word -> coefficient`` over the
letters ``A < B < C``; coefficients are :class:`ExactPoly` in the central
``H`` and the parameters.  Products are reduced to the ordered basis
``A^i B^j C^k`` with the defining commutators, so an element vanishes iff
its normal form is empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import ExactPoly
from .exact import symbols as S
from .schrodinger import SpectrumRecord

S.register("H")
F = Fraction
Word = tuple


def _sym(*names):
    return tuple(ExactPoly.sym(n) for n in names)


def _param_poly(v, name):
    return ExactPoly.sym(name) if v is None else ExactPoly.coerce(F(v).limit_denominator(10 ** 12)
                                                                  if isinstance(v, float) else v)


# -- structure relations ---------------------------------------------------------------

def bc_polynomial(alpha=None, beta=None, epsilon=None, omega=None, hbar=None) -> dict:
    """``[B, C]`` as ``{i: coefficient of A^i}`` with coefficients in ``H`` and parameters."""
    al, be, ep = (_param_poly(v, n) for v, n in ((alpha, "alpha"), (beta, "beta"), (epsilon, "epsilon")))
    om, hb = _param_poly(omega, "omega"), _param_poly(hbar, "hbar")
    (H,) = _sym("H")
    h2 = hb * hb
    return {
        3: -2 * h2,
        2: -6 * h2 * H,
        1: om ** 2 * hb ** 4 * F(1, 3) * (4 * al * al - 20 - 6 * be - 8 * ep * al),
        0: (8 * h2 * H ** 3 - 8 * om ** 2 * hb ** 4 * H
            + hb ** 5 * om ** 3 * F(1, 27) * (-8 * al ** 3 - 24 * al - 36 * al * be + 24 * ep * al * al
                                               + 8 * ep + 36 * ep * be)),
    }


@dataclass(frozen=True)
class CubicAlgebra:
    """``[A,B] = C``, ``[A,C] = ac_coefficient * B``, ``[B,C] = sum_i bc[i] A^i + bc_extra``.

    ``bc_extra`` is an element (word dictionary) added to ``[B,C]``; it is
    empty for the printed relations and exists to probe the Jacobi check.
    """

    bc: dict
    ac_coefficient: ExactPoly
    bc_extra: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    @classmethod
    def printed(cls, alpha=None, beta=None, epsilon=None, omega=None, hbar=None) -> "CubicAlgebra":
        om, hb = _param_poly(omega, "omega"), _param_poly(hbar, "hbar")
        params = dict(alpha=alpha, beta=beta, epsilon=epsilon, omega=omega, hbar=hbar)
        if epsilon is not None and epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        return cls(bc_polynomial(alpha, beta, epsilon, omega, hbar), 16 * om * om * hb * hb, {}, params)

    def with_ac(self, coefficient) -> "CubicAlgebra":
        return CubicAlgebra(self.bc, ExactPoly.coerce(coefficient), self.bc_extra, self.params)

    def with_bc_extra(self, element: dict) -> "CubicAlgebra":
        return CubicAlgebra(self.bc, self.ac_coefficient, dict(element), self.params)

    def commutator_table(self) -> dict:
        """``[x, y]`` for ``x > y`` as elements."""
        bc = {("A",) * i: ExactPoly.coerce(c) for i, c in self.bc.items()}
        bc = add(bc, self.bc_extra)
        return {
            ("B", "A"): {("C",): ExactPoly.const(-1)},
            ("C", "A"): {("B",): -self.ac_coefficient},
            ("C", "B"): scale(bc, -1),
        }

    def gen(self, letter: str) -> dict:
        return {(letter,): ExactPoly.const(1)}

    def normal_form(self, element: dict, max_steps: int = 100000) -> dict:
        table = self.commutator_table()
        out: dict = {}
        todo = [(w, c) for w, c in element.items()]
        steps = 0
        while todo:
            steps += 1
            if steps > max_steps:
                raise RuntimeError("normal ordering did not terminate")
            w, c = todo.pop()
            if c.is_zero():
                continue
            for i in range(len(w) - 1):
                if w[i] > w[i + 1]:
                    pre, post = w[:i], w[i + 2:]
                    todo.append((pre + (w[i + 1], w[i]) + post, c))
                    for u, d in table[(w[i], w[i + 1])].items():
                        todo.append((pre + u + post, c * d))
                    break
            else:
                out[w] = out[w] + c if w in out else c
        return {w: c for w, c in out.items() if not c.is_zero()}

    def mul(self, x: dict, y: dict) -> dict:
        prod: dict = {}
        for u, a in x.items():
            for v, b in y.items():
                w = u + v
                prod[w] = prod[w] + a * b if w in prod else a * b
        return self.normal_form(prod)

    def bracket(self, x: dict, y: dict) -> dict:
        return add(self.mul(x, y), scale(self.mul(y, x), -1))


def add(x: dict, y: dict) -> dict:
    out = dict(x)
    for w, c in y.items():
        out[w] = out[w] + c if w in out else c
    return {w: c for w, c in out.items() if not c.is_zero()}


def scale(x: dict, s) -> dict:
    return {w: c * s for w, c in x.items()}


@dataclass(frozen=True)
class JacobiReport:
    passed: bool
    jacobiator: dict
    checks: dict

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": self.checks,
                "jacobiator": {"".join(w) or "1": c.to_text() for w, c in sorted(self.jacobiator.items())}}


def jacobi_check(alg: CubicAlgebra) -> JacobiReport:
    """Exact verdict on ``[A,[B,C]] + [B,[C,A]] + [C,[A,B]] = 0`` in the ordered basis."""
    A, B, C = (alg.gen(g) for g in "ABC")
    t1 = alg.bracket(A, alg.bracket(B, C))
    t2 = alg.bracket(B, alg.bracket(C, A))
    t3 = alg.bracket(C, alg.bracket(A, B))
    J = add(add(t1, t2), t3)
    checks = {"[A,[B,C]]": not t1, "[B,[C,A]]": not t2, "[C,[A,B]]": not t3}
    return JacobiReport(not J, J, checks)


# -- Casimir ---------------------------------------------------------------------------------

def casimir_polynomial(alpha=None, beta=None, epsilon=None, omega=None, hbar=None) -> ExactPoly:
    """``K`` as a polynomial in the central ``H`` (other arguments symbolic when None)."""
    al, be, ep = (_param_poly(v, n) for v, n in ((alpha, "alpha"), (beta, "beta"), (epsilon, "epsilon")))
    om, hb = _param_poly(omega, "omega"), _param_poly(hbar, "hbar")
    (H,) = _sym("H")
    return (-16 * hb ** 2 * H ** 4
            + 4 * hb ** 4 * om ** 2 * F(1, 3) * (4 * al * al - 8 * al + 4 - al * be) * H ** 2
            - 4 * hb ** 5 * om ** 3 * F(1, 27)
            * (8 * al ** 3 - 24 * ep * al * al + 24 * al + 36 * al * be - 8 * ep - 36 * ep * be) * H
            - 4 * hb ** 6 * om ** 4 * F(1, 3) * (4 * al - 8 * ep * al - 8 - 6 * be))


def casimir_value(H, alpha=None, beta=None, epsilon=1, omega=1, hbar=1):
    """``K(H)``; exact when all inputs are exact, a float when any is a float."""
    inputs = (H, alpha, beta, epsilon, omega, hbar)
    if any(isinstance(v, float) for v in inputs):
        K = casimir_polynomial(*(None if isinstance(v, float) else v for v in (alpha, beta, epsilon, omega, hbar)))
        env = {n: float(v) for n, v in zip(("H", "alpha", "beta", "epsilon", "omega", "hbar"), inputs)
               if v is not None}
        return float(np.real(K.evaluate(env)))
    K = casimir_polynomial(alpha, beta, epsilon, omega, hbar)
    if H is None or isinstance(H, str):
        return K
    return K.subs({"H": H})


# -- energy series ------------------------------------------------------------------------------

def _exact_sqrt(q: Fraction):
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return math.sqrt(q)


@dataclass(frozen=True)
class EnergySeries:
    """``E = hbar omega (p + offset)``; ``offset`` is exact when the inputs allow it."""

    name: str
    offset: object
    spacing: object

    def value(self, p: int):
        return self.spacing * (p + self.offset)


def series_definitions(alpha, beta, epsilon, omega=1, hbar=1) -> tuple[list, list]:
    """The three series (E2, E3 only for ``beta < 0``) and notices for omitted ones."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    al, be = F(alpha).limit_denominator(10 ** 12), F(beta).limit_denominator(10 ** 12)
    spacing = hbar * omega
    out = [EnergySeries("E1", F(epsilon + 3, 3) - al / 3, spacing)]
    notes = []
    if be < 0:
        r = _exact_sqrt(-be / 8)
        base = F(-epsilon + 6, 6) + al / 6
        out += [EnergySeries("E2", base + r, spacing), EnergySeries("E3", base - r, spacing)]
    else:
        notes.append("beta >= 0: series E2 and E3 omitted")
    return out, notes


def energy_series(alpha, beta, epsilon, omega=1.0, hbar=1.0, p_max: int = 4) -> dict:
    """``{name: SpectrumRecord}`` for ``p = 0 .. p_max``; ``"notes"`` lists omitted series."""
    series, notes = series_definitions(alpha, beta, epsilon, omega, hbar)
    params = dict(alpha=alpha, beta=beta, epsilon=epsilon, omega=omega, hbar=hbar)
    out = {}
    for s in series:
        E = np.array([float(s.value(p)) for p in range(p_max + 1)])
        out[s.name] = SpectrumRecord(E, np.zeros_like(E), "algebraic-series", {**params, "series": s.name})
    out["notes"] = notes
    return out


def union_levels(series: dict) -> np.ndarray:
    return np.sort(np.concatenate([r.eigenvalues for k, r in series.items() if k != "notes"]))


# -- numeric oracle for the rational-seed case ----------------------------------------------------

def vp4_numeric_spectrum(alpha, beta, epsilon, omega=1.0, hbar=1.0, *, n_levels: int = 15, h: float = 1e-3,
                         source=None, e_max: float | None = None) -> dict:
    """Distinct eigenvalues of the separable ``H`` with the P4 potential in ``x``.

    ``H = p^2/2 + omega^2 (x^2 + y^2)/2 + V_E(x)``; the ``x`` factor uses
    ``source`` or the rational seed.  Returns the lowest ``n_levels``
    distinct levels and the two factor records.
    """
    from .potentials import vp4_potential
    from .schrodinger import confining_domain, distinct_levels, eigen_1d
    from .transcendents import rational_seed
    if source is None:
        source = rational_seed("P4", (alpha, beta))
        if source is None:
            raise ValueError("no transcendent source given and no rational seed for these parameters")
    params = dict(alpha=alpha, beta=beta, epsilon=epsilon, omega=omega, hbar=hbar)
    e_max = e_max if e_max is not None else hbar * omega * (n_levels + 2)

    def vx(x):
        x = np.asarray(x, dtype=float)
        z = np.sqrt(omega / hbar) * x
        w, wp = np.asarray(source(z, 0), dtype=float), np.asarray(source(z, 1), dtype=float)
        return omega ** 2 * x * x / 2 + vp4_potential(w, wp, z, alpha, epsilon, hbar, omega)

    def vy(y):
        return omega ** 2 * np.asarray(y) ** 2 / 2

    scalar = lambda f: (lambda t: float(f(np.array([t]))[0]))
    dx = confining_domain(scalar(vx), e_max, hbar)
    dy = confining_domain(scalar(vy), e_max, hbar)
    n_fact = n_levels + 2
    rx = eigen_1d(vx, n_fact, hbar, domain=dx, h=h, vectors=False)
    ry = eigen_1d(vy, n_fact, hbar, domain=dy, h=h, vectors=False)
    top = min(rx.eigenvalues[-1] + ry.eigenvalues[0], ry.eigenvalues[-1] + rx.eigenvalues[0])
    sums = np.array([a + b for a in rx.eigenvalues for b in ry.eigenvalues])
    sums = np.sort(sums[sums <= top + 1e-9])
    levels = distinct_levels(sums, 1e-6)[:n_levels]
    return {"levels": levels, "x": rx, "y": ry, "domains": (dx, dy)}


def compare_series(series: dict, levels: np.ndarray) -> list[dict]:
    """Rows ``(p, series, E_alg, E_num, |delta|)`` matching each algebraic value to the nearest level."""
    rows = []
    for name, rec in series.items():
        if name == "notes":
            continue
        for p, E in enumerate(rec.eigenvalues):
            j = int(np.argmin(np.abs(levels - E)))
            rows.append({"p": p, "series": name, "E_alg": float(E), "E_num": float(levels[j]),
                         "delta": float(abs(levels[j] - E))})
    return rows
