"""Leading-order constants ``A_jkl`` and the polynomials ``f1 .. f5``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..exact import DiffOp, ExactPoly, angular_momentum, momentum
from ..exact.symbols import A_NAMES

GAUGE_ZERO = ("A004", "A040", "A022")


@dataclass(frozen=True)
class LeadingCoeffs4:
    """The 15 constants ``A_jkl`` with ``j + k + l = 4``."""

    values: Mapping[str, ExactPoly] = field(default_factory=dict)
    gauge_fixed: bool = False

    def __init__(self, values: Mapping[str, object] | None = None, gauge_fixed: bool = False, **kw):
        vals = dict(values or {})
        vals.update(kw)
        unknown = set(vals) - set(A_NAMES)
        if unknown:
            raise ValueError(f"unknown coefficient names: {sorted(unknown)}")
        full = {n: ExactPoly.coerce(vals.get(n, 0)) for n in A_NAMES}
        if gauge_fixed and any(not full[n].is_zero() for n in GAUGE_ZERO):
            raise ValueError("gauge-fixed coefficients must have A004 = A040 = A022 = 0")
        object.__setattr__(self, "values", full)
        object.__setattr__(self, "gauge_fixed", gauge_fixed)

    @classmethod
    def symbolic(cls, gauge_fixed: bool = False) -> "LeadingCoeffs4":
        vals = {n: ExactPoly.sym(n) for n in A_NAMES}
        if gauge_fixed:
            for n in GAUGE_ZERO:
                vals[n] = ExactPoly()
        return cls(vals, gauge_fixed)

    def with_gauge(self) -> "LeadingCoeffs4":
        """Drop ``A004, A040, A022`` (removable with ``H1^2, H2^2, H1 H2``)."""
        vals = dict(self.values)
        for n in GAUGE_ZERO:
            vals[n] = ExactPoly()
        return LeadingCoeffs4(vals, True)

    def __getitem__(self, name: str) -> ExactPoly:
        return self.values[name]

    def is_zero(self, names) -> bool:
        return all(self.values[n].is_zero() for n in names)

    def mirrored(self) -> "LeadingCoeffs4":
        """Coefficients after ``x <-> y``: ``L3 -> -L3``, ``p1 <-> p2``."""
        out = {}
        for n in A_NAMES:
            j, k, l = int(n[1]), int(n[2]), int(n[3])
            out[f"A{j}{l}{k}"] = self.values[n] * (-1) ** j
        return LeadingCoeffs4(out)


def build_fi(A: LeadingCoeffs4) -> tuple[ExactPoly, ...]:
    """``f1 .. f5``: coefficients of ``p1^4, p1^3 p2, ..., p2^4`` in the leading symbol."""
    x, y = ExactPoly.sym("x"), ExactPoly.sym("y")
    a = A.values
    f1 = a["A400"] * y**4 - a["A310"] * y**3 + a["A220"] * y**2 - a["A130"] * y + a["A040"]
    f2 = (-4 * a["A400"] * x * y**3 - a["A301"] * y**3 + 3 * a["A310"] * x * y**2 + a["A211"] * y**2
          - 2 * a["A220"] * x * y - a["A121"] * y + a["A130"] * x + a["A031"])
    f3 = (6 * a["A400"] * x**2 * y**2 + 3 * a["A301"] * x * y**2 - 3 * a["A310"] * x**2 * y
          + a["A202"] * y**2 - 2 * a["A211"] * x * y + a["A220"] * x**2 - a["A112"] * y
          + a["A121"] * x + a["A022"])
    f4 = (-4 * a["A400"] * y * x**3 + a["A310"] * x**3 - 3 * a["A301"] * x**2 * y + a["A211"] * x**2
          - 2 * a["A202"] * x * y + a["A112"] * x - a["A103"] * y + a["A013"])
    f5 = a["A400"] * x**4 + a["A301"] * x**3 + a["A202"] * x**2 + a["A103"] * x + a["A004"]
    return (f1, f2, f3, f4, f5)


def leading_operator(A: LeadingCoeffs4, hbar=None) -> DiffOp:
    """``sum A_jkl/2 {L3^j, p1^k p2^l}``."""
    L3 = angular_momentum(hbar)
    p1 = momentum("x", hbar)
    p2 = momentum("y", hbar)
    Lp = [DiffOp.identity()]
    for _ in range(4):
        Lp.append(Lp[-1].compose(L3))
    P1 = [DiffOp.identity()]
    P2 = [DiffOp.identity()]
    for _ in range(4):
        P1.append(P1[-1].compose(p1))
        P2.append(P2[-1].compose(p2))
    out = DiffOp.zero()
    for n in A_NAMES:
        c = A.values[n]
        if c.is_zero():
            continue
        j, k, l = int(n[1]), int(n[2]), int(n[3])
        P = P1[k].compose(P2[l])
        out = out + (Lp[j].compose(P) + P.compose(Lp[j])) * (c / 2)
    return out


def fi_from_operator(A: LeadingCoeffs4) -> tuple[ExactPoly, ...]:
    """``f1 .. f5`` read off the principal symbol of the leading operator."""
    op = leading_operator(A)
    hb4 = ExactPoly.sym("hbar") ** 4
    out = []
    for k in range(5):
        c = op.coefficient((4 - k, k))
        out.append(c / hb4)
    return tuple(out)
