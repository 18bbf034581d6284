"""Reduction modulo a monic minimal polynomial in one symbol."""

from __future__ import annotations

from dataclasses import dataclass

from . import symbols as S
from .poly import ExactPoly


@dataclass(frozen=True)
class AlgebraicRelation:
    """``name**n + c[n-1]*name**(n-1) + ... + c[0] == 0``.

    ``coeffs`` holds ``c[0] .. c[n-1]`` as polynomials free of ``name``.
    Negative powers of ``name`` are rewritten too, which needs ``c[0]``
    to be a monomial.
    """

    name: str
    coeffs: tuple[ExactPoly, ...]

    @classmethod
    def from_minpoly(cls, name: str, minpoly: ExactPoly) -> "AlgebraicRelation":
        parts = minpoly.collect([name])
        n = max(k[0] for k in parts)
        lead = parts[(n,)]
        if not lead.is_constant():
            raise ValueError("minimal polynomial must have a constant leading coefficient")
        lc = lead.constant_term()
        coeffs = []
        for j in range(n):
            c = parts.get((j,), ExactPoly()) / lc
            if S.index_of(name) in c.symbol_indices():
                raise ValueError("coefficients must not contain the algebraic symbol")
            coeffs.append(c)
        return cls(name, tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def minpoly(self) -> ExactPoly:
        s = ExactPoly.sym(self.name)
        out = s ** self.degree
        for j, c in enumerate(self.coeffs):
            out = out + c * s ** j
        return out

    def reduce(self, p: ExactPoly) -> ExactPoly:
        idx = S.index_of(self.name)
        if idx not in p.symbol_indices():
            return p
        n = self.degree
        parts = {k[0]: v for k, v in p.collect([self.name]).items()}
        c0_inv = None
        while True:
            hi = max(parts)
            if hi >= n:
                C = parts.pop(hi)
                for j, cj in enumerate(self.coeffs):
                    if cj.is_zero():
                        continue
                    e = hi - n + j
                    parts[e] = parts.get(e, ExactPoly()) - C * cj
                continue
            lo = min(parts)
            if lo < 0:
                if c0_inv is None:
                    c0 = self.coeffs[0]
                    if not c0.is_monomial():
                        raise ZeroDivisionError(
                            f"{self.name} is not invertible: constant coefficient is not a monomial")
                    c0_inv = c0.inverse_monomial()
                C = parts.pop(lo)
                # name**-1 = -(name**(n-1) + c[n-1] name**(n-2) + ... + c[1]) / c[0]
                full = list(self.coeffs) + [ExactPoly.const(1)]
                for j in range(1, n + 1):
                    cj = full[j]
                    if cj.is_zero():
                        continue
                    e = lo + j
                    parts[e] = parts.get(e, ExactPoly()) - C * cj * c0_inv
                continue
            break
        s = ExactPoly.sym(self.name)
        out = ExactPoly()
        for e, C in parts.items():
            if not C.is_zero():
                out = out + C * s ** e
        return out


def reduce_all(p: ExactPoly, relations) -> ExactPoly:
    for r in relations or ():
        p = r.reduce(p)
    return p
