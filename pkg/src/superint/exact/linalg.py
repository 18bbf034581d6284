"""Exact linear algebra over the Gaussian rationals (small dense systems)."""

from __future__ import annotations

from .gaussrat import GaussRat


def rref(rows: list[list[GaussRat]], ncols: int):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: list[list[GaussRat]], ncols: int) -> list[list[GaussRat]]:
    """Basis of ``{v : rows . v = 0}``."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [GaussRat(0)] * ncols
        v[f] = GaussRat(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(rows: list[list[GaussRat]], rhs: list[GaussRat]):
    """One solution of ``rows . v = rhs`` or None when inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    v = [GaussRat(0)] * n
    for row, pc in zip(red, pivots):
        v[pc] = row[n]
    return v
