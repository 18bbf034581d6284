"""One-dimensional eigenproblems ``-(hbar^2/2) psi'' + V psi = E psi`` and separable 2D spectra.

The operator is discretized with the symmetric three-point stencil on a
uniform mesh with Dirichlet ends.  Eigenvalues come from Sturm-sequence
bisection of the tridiagonal matrix, eigenvectors from inverse iteration.
A second solve on a mesh of twice (or half) the step supplies a
Richardson-extrapolated value, which is fourth-order accurate on smooth
potentials, and an error estimate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._accel import jit
from .potentials import GridFunc

POINTS_PER_LEVEL = 20


# -- kernels -------------------------------------------------------------------------

@jit
def sturm_count(d, e2, x):
    """Number of eigenvalues of the symmetric tridiagonal ``(d, e)`` below ``x``; ``e2 = e**2``."""
    n = d.shape[0]
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, n):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@jit
def bisect_eigenvalues(d, e2, lo, hi, k0, k1, tol):
    """Eigenvalues ``k0 .. k1-1`` (ascending) inside the Gershgorin interval ``[lo, hi]``."""
    out = np.empty(k1 - k0)
    for k in range(k0, k1):
        a, b = lo, hi
        while b - a > tol * max(1.0, abs(a) + abs(b)):
            m = 0.5 * (a + b)
            if m == a or m == b:
                break
            if sturm_count(d, e2, m) > k:
                b = m
            else:
                a = m
        out[k - k0] = 0.5 * (a + b)
    return out


@jit
def tridiag_solve(d, e, shift, rhs):
    """Solve ``(T - shift) x = rhs`` for symmetric tridiagonal ``T`` by Gaussian elimination."""
    n = d.shape[0]
    c = np.empty(n)
    y = np.empty(n)
    piv = d[0] - shift
    if abs(piv) < 1e-300:
        piv = 1e-300
    c[0] = e[0] / piv if n > 1 else 0.0
    y[0] = rhs[0] / piv
    for i in range(1, n):
        piv = d[i] - shift - e[i - 1] * c[i - 1]
        if abs(piv) < 1e-300:
            piv = 1e-300
        if i < n - 1:
            c[i] = e[i] / piv
        y[i] = (rhs[i] - e[i - 1] * y[i - 1]) / piv
    x = np.empty(n)
    x[n - 1] = y[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = y[i] - c[i] * x[i + 1]
    return x


def _sturm_count_numpy(d, e2, shifts):
    q = d[0] - shifts
    count = (q < 0).astype(int)
    for i in range(1, d.shape[0]):
        q = np.where(q == 0.0, 1e-300, q)
        q = d[i] - shifts - e2[i - 1] / q
        count += q < 0
    return count


def _bisect_numpy(d, e2, lo, hi, k0, k1, tol):
    ks = np.arange(k0, k1)
    a = np.full(ks.shape, lo, dtype=float)
    b = np.full(ks.shape, hi, dtype=float)
    while np.any(b - a > tol * np.maximum(1.0, np.abs(a) + np.abs(b))):
        m = 0.5 * (a + b)
        above = _sturm_count_numpy(d, e2, m) > ks
        b = np.where(above, m, b)
        a = np.where(above, a, m)
    return 0.5 * (a + b)


def _eigenvalues(d, e, count, tol=1e-15):
    from . import _accel
    e2 = e * e
    r = np.abs(np.concatenate(([0.0], e))) + np.abs(np.concatenate((e, [0.0])))
    lo, hi = float(np.min(d - r)), float(np.max(d + r))
    if _accel.ENABLED:
        return bisect_eigenvalues(d, e2, lo, hi, 0, count, tol)
    return _bisect_numpy(d, e2, lo, hi, 0, count, tol)


def _eigenvector(d, e, lam, h):
    n = d.shape[0]
    rng = np.random.default_rng(n)
    v = rng.standard_normal(n)
    scale = max(1.0, abs(lam))
    shift = lam - 1e-12 * scale
    for _ in range(3):
        v = tridiag_solve(d, e, shift, v)
        v /= np.linalg.norm(v)
    v /= math.sqrt(h)
    big = np.abs(v) > 1e-3 * np.abs(v).max()
    if v[np.argmax(big)] < 0:
        v = -v
    return v


# -- public API -------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumRecord:
    """Ascending eigenvalues with per-level error estimates.

    ``vectors[k]`` (numeric records only) is normalized with
    ``sum(psi**2) * h = 1`` on the interior points ``x``.
    """

    eigenvalues: np.ndarray
    errors: np.ndarray
    source: str
    params: dict = field(default_factory=dict)
    x: np.ndarray | None = None
    vectors: np.ndarray | None = None
    labels: tuple = ()
    raw: np.ndarray | None = None

    def to_csv(self) -> str:
        from .io import fmt
        lines = ["n,E,error"]
        for n, (E, err) in enumerate(zip(self.eigenvalues, self.errors)):
            lines.append(f"{n},{fmt(E)},{fmt(err)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        out = {"source": self.source, "params": self.params,
               "eigenvalues": [float(v) for v in self.eigenvalues],
               "errors": [float(v) for v in self.errors]}
        if self.labels:
            out["labels"] = [list(t) for t in self.labels]
        return out


def _as_grid(V, domain=None, h=None, bc="dirichlet") -> GridFunc:
    if isinstance(V, GridFunc):
        return V
    if domain is None or h is None:
        raise ValueError("a callable potential needs domain=(lo, hi) and h")
    return GridFunc.from_function(V, domain[0], domain[1], h, bc)


def fd_eigenvalues(V: GridFunc, count: int, hbar: float = 1.0) -> np.ndarray:
    """Lowest ``count`` eigenvalues of the three-point discretization (no extrapolation)."""
    d, e = _matrix(V, hbar)
    return _eigenvalues(d, e, min(count, d.shape[0]))


def _matrix(V: GridFunc, hbar: float):
    vals = V.values[1:-1]
    if V.mask[1:-1].any() or not np.all(np.isfinite(vals)):
        raise ValueError("potential has masked or non-finite interior cells")
    k = hbar * hbar / (2.0 * V.h * V.h)
    d = vals + 2.0 * k
    e = np.full(len(vals) - 1, -k)
    return d, e


def eigen_1d(V, count: int, hbar: float = 1.0, *, domain=None, h=None, bc="dirichlet",
             vectors: bool = True) -> SpectrumRecord:
    """Lowest ``count`` eigenpairs of ``-(hbar^2/2) psi'' + V psi``.

    ``V`` is a :class:`GridFunc` or a callable with ``domain`` and ``h``.
    With a callable the comparison mesh has step ``h/2``; with a grid it
    uses every second point (step ``2h``).  Eigenvalues are the Richardson
    values ``(4 E_fine - E_coarse) / 3``; ``errors`` is ``|E_fine - E_coarse| / 3``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    grid = _as_grid(V, domain, h, bc)
    n_int = len(grid.values) - 2
    resolvable = max(1, n_int // POINTS_PER_LEVEL)
    if count > resolvable:
        warnings.warn(f"only {resolvable} levels are resolvable on this mesh; returning those", stacklevel=2)
        count = resolvable
    if callable(V) and not isinstance(V, GridFunc):
        fine = _as_grid(V, domain, h / 2, bc)
        E_c, E_f = fd_eigenvalues(grid, count, hbar), fd_eigenvalues(fine, count, hbar)
        vec_grid, E_vec = grid, E_c
    else:
        if n_int < 4 * POINTS_PER_LEVEL or (len(grid.values) - 1) % 2:
            coarse = None
        else:
            coarse = GridFunc(grid.x0, 2 * grid.h, grid.values[::2], grid.bc, grid.mask[::2])
        E_f = fd_eigenvalues(grid, count, hbar)
        E_c = fd_eigenvalues(coarse, count, hbar) if coarse is not None else E_f
        vec_grid, E_vec = grid, E_f
    E = (4.0 * E_f - E_c) / 3.0
    err = np.abs(E_f - E_c) / 3.0
    vecs = None
    if vectors:
        d, e = _matrix(vec_grid, hbar)
        vecs = np.array([_eigenvector(d, e, lam, vec_grid.h) for lam in E_vec])
    return SpectrumRecord(E, err, "numeric", {"hbar": hbar, "h": grid.h, "bc": grid.bc},
                          vec_grid.x[1:-1], vecs, (), E_f)


def convergence_ratios(V, count: int, domain, h: float, hbar: float = 1.0) -> np.ndarray:
    """``(E_h - E_{h/2}) / (E_{h/2} - E_{h/4})`` per level; about 4 for the second-order scheme."""
    Es = [fd_eigenvalues(GridFunc.from_function(V, domain[0], domain[1], h / 2 ** k), count, hbar)
          for k in range(3)]
    return (Es[0] - Es[1]) / (Es[1] - Es[2])


def node_count(psi: np.ndarray, rel: float = 1e-6) -> int:
    """Sign changes of ``psi`` ignoring values below ``rel * max|psi|``."""
    keep = psi[np.abs(psi) > rel * np.abs(psi).max()]
    return int(np.sum(np.signbit(keep[1:]) != np.signbit(keep[:-1])))


def overlap_matrix(rec: SpectrumRecord) -> np.ndarray:
    h = rec.params["h"]
    return rec.vectors @ rec.vectors.T * h


def wkb_extent(V, E: float, start: float, direction: float, hbar: float = 1.0, decay: float = 1e-12,
               step: float = 1e-2, limit: float = 1e3) -> float:
    """Distance beyond the turning point where the WKB amplitude falls below ``decay``."""
    target = -math.log(decay)
    x = start
    while V(x) < E:
        x += direction * step
        if abs(x - start) > limit:
            raise ValueError("no classical turning point within the search limit")
    acc = 0.0
    while acc < target:
        acc += math.sqrt(2.0 * max(V(x) - E, 0.0)) / hbar * step
        x += direction * step
        if abs(x - start) > limit:
            raise ValueError("potential does not confine within the search limit")
    return x


def confining_domain(V, E_max: float, hbar: float = 1.0, decay: float = 1e-12, center: float = 0.0):
    """Dirichlet interval on which states up to ``E_max`` decay below ``decay`` at the ends."""
    return (wkb_extent(V, E_max, center, -1.0, hbar, decay), wkb_extent(V, E_max, center, 1.0, hbar, decay))


def spectrum_2d_separable(V1, V2, count: int, hbar: float = 1.0, *, domain1=None, domain2=None,
                          h=None) -> SpectrumRecord:
    """Lowest ``count`` sums ``E1_n + E2_m``; ``labels`` holds ``(n, m)`` for each level."""
    r1 = eigen_1d(V1, count, hbar, domain=domain1, h=h, vectors=False)
    r2 = eigen_1d(V2, count, hbar, domain=domain2, h=h, vectors=False)
    pairs = sorted((r1.eigenvalues[n] + r2.eigenvalues[m], n, m)
                   for n in range(len(r1.eigenvalues)) for m in range(len(r2.eigenvalues)))
    pairs = pairs[:count]
    E = np.array([p[0] for p in pairs])
    err = np.array([r1.errors[n] + r2.errors[m] for _, n, m in pairs])
    return SpectrumRecord(E, err, "numeric", {"hbar": hbar}, labels=tuple((n, m) for _, n, m in pairs))


def distinct_levels(E, tol: float = 1e-6) -> np.ndarray:
    """Sorted eigenvalues with clusters closer than ``tol`` merged (cluster means)."""
    E = np.sort(np.asarray(E, dtype=float))
    out, group = [], [E[0]]
    for v in E[1:]:
        if v - group[-1] <= tol:
            group.append(v)
        else:
            out.append(np.mean(group))
            group = [v]
    out.append(np.mean(group))
    return np.array(out)
