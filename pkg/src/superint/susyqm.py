"""First- and second-order supercharges, third-order ladders and zero modes for the P4 model.

Everything is expressed in ``z = sqrt(omega/hbar) x`` with energies in
units of ``hbar omega``; ``h1 = -d^2/2 + U`` with
``U = (z + w)^2/2 + epsilon w'/2 + (epsilon - alpha)/3`` is the 1D part
of ``H`` (oscillator plus ``V_E``) divided by ``hbar omega``.

The factorization is a period-three dressing chain
``A_i = (d + g_i)/sqrt(2)``, ``h_i = A_i^+ A_i + e_i``,
``h_{i+1} = A_i A_i^+ + e_i``, ``h_4 = h_1 - epsilon`` with

    g1 = -epsilon (z + w)
    g2 = (epsilon w - (w' - kappa)/w) / 2
    g3 = (epsilon w + (w' - kappa)/w) / 2,      kappa^2 = -2 beta,

which closes exactly because ``w`` solves P4.  ``A_3 A_2`` is the
regular second-order operator ``(d^2 + epsilon w d + m0)/2`` with
``m0 = epsilon w'/2 - w^2/2 - 2 z w - z^2 + alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .schrodinger import SpectrumRecord, node_count

MARGIN = 4  # stencil half-width of one operator application


# -- finite differences ----------------------------------------------------------------------

def d1(f: np.ndarray, h: float) -> np.ndarray:
    out = np.full_like(f, np.nan)
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    return out


def d2(f: np.ndarray, h: float) -> np.ndarray:
    out = np.full_like(f, np.nan)
    out[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)
    return out


@dataclass(frozen=True)
class GridOp:
    """``sum_k coef[k](z) d^k`` on a uniform grid (``coef[k]`` arrays or scalars)."""

    coef: tuple
    h: float

    def __call__(self, f: np.ndarray) -> np.ndarray:
        out = np.zeros_like(f)
        if len(self.coef) > 0:
            out = out + self.coef[0] * f
        if len(self.coef) > 1:
            out = out + self.coef[1] * d1(f, self.h)
        if len(self.coef) > 2:
            out = out + self.coef[2] * d2(f, self.h)
        return out

    @property
    def order(self) -> int:
        return len(self.coef) - 1


def first_order(sign: float, g, h: float) -> GridOp:
    """``(sign d + g)/sqrt(2)``."""
    r = 1 / math.sqrt(2)
    return GridOp((np.asarray(g) * r, sign * r), h)


def hamiltonian(U: np.ndarray, h: float) -> GridOp:
    return GridOp((U, 0.0, -0.5), h)


def compose(*ops):
    def apply(f):
        for op in reversed(ops):
            f = op(f)
        return f
    return apply


# -- data ---------------------------------------------------------------------------------------

def _p4_second(z, w, wp, alpha, beta):
    return wp * wp / (2 * w) + 1.5 * w ** 3 + 4 * z * w * w + 2 * (z * z - alpha) * w + beta / w


@dataclass(frozen=True)
class SuperData:
    """Chain data on the grid ``z``; ``branch`` selects ``kappa = branch * sqrt(-2 beta)``."""

    z: np.ndarray
    w: np.ndarray
    wp: np.ndarray
    alpha: float
    beta: float
    epsilon: int
    hbar: float = 1.0
    omega: float = 1.0
    branch: int = -1
    g2_shift: float = 0.0
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if self.beta > 0:
            raise ValueError("the chain needs beta <= 0 (kappa^2 = -2 beta)")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        if not (np.all(np.isfinite(self.w)) and np.all(np.isfinite(self.wp))):
            raise ValueError("transcendent has a pole or gap inside the window")

    @classmethod
    def from_source(cls, source, alpha, beta, epsilon, zgrid, **kw) -> "SuperData":
        z = np.asarray(zgrid, dtype=float)
        return cls(z, np.asarray(source(z, 0), dtype=float), np.asarray(source(z, 1), dtype=float),
                   float(alpha), float(beta), int(epsilon), **kw)

    @property
    def h(self) -> float:
        return float(self.z[1] - self.z[0])

    @property
    def kappa(self) -> float:
        return self.branch * math.sqrt(-2 * self.beta)

    @property
    def delta(self) -> int:
        """``h_4 = h_1 + delta``; ``delta = -epsilon``."""
        return -self.epsilon

    @property
    def two_lambda(self) -> float:
        """Ladder step in units of ``hbar omega``."""
        return 1.0

    @property
    def wpp(self) -> np.ndarray:
        return _p4_second(self.z, self.w, self.wp, self.alpha, self.beta)

    def _ratio(self, num: np.ndarray) -> np.ndarray:
        """``num / w`` with removable points (``w = 0`` where also ``w' = kappa``) interpolated."""
        w = self.w
        with np.errstate(all="ignore"):
            r = num / w
        bad = ~np.isfinite(r) | (np.abs(w) < 1e-9)
        removable = bad & (np.abs(self.wp - self.kappa) < 1e-6)
        good = ~bad
        if removable.any() and good.sum() >= 2:
            r[removable] = np.interp(self.z[removable], self.z[good], r[good])
        r[bad & ~removable] = np.nan
        return r

    def g(self) -> tuple:
        ep, z, w = self.epsilon, self.z, self.w
        r = self._ratio(self.wp - self.kappa)
        return -ep * (z + w), (ep * w - r) / 2 + self.g2_shift, (ep * w + r) / 2

    def g_prime(self) -> tuple:
        ep, w, wp, k = self.epsilon, self.w, self.wp, self.kappa
        with np.errstate(all="ignore"):
            wpp_w = self.wpp * w
        rp = self._ratio(self._ratio(wpp_w - wp * (wp - k)))
        return -ep * (1 + wp), (ep * wp - rp) / 2, (ep * wp + rp) / 2

    def subsample(self, stride: int) -> "SuperData":
        sl = slice(None, None, stride)
        return SuperData(self.z[sl], self.w[sl], self.wp[sl], self.alpha, self.beta, self.epsilon,
                         self.hbar, self.omega, self.branch, self.g2_shift, self.notes)

    def energies(self) -> tuple:
        """Chain constants ``(e1, e2, e3)``."""
        ep, al, k = self.epsilon, self.alpha, self.kappa
        e1 = -ep / 6 - al / 3
        e2 = e1 + (al - ep * k / 2 - ep) / 2
        e3 = e2 + ep * k / 2
        return e1, e2, e3

    def m0(self) -> np.ndarray:
        ep, z, w = self.epsilon, self.z, self.w
        return ep * self.wp / 2 - w * w / 2 - 2 * z * w - z * z + self.alpha

    def potential(self) -> np.ndarray:
        """``U`` of ``h1``."""
        z, w = self.z, self.w
        return (z + w) ** 2 / 2 + self.epsilon * self.wp / 2 + (self.epsilon - self.alpha) / 3


# -- supercharges ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Supercharges:
    """Operators in the notation ``H1 q^+ = q^+ (H2 + 2 lambda)``, ``H1 M^+ = M^+ H2``.

    ``ordering`` says which ladder pairs with the model Hamiltonian:
    ``"q+M"`` means ``a^+ = q^+ M`` acts on ``H1`` (model is ``H1``),
    ``"Mq+"`` means ``a^+ = M q^+`` acts on ``H2`` (model is ``H2``).
    """

    q: GridOp
    qd: GridOp
    M: GridOp
    Md: GridOp
    H1: GridOp
    H2: GridOp
    two_lambda: float
    ordering: str
    model: GridOp

    def a_dagger(self, ordering: str | None = None):
        ordering = ordering or self.ordering
        return compose(self.qd, self.M) if ordering == "q+M" else compose(self.M, self.qd)

    def a(self, ordering: str | None = None):
        ordering = ordering or self.ordering
        return compose(self.Md, self.q) if ordering == "q+M" else compose(self.q, self.Md)


def build_supercharges(data: SuperData) -> Supercharges:
    h = data.h
    g1, g2, g3 = data.g()
    e1, _, _ = data.energies()
    ep, w = data.epsilon, data.w
    A1 = first_order(1.0, g1, h)
    A1d = first_order(-1.0, g1, h)
    s = data.g2_shift
    c1 = ep * w + s
    c0 = data.m0() + (s * g3 if s else 0.0)
    A32 = GridOp((c0 / 2, c1 / 2, 0.5), h)
    c1p = np.asarray(c1)
    A23d = GridOp(((c0 - ep * data.wp) / 2, -c1p / 2, 0.5), h)
    h1 = hamiltonian(data.potential(), h)
    partner = (g1 * g1 + data.g_prime()[0]) / 2 + e1
    if ep == -1:
        H1, H2 = h1, hamiltonian(partner - 1.0, h)
        return Supercharges(A1, A1d, A23d, A32, H1, H2, 1.0, "q+M", H1)
    H1, H2 = hamiltonian(partner + 1.0, h), h1
    return Supercharges(A1d, A1, A32, A23d, H1, H2, 1.0, "Mq+", H2)


def _interior(f: np.ndarray, margin: int) -> np.ndarray:
    return f[margin:-margin]


@dataclass(frozen=True)
class IntertwiningReport:
    residual_q: float
    residual_M: float
    ladder_residual: dict
    ordering: str
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.residual_q, self.residual_M) < self.tolerance

    def to_json(self) -> dict:
        return {"residual_q": self.residual_q, "residual_M": self.residual_M,
                "ladder_residual": self.ladder_residual, "ordering": self.ordering,
                "tolerance": self.tolerance, "passed": self.passed}


LADDER_H = 1e-2  # finite-difference step for checks that chain five or more derivatives


def ladder_stride(h: float) -> int:
    return max(1, int(round(LADDER_H / h)))


def verify_intertwining(data: SuperData, testfns, tol: float = 1e-5) -> IntertwiningReport:
    """Max-norm residuals of ``H1 q^+ - q^+ (H2 + 2 lambda)`` and ``H1 M^+ - M^+ H2``.

    Also reports ``H a^+ - a^+ (H + 2 lambda)`` for both orderings on the
    model Hamiltonian, which records which ordering is the ladder.
    """
    sc = build_supercharges(data)
    lam = sc.two_lambda
    stride = ladder_stride(data.h)
    coarse = build_supercharges(data.subsample(stride))
    m = 3 * MARGIN
    rq = rM = 0.0
    lad = {"q+M": 0.0, "Mq+": 0.0}
    for f in testfns:
        f = np.asarray(f, dtype=float)
        lhs = sc.H1(sc.qd(f))
        rhs = sc.qd(sc.H2(f) + lam * f)
        rq = max(rq, float(np.max(np.abs(_interior(lhs - rhs, m)))))
        lhs = sc.H1(sc.Md(f))
        rhs = sc.Md(sc.H2(f))
        rM = max(rM, float(np.max(np.abs(_interior(lhs - rhs, m)))))
        fc = f[::stride]
        for o in lad:
            ad = coarse.a_dagger(o)
            r = coarse.model(ad(fc)) - ad(coarse.model(fc) + lam * fc)
            lad[o] = max(lad[o], float(np.max(np.abs(_interior(r, 5 * MARGIN)))))
    return IntertwiningReport(rq, rM, lad, sc.ordering, tol)


def commutator_profile(data: SuperData, f: np.ndarray, rel: float = 1e-3) -> np.ndarray:
    """``([q, q^+] f) / f`` where ``|f| > rel max|f|``; constant for a linear ``g1``."""
    sc = build_supercharges(data)
    c = sc.q(sc.qd(f)) - sc.qd(sc.q(f))
    keep = np.abs(f) > rel * np.abs(f).max()
    keep[: 2 * MARGIN] = keep[-2 * MARGIN:] = False
    return c[keep] / f[keep]


# -- zero modes ----------------------------------------------------------------------------------------

def cumulative_integral(g: np.ndarray, gp: np.ndarray, h: float, ref: int) -> np.ndarray:
    """``int_{z_ref}^{z} g`` by the end-corrected trapezoid rule (fourth order)."""
    steps = h / 2 * (g[1:] + g[:-1]) + h * h / 12 * (gp[:-1] - gp[1:])
    acc = np.concatenate(([0.0], np.cumsum(steps)))
    return acc - acc[ref]


@dataclass(frozen=True)
class ZeroMode:
    label: str
    psi: np.ndarray
    energy: float
    chain_energy: float
    normalizable: bool
    epsilon: int
    annihilation_residual: float
    eigen_residual: float
    nodes: int

    def to_json(self) -> dict:
        return {"label": self.label, "energy": self.energy, "chain_energy": self.chain_energy,
                "normalizable": self.normalizable, "epsilon": self.epsilon,
                "annihilation_residual": self.annihilation_residual,
                "eigen_residual": self.eigen_residual, "nodes": self.nodes}


def _exp_safe(x):
    with np.errstate(over="ignore", invalid="ignore"):
        return np.exp(np.clip(x, -700, 700))


def zero_modes(data: SuperData, tail: float = 1e-8) -> list[ZeroMode]:
    """Kernel of the lowering ladder ``a`` of the model Hamiltonian (three modes).

    Each mode is an exponential of a quadrature times a closed-form
    prefactor from the chain; none are dropped.  ``energy`` is the
    Rayleigh quotient in units of ``hbar omega`` including the
    ``y``-oscillator zero point ``1/2``.
    """
    h, ep = data.h, data.epsilon
    g1, g2, g3 = data.g()
    g1p, g2p, g3p = data.g_prime()
    e1, e2, e3 = data.energies()
    ref = len(data.z) // 2
    ig = [cumulative_integral(g, gp, h, ref) for g, gp in ((g1, g1p), (g2, g2p), (g3, g3p))]
    w = data.w
    if ep == 1:
        cand = [
            ("a", np.ones_like(w), ig[2], e3 + 1),
            ("b", ep * w / math.sqrt(2), ig[1], e2 + 1),
            ("c", (g1p + g1 * g1 + ep * w * g1 + data.m0()) / 2, ig[0], e1 + 1),
        ]
    else:
        cand = [
            ("a", np.ones_like(w), -ig[0], e1),
            ("b", (g1 + g2) / math.sqrt(2), -ig[1], e2),
            ("c", (g3 * g3 - g3p - g2p + g2 * g3 + g1 * g3 + g1 * g2) / 2, -ig[2], e3),
        ]
    sc = build_supercharges(data)
    a = sc.a()
    H = sc.model
    out = []
    m = 5 * MARGIN
    for label, pref, expo, e_chain in cand:
        top = expo[np.isfinite(expo)]
        with np.errstate(all="ignore"):
            psi = pref * _exp_safe(expo - top.max()) if top.size else np.full_like(expo, np.nan)
        finite = bool(np.all(np.isfinite(psi)))
        peak = float(np.nanmax(np.abs(psi))) if finite else float("inf")
        ends = max(abs(psi[0]), abs(psi[-1])) if finite else float("inf")
        normalizable = bool(finite and peak > 0 and ends < tail * peak)
        if finite and peak > 0:
            psi = psi / math.sqrt(float(np.sum(psi * psi) * h))
            apsi = a(psi)
            res_a = float(np.sqrt(np.sum(_interior(apsi, m) ** 2) * h))
            Hpsi = H(psi)
            E = float(np.sum(_interior(psi * Hpsi, m)) * h / (np.sum(_interior(psi * psi, m)) * h))
            res_e = float(np.max(np.abs(_interior(Hpsi - E * psi, m))))
            nodes = node_count(psi)
        else:
            res_a = res_e = float("inf")
            E, nodes = float("nan"), -1
        out.append(ZeroMode(label, psi, E + 0.5, e_chain + 0.5, normalizable, ep, res_a, res_e, nodes))
    return out


# -- ladder check ----------------------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderReport:
    rows: list
    skipped: list
    spacing_matches: bool

    @property
    def passed(self) -> bool:
        return self.spacing_matches and all(r["overlap"] > 1 - 1e-4 for r in self.rows)

    def to_json(self) -> dict:
        return {"rows": self.rows, "skipped": self.skipped, "spacing_matches": self.spacing_matches,
                "passed": self.passed}


def ladder_check(data: SuperData, eig: SpectrumRecord, levels=None, series_spacing: float = 1.0) -> LadderReport:
    """``a^+`` maps the eigenfunction at ``E`` to the one at ``E + 2 lambda``.

    ``eig`` holds eigenpairs of the model Hamiltonian on the same points
    as ``data.z`` (energies in units of ``hbar omega``).  Rows carry the
    overlap after normalization and the overlap of ``a a^+ psi`` with ``psi``.
    """
    if eig.vectors is None or eig.vectors.shape[1] != len(data.z):
        raise ValueError("eigenpairs must live on the SuperData grid")
    stride = ladder_stride(data.h)
    sc = build_supercharges(data.subsample(stride))
    ad, a = sc.a_dagger(), sc.a()
    vectors = eig.vectors[:, ::stride]
    E = np.asarray(eig.eigenvalues)
    levels = range(len(E)) if levels is None else levels
    rows, skipped = [], []
    m = 5 * MARGIN
    for n in levels:
        target = E[n] + sc.two_lambda
        k = int(np.argmin(np.abs(E - target)))
        if abs(E[k] - target) > 1e-4:
            skipped.append({"n": n, "reason": f"no computed level near E = {target:.6g}"})
            continue
        psi = vectors[n]
        up = ad(psi)
        up_i, tgt = _interior(up, m), _interior(vectors[k], m)
        ov = abs(float(np.sum(up_i * tgt))) / math.sqrt(float(np.sum(up_i ** 2) * np.sum(tgt ** 2)))
        back = a(np.where(np.isfinite(up), up, 0.0))
        b_i, p_i = _interior(back, 2 * m), _interior(psi, 2 * m)
        ov_back = abs(float(np.sum(b_i * p_i))) / math.sqrt(float(np.sum(b_i ** 2) * np.sum(p_i ** 2)))
        rows.append({"n": int(n), "E": float(E[n]), "target": int(k), "E_target": float(E[k]),
                     "overlap": ov, "round_trip_overlap": ov_back})
    return LadderReport(rows, skipped, abs(sc.two_lambda - series_spacing) < 1e-12)


# -- printed superpotentials (diagnostic) -------------------------------------------------------------------

def printed_superpotentials(data: SuperData) -> tuple:
    """``W1, W2, W3`` transcribed literally (with ``hbar = omega = 1`` in ``z`` units)."""
    r8, r2 = math.sqrt(1 / 8), math.sqrt(1 / 2)
    c = 2 * math.sqrt(-data.beta)
    W1 = r8 * data.w + r2 * data.wp - c
    W2 = r8 * data.w - r2 * data.wp - c
    W3 = r2 * data.w - data.z / 2
    return W1, W2, W3


def printed_factorization_spread(data: SuperData) -> float:
    """Spread of ``W3^2 + W3'/sqrt(2) - U`` (zero iff the printed ``q^+ q`` factorizes ``h1``)."""
    _, _, W3 = printed_superpotentials(data)
    W3p = math.sqrt(1 / 2) * data.wp - 0.5
    diff = W3 * W3 + W3p / math.sqrt(2) - data.potential()
    return float(np.max(diff) - np.min(diff))
