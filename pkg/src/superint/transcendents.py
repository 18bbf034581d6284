"""Painlevé transcendents P1..P5 as initial-value problems.

Integration uses a Dormand-Prince 5(4) pair along straight segments of the
complex z-plane.  Movable poles of P1, P2, P4 (and zeros of P4, where the
equation is singular) are passed on a rectangular detour through the complex
plane; the solutions are meromorphic there, so the continuation back on the
real axis is path independent.  P3 and P5 halt at movable singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._accel import jit

KINDS = {"P1": 1, "P2": 2, "P3": 3, "P4": 4, "P5": 5}
ARITY = {"P1": 0, "P2": 1, "P3": 4, "P4": 2, "P5": 4}
PARAM_NAMES = {"P1": (), "P2": ("alpha",), "P3": ("alpha", "beta", "gamma", "delta"),
               "P4": ("alpha", "beta"), "P5": ("alpha", "beta", "gamma", "delta")}
POLE_ORDER = {"P1": 2, "P2": 1, "P4": 1}
PASSABLE = ("P1", "P2", "P4")

RTOL = 1e-10
ATOL = 1e-12
W_BIG = 1e6
CHECK_REFINE = 10


class FixedSingularity(ValueError):
    """The initial point or the range meets a fixed singularity of the equation."""

    def __init__(self, kind: str, where: str):
        super().__init__(f"{kind}: fixed singularity at {where}")
        self.kind = kind
        self.where = where


@dataclass(frozen=True)
class PainleveSpec:
    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown Painlevé kind {self.kind!r}")
        if len(self.params) != ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {ARITY[self.kind]} parameters "
                             f"{PARAM_NAMES[self.kind]}, got {len(self.params)}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def code(self) -> int:
        return KINDS[self.kind]

    def param_array(self) -> np.ndarray:
        out = np.zeros(4)
        out[:len(self.params)] = self.params
        return out

    def rhs(self, z, w, wp):
        """``w''`` as printed; works on floats, complex numbers, arrays and :class:`Taylor`."""
        return _rhs_generic(self.kind, self.params, z, w, wp)


def _rhs_generic(kind, p, z, w, wp):
    if kind == "P1":
        return 6 * w * w + z
    if kind == "P2":
        return 2 * w * w * w + z * w + p[0]
    if kind == "P3":
        a, b, g, d = p
        return wp * wp / w - wp / z + (a * w * w + b) / z + g * w * w * w + d / w
    if kind == "P4":
        a, b = p
        return wp * wp / (2 * w) + 1.5 * w * w * w + 4 * z * w * w + 2 * (z * z - a) * w + b / w
    a, b, g, d = p
    return ((1 / (2 * w) + 1 / (w - 1)) * wp * wp - wp / z
            + (w - 1) * (w - 1) / (z * z) * (a * w + b / w) + g * w / z + d * w * (w + 1) / (w - 1))


# -- kernels ----------------------------------------------------------------

@jit
def _rhs(kind, p, z, w, wp):
    if kind == 1:
        return 6.0 * w * w + z
    if kind == 2:
        return 2.0 * w * w * w + z * w + p[0]
    if kind == 3:
        return wp * wp / w - wp / z + (p[0] * w * w + p[1]) / z + p[2] * w * w * w + p[3] / w
    if kind == 4:
        return (wp * wp / (2.0 * w) + 1.5 * w * w * w + 4.0 * z * w * w
                + 2.0 * (z * z - p[0]) * w + p[1] / w)
    return ((1.0 / (2.0 * w) + 1.0 / (w - 1.0)) * wp * wp - wp / z
            + (w - 1.0) * (w - 1.0) / (z * z) * (p[0] * w + p[1] / w)
            + p[2] * w / z + p[3] * w * (w + 1.0) / (w - 1.0))


@jit
def dopri_segment(kind, p, za, direc, length, w0, wp0, rtol, atol, h0, hmax,
                  wbig, wsmall, near1, out_s, out_w, out_wp):
    """Integrate along ``z = za + s*direc``, ``0 <= s <= length``.

    Accepted nodes are written to the ``out_*`` arrays (node 0 is the start).
    Returns ``(count, status)``: 0 reached the end, 1 ``|w| > wbig``,
    2 ``|w| < wsmall``, 3 step underflow, 4 node buffer full, 5 ``|w-1| < near1``.
    """
    c2, c3, c4, c5 = 0.2, 0.3, 0.8, 8.0 / 9.0
    a21 = 0.2
    a31, a32 = 3.0 / 40.0, 9.0 / 40.0
    a41, a42, a43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
    a51, a52, a53, a54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
    a61, a62, a63, a64, a65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                               49.0 / 176.0, -5103.0 / 18656.0)
    b1, b3, b4, b5, b6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
    e1, e3, e4, e5, e6, e7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                              -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)
    cap = out_s.shape[0]
    s = 0.0
    w = w0
    v = wp0
    out_s[0] = 0.0
    out_w[0] = w
    out_wp[0] = v
    n = 1
    h = min(h0, hmax, length)
    d = direc
    k1w = d * v
    k1v = d * _rhs(kind, p, za, w, v)
    while s < length:
        if n >= cap:
            return n, 4
        last = False
        if s + h >= length:
            h = length - s
            last = True
        if h < 1e-14 * (1.0 + abs(s)):
            return n, 3
        z = za + s * d
        yw = w + h * a21 * k1w
        yv = v + h * a21 * k1v
        k2w = d * yv
        k2v = d * _rhs(kind, p, z + c2 * h * d, yw, yv)
        yw = w + h * (a31 * k1w + a32 * k2w)
        yv = v + h * (a31 * k1v + a32 * k2v)
        k3w = d * yv
        k3v = d * _rhs(kind, p, z + c3 * h * d, yw, yv)
        yw = w + h * (a41 * k1w + a42 * k2w + a43 * k3w)
        yv = v + h * (a41 * k1v + a42 * k2v + a43 * k3v)
        k4w = d * yv
        k4v = d * _rhs(kind, p, z + c4 * h * d, yw, yv)
        yw = w + h * (a51 * k1w + a52 * k2w + a53 * k3w + a54 * k4w)
        yv = v + h * (a51 * k1v + a52 * k2v + a53 * k3v + a54 * k4v)
        k5w = d * yv
        k5v = d * _rhs(kind, p, z + c5 * h * d, yw, yv)
        yw = w + h * (a61 * k1w + a62 * k2w + a63 * k3w + a64 * k4w + a65 * k5w)
        yv = v + h * (a61 * k1v + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v)
        k6w = d * yv
        k6v = d * _rhs(kind, p, z + h * d, yw, yv)
        nw = w + h * (b1 * k1w + b3 * k3w + b4 * k4w + b5 * k5w + b6 * k6w)
        nv = v + h * (b1 * k1v + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v)
        k7w = d * nv
        k7v = d * _rhs(kind, p, z + h * d, nw, nv)
        ew = h * (e1 * k1w + e3 * k3w + e4 * k4w + e5 * k5w + e6 * k6w + e7 * k7w)
        ev = h * (e1 * k1v + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v)
        sw = atol + rtol * max(abs(w), abs(nw))
        sv = atol + rtol * max(abs(v), abs(nv))
        err = math.sqrt(0.5 * ((abs(ew) / sw) ** 2 + (abs(ev) / sv) ** 2))
        if not (err == err) or err > 1e300 or not (abs(nw) < 1e300 and abs(nv) < 1e300):
            h *= 0.2
            continue
        if err <= 1.0:
            s = length if last else s + h
            w = nw
            v = nv
            k1w = k7w
            k1v = k7v
            out_s[n] = s
            out_w[n] = w
            out_wp[n] = v
            n += 1
            if abs(w) > wbig:
                return n, 1
            if wsmall > 0.0 and abs(w) < wsmall:
                return n, 2
            if near1 > 0.0 and abs(w - 1.0) < near1:
                return n, 5
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        h = min(h * fac, hmax)
    return n, 0


# -- Taylor jets ------------------------------------------------------------

class Taylor:
    """Truncated power series ``sum c[k] t^k`` with field arithmetic."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = np.asarray(c, dtype=complex)

    @classmethod
    def const(cls, v, n):
        c = np.zeros(n, dtype=complex)
        c[0] = v
        return cls(c)

    def _co(self, o):
        return o if isinstance(o, Taylor) else Taylor.const(o, len(self.c))

    def __add__(self, o):
        return Taylor(self.c + self._co(o).c)

    __radd__ = __add__

    def __sub__(self, o):
        return Taylor(self.c - self._co(o).c)

    def __rsub__(self, o):
        return Taylor(self._co(o).c - self.c)

    def __neg__(self):
        return Taylor(-self.c)

    def __mul__(self, o):
        if not isinstance(o, Taylor):
            return Taylor(self.c * o)
        return Taylor(np.convolve(self.c, o.c)[:len(self.c)])

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, Taylor):
            return Taylor(self.c / o)
        a, b = self.c, o.c
        out = np.zeros_like(a)
        for k in range(len(a)):
            out[k] = (a[k] - np.dot(b[1:k + 1], out[k - 1::-1][:k])) / b[0]
        return Taylor(out)

    def __rtruediv__(self, o):
        return self._co(o) / self

    def __pow__(self, k: int):
        out = Taylor.const(1.0, len(self.c))
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "Taylor":
        n = len(self.c)
        d = np.zeros(n, dtype=complex)
        d[:n - 1] = self.c[1:] * np.arange(1, n)
        return Taylor(d)


def taylor_solution(spec: PainleveSpec, z0, w0, wp0, order: int) -> np.ndarray:
    """Coefficients ``c_k`` of the local solution ``w(z0 + t)`` up to ``t^order``."""
    c = np.zeros(order + 1, dtype=complex)
    c[0], c[1] = w0, wp0
    zs = Taylor.const(z0, order + 1)
    zs.c[1] = 1.0
    for m in range(order - 1):
        ws = Taylor(c.copy())
        f = spec.rhs(zs, ws, ws.derivative())
        c[m + 2] = f.c[m] / ((m + 1) * (m + 2))
    return c


def derivatives_from_taylor(c: np.ndarray) -> np.ndarray:
    return c * np.array([math.factorial(k) for k in range(len(c))])


# -- Hermite dense output -----------------------------------------------------

JET = 4  # derivative data per node used for dense output


def _hermite_inverse(m: int) -> np.ndarray:
    """Inverse map from end data ``(q^(k)(0), q^(k)(1))_{k<=m}`` to monomial coefficients."""
    deg = 2 * m + 1
    rows = []
    for end in (0.0, 1.0):
        for k in range(m + 1):
            row = np.zeros(deg + 1)
            for i in range(k, deg + 1):
                coef = math.factorial(i) / math.factorial(i - k)
                row[i] = coef * (end ** (i - k) if i > k else 1.0)
            rows.append(row)
    return np.linalg.inv(np.array(rows))


_HINV = _hermite_inverse(JET)


def hermite_coefficients(h, left, right):
    """Monomial coefficients in ``s = t/h`` for each interval; ``left/right`` are (n, JET+1) derivative arrays.

    Built as the left Taylor polynomial plus a correction fitted to the
    mismatch at the right end, which keeps roundoff proportional to the
    mismatch rather than to the data.
    """
    k = np.arange(JET + 1)
    fact = np.array([math.factorial(i) for i in k], dtype=float)
    scale = h[:, None] ** k[None, :]
    tl = left * scale / fact
    # derivatives of the Taylor part at s = 1
    at1 = np.zeros_like(tl)
    for d in k:
        for i in range(d, JET + 1):
            at1[:, d] += tl[:, i] * math.factorial(i) / math.factorial(i - d)
    diff = right * scale - at1
    data = np.hstack([np.zeros_like(diff), diff])
    coef = data @ _HINV.T
    coef[:, :JET + 1] += tl
    return coef


def anchors(z, seg, hmin, jets=None):
    """For each sample interval ``i``, node indices ``(a, b)`` with ``a <= i < b``,
    ``|z_b - z_a| >= hmin`` where possible, within one pole-free piece.

    With ``jets`` the span is further capped at a tenth of the local scale
    ``min(|w/w'|, sqrt|w/w''|)`` so steep stretches keep short anchors.
    """
    n = len(z)
    hcap = np.full(n, float(hmin))
    if jets is not None:
        with np.errstate(all="ignore"):
            w = np.abs(jets[:, 0])
            ell = np.minimum(w / np.abs(jets[:, 1]), np.sqrt(w / np.abs(jets[:, 2])))
        hcap = np.minimum(hcap, np.nan_to_num(0.1 * ell, nan=hmin, posinf=hmin))
    a = np.arange(n - 1)
    b = a + 1
    for i in range(n - 1):
        lo, hi = i, i + 1
        target = min(hcap[i], hcap[i + 1])
        while abs(z[hi] - z[lo]) < target:
            grow_hi = hi + 1 < n and seg[hi + 1] == seg[i]
            grow_lo = lo - 1 >= 0 and seg[lo - 1] == seg[i]
            if grow_hi and (not grow_lo or hi - i <= i - lo):
                hi += 1
            elif grow_lo:
                lo -= 1
            else:
                break
        a[i], b[i] = lo, hi
    return a, b


ANCHOR_H = 0.02


def hermite_eval(coef, s, h, deriv=0):
    """d^deriv/dt^deriv of the interval polynomials at normalized points ``s`` (broadcast over rows)."""
    deg = coef.shape[-1] - 1
    out = np.zeros(np.broadcast(coef[..., 0], s).shape, dtype=coef.dtype)
    for i in range(deg, deriv - 1, -1):
        f = math.factorial(i) / math.factorial(i - deriv)
        out = out * s + coef[..., i] * f
    return out / h ** deriv


# -- trajectories -------------------------------------------------------------

@dataclass(frozen=True)
class PoleMarker:
    interval: tuple
    location: float
    kind: str = "pole"  # "pole" or "zero" (P4 zeros are singular points of the equation)


@dataclass(frozen=True)
class Trajectory:
    spec: PainleveSpec
    z: np.ndarray
    w: np.ndarray
    wp: np.ndarray
    segment: np.ndarray  # pole-free piece index of each sample
    poles: tuple
    residual_bound: float
    complete: bool
    status: str
    imag_drift: float = 0.0
    _jets: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def samples(self):
        return list(zip(self.z.tolist(), self.w.tolist(), self.wp.tolist()))

    def jets(self) -> np.ndarray:
        """Derivatives ``w^(k)`` at the samples, ``k = 0..JET``."""
        return self._jets

    def _locate(self, zq):
        zq = np.atleast_1d(np.asarray(zq, dtype=float))
        asc = self.z[-1] >= self.z[0]
        zs = self.z if asc else self.z[::-1]
        idx = np.searchsorted(zs, zq, side="right") - 1
        idx = np.clip(idx, 0, len(zs) - 2)
        if not asc:
            idx = len(zs) - 2 - idx
        return zq, idx

    def eval(self, zq, deriv: int = 0) -> np.ndarray:
        """Dense values of ``w^(deriv)``; NaN across pole detours and outside the range."""
        zq, i = self._locate(zq)
        J = self.jets()
        A, B = anchors(self.z, self.segment, ANCHOR_H, J)
        a, b = A[i], B[i]
        h = self.z[b] - self.z[a]
        coef = hermite_coefficients(h, J[a], J[b])
        s = (zq - self.z[a]) / h
        out = hermite_eval(coef, s, h, deriv)
        lo, hi = sorted((self.z[0], self.z[-1]))
        bad = (self.segment[i] != self.segment[i + 1]) | (zq < lo - 1e-12) | (zq > hi + 1e-12)
        out[bad] = np.nan
        return out

    __call__ = eval

    def to_csv(self) -> str:
        from .io import fmt
        lines = ["z,w,wp"]
        for a, b, c in zip(self.z, self.w, self.wp):
            lines.append(f"{fmt(a)},{fmt(b)},{fmt(c)}")
        return "\n".join(lines) + "\n"

    def metadata(self) -> dict:
        return {
            "kind": self.spec.kind,
            "params": dict(zip(PARAM_NAMES[self.spec.kind], self.spec.params)),
            "residual_bound": self.residual_bound,
            "complete": self.complete,
            "status": self.status,
            "samples": int(len(self.z)),
            "poles": [{"interval": list(p.interval), "location": p.location, "type": p.kind}
                      for p in self.poles],
            "imag_drift": self.imag_drift,
        }


STATUS = {0: "ok", 1: "pole", 2: "zero", 3: "step underflow", 4: "node buffer full", 5: "w=1 crossing"}


def _check_entry(spec: PainleveSpec, z0, w0, z1):
    k = spec.kind
    if k in ("P3", "P5"):
        if z0 == 0:
            raise FixedSingularity(k, "z=0 (initial point)")
        if min(z0, z1) <= 0 <= max(z0, z1):
            raise FixedSingularity(k, "z=0 inside the range")
    if k in ("P3", "P4", "P5") and w0 == 0:
        if not (k == "P4" and spec.params[1] == 0):
            raise FixedSingularity(k, "w=0 (initial value)")
    if k == "P5" and w0 == 1:
        raise FixedSingularity(k, "w=1 (initial value)")


def integrate_painleve(spec: PainleveSpec, ic, zrange, *, rtol=RTOL, atol=ATOL,
                       hmax=0.01, wbig=W_BIG, max_poles=64) -> Trajectory:
    """Integrate ``spec`` from ``ic = (z0, w0, w0')`` to ``zrange[1]`` along the real axis."""
    z0, w0, wp0 = (float(v) for v in ic)
    z1 = float(zrange[1] if isinstance(zrange, (tuple, list)) else zrange)
    if z0 != float(zrange[0] if isinstance(zrange, (tuple, list)) else z0):
        raise ValueError("range must start at the initial point")
    _check_entry(spec, z0, w0, z1)
    sign = 1.0 if z1 >= z0 else -1.0
    kind = spec.kind
    code, p = spec.code, spec.param_array()
    trigger = min(wbig, 1e3)
    wsmall = {"P3": 1e-2, "P4": 1e-3, "P5": 1e-2}.get(kind, 0.0)
    near1 = 1e-2 if kind == "P5" else 0.0

    Z, Wv, Wp, seg = [z0], [complex(w0)], [complex(wp0)], [0]
    poles: list[PoleMarker] = []
    piece, drift = 0, 0.0
    za, wa, wpa = z0, complex(w0), complex(wp0)
    status, complete = "ok", True
    while sign * (z1 - za) > 0:
        n, st, S, Wn, Vn = _run(code, p, complex(za), complex(sign), sign * (z1 - za), wa, wpa,
                                rtol, atol, hmax, trigger, wsmall, near1)
        Z.extend((za + sign * S[1:n]).tolist())
        Wv.extend(Wn[1:n].tolist())
        Wp.extend(Vn[1:n].tolist())
        seg.extend([piece] * (n - 1))
        if st == 0:
            break
        singular = {1: "pole", 2: "zero"}.get(st)
        if singular is None or kind not in PASSABLE or (st == 2 and kind != "P4") or len(poles) >= max_poles:
            status, complete = STATUS[st], False
            if singular:
                status = f"halted at {singular} near z={Z[-1]:.6g}"
            break
        order = POLE_ORDER[kind] if st == 1 else -1
        zc, wc, vc = Z[-1], Wv[-1], Wp[-1]
        zp = (zc + order * wc / vc).real  # w'/w ~ -order/(z - zp)
        radii = ZERO_RADII if st == 2 else POLE_RADII
        result = _detour(code, p, Z, Wv, Wp, seg, zp, sign, rtol, atol, z1, radii)
        if result is None:
            status, complete = f"detour failed near z={zp:.6g}", False
            break
        zs, ze, we, wpe = result
        if st == 1:  # w is analytic through a zero, so dense output may span it
            piece += 1
        drift = max(drift, abs(we.imag), abs(wpe.imag))
        poles.append(PoleMarker((min(zs, ze), max(zs, ze)), float(zp), singular))
        za, wa, wpa = ze, complex(we.real), complex(wpe.real)
        if sign * (z1 - za) <= 0:
            break
        Z.append(za)
        Wv.append(wa)
        Wp.append(wpa)
        seg.append(piece)
    z = np.array(Z)
    w = np.array(Wv).real
    wp = np.array(Wp).real
    seg_a = np.array(seg)
    jets = _node_jets(spec, z, w, wp)
    traj = Trajectory(spec, z, w, wp, seg_a, tuple(poles), 0.0, complete, status, drift, jets)
    bound = residual_certificate(traj)
    return Trajectory(spec, z, w, wp, seg_a, tuple(poles), bound, complete, status, drift, jets)


def _run(code, p, za, direc, length, w0, wp0, rtol, atol, hmax, wbig, wsmall, near1, cap=200000):
    S = np.zeros(cap)
    Wn = np.zeros(cap, dtype=np.complex128)
    Vn = np.zeros(cap, dtype=np.complex128)
    n, st = dopri_segment(code, p, za, direc, float(length), w0, wp0, rtol, atol, 1e-3, hmax,
                          wbig, wsmall, near1, S, Wn, Vn)
    return n, st, S, Wn, Vn


POLE_RADII = (0.3, 0.18, 0.5, 0.1)
ZERO_RADII = (0.1, 0.05, 0.18)


def _detour(code, p, Z, Wv, Wp, seg, zp, sign, rtol, atol, z1, radii):
    """Step around the singular point ``zp`` in the complex plane.

    Truncates the sample lists back to a start point ``zp - r`` and returns
    ``(zs, ze, w(ze), w'(ze))`` with ``ze = zp + r`` (in the direction of
    travel) or ``ze = z1`` when the range ends first.
    """
    for r in radii:
        for side in (1j, -1j):
            keep = [i for i, zz in enumerate(Z) if sign * (zp - sign * r - zz) >= 0]
            if not keep:
                continue
            k = keep[-1]
            zs, ws, vs = Z[k], Wv[k], Wp[k]
            ze = zp + sign * r
            if sign * (ze - z1) > 0:
                ze = z1
            if sign * (ze - zs) <= 0:
                continue
            height = r * side
            corners = [complex(zs), complex(zs) + height, complex(ze) + height, complex(ze)]
            w, v, ok = ws, vs, True
            for a, b in zip(corners[:-1], corners[1:]):
                L = abs(b - a)
                n, st, S, Wn, Vn = _run(code, p, a, (b - a) / L, L, w, v, rtol, atol, 0.05,
                                        1e12, 0.0, 0.0, cap=20000)
                if st != 0:
                    ok = False
                    break
                w, v = Wn[n - 1], Vn[n - 1]
            if not ok:
                continue
            del Z[k + 1:], Wv[k + 1:], Wp[k + 1:], seg[k + 1:]
            return zs, ze, complex(w), complex(v)
    return None


def _node_jets(spec: PainleveSpec, z, w, wp) -> np.ndarray:
    J = np.zeros((len(z), JET + 1))
    for i in range(len(z)):
        c = taylor_solution(spec, z[i], w[i], wp[i], JET)
        J[i] = derivatives_from_taylor(c).real
    return J


def residual_scale(spec: PainleveSpec, z, w, w1, w2, rel=1e-6):
    """``1 + |w''| + |w F_w| + |w' F_w'|``: the size of ``F`` under relative data perturbations.

    Near the singular values of ``w`` (0 for P3/P4/P5, 1 for P5) the terms of
    ``F`` are large and cancel; this scale turns the residual into a
    backward error.
    """
    def sens(f_plus, f_minus):
        return np.abs(f_plus - f_minus) / (2 * rel)
    sw = sens(spec.rhs(z, w * (1 + rel), w1), spec.rhs(z, w * (1 - rel), w1))
    sv = sens(spec.rhs(z, w, w1 * (1 + rel)), spec.rhs(z, w, w1 * (1 - rel)))
    return 1.0 + np.abs(w2) + sw + sv


def residual_certificate(traj: Trajectory, refine: int = CHECK_REFINE) -> float:
    """Max relative ODE residual of the Hermite dense output on a ``refine``-times finer mesh.

    The residual at a check point is ``|w'' - F(z, w, w')|`` divided by
    :func:`residual_scale`, with ``w, w', w''`` taken from the interpolant;
    intervals spanning a pole detour are skipped.
    """
    z, J, seg = traj.z, traj.jets(), traj.segment
    if len(z) < 2:
        return 0.0
    ok = (seg[:-1] == seg[1:]) & (z[1:] != z[:-1])
    i = np.nonzero(ok)[0]
    if len(i) == 0:
        return 0.0
    A, B = anchors(z, seg, ANCHOR_H, J)
    a, b = A[i], B[i]
    h = z[b] - z[a]
    coef = hermite_coefficients(h, J[a], J[b])
    t = np.linspace(0.0, 1.0, refine + 1)[None, :]
    zz = z[i][:, None] + t * (z[i + 1] - z[i])[:, None]
    hh = h[:, None]
    s = (zz - z[a][:, None]) / hh
    c3 = coef[:, None, :]
    w = hermite_eval(c3, s, hh, 0)
    w1 = hermite_eval(c3, s, hh, 1)
    w2 = hermite_eval(c3, s, hh, 2)
    with np.errstate(all="ignore"):
        F = traj.spec.rhs(zz, w, w1)
        r = np.abs(w2 - F) / residual_scale(traj.spec, zz, w, w1, w2)
    r = r[np.isfinite(r)]
    return float(r.max()) if r.size else 0.0


# -- exact seeds --------------------------------------------------------------

@dataclass(frozen=True)
class RationalSeed:
    """``w = slope * z`` solving P4 with the given parameters."""

    kind: str
    params: tuple
    slope: Fraction

    def __call__(self, z, deriv: int = 0):
        z = np.asarray(z, dtype=float)
        if deriv == 0:
            return float(self.slope) * z
        if deriv == 1:
            return np.full_like(z, float(self.slope))
        return np.zeros_like(z)

    def text(self) -> str:
        return f"w = {self.slope}*z"


_SEEDS = {(Fraction(0), Fraction(-2, 9)): Fraction(-2, 3), (Fraction(0), Fraction(-2)): Fraction(-2)}


def rational_seed(kind: str, params) -> RationalSeed | None:
    if kind != "P4":
        raise ValueError("rational seeds are catalogued for P4 only")
    key = tuple(Fraction(v).limit_denominator(10 ** 6) for v in params)
    if len(key) != 2:
        raise ValueError("P4 takes (alpha, beta)")
    slope = _SEEDS.get(key)
    return None if slope is None else RationalSeed("P4", key, slope)
