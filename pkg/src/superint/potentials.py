"""Exotic potentials evaluated on meshes from a transcendent source.

A source is any callable ``source(z, deriv)`` returning ``w`` or ``w'``
at the transcendent's own argument: a rational seed, a
:class:`~superint.transcendents.Trajectory` or :class:`TwoSided`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import printed
from .transcendents import PainleveSpec, integrate_painleve, rational_seed

CASES = ("VP4", "Q1_1", "Q2_1", "Q3_1")
_KIND = {"VP4": "P4", "Q1_1": "P5", "Q2_1": "P4", "Q3_1": "P3"}


@dataclass(frozen=True)
class GridFunc:
    """Uniform 1D grid function; ``mask`` marks cells whose value is undefined."""

    x0: float
    h: float
    values: np.ndarray
    bc: str = "dirichlet"
    mask: np.ndarray | None = None

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("grid step must be positive")
        if self.bc not in ("dirichlet", "half-line-dirichlet"):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        mask = ~np.isfinite(vals) if self.mask is None else np.asarray(self.mask, dtype=bool)
        object.__setattr__(self, "mask", mask)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(len(self.values))

    @classmethod
    def from_function(cls, f, lo: float, hi: float, h: float, bc: str = "dirichlet") -> "GridFunc":
        n = max(1, int(round((hi - lo) / h)))
        x = np.linspace(lo, hi, n + 1)
        return cls(lo, (hi - lo) / n, f(x), bc)

    def to_csv(self) -> str:
        from .io import fmt
        lines = ["x,value"]
        for xv, v, m in zip(self.x, self.values, self.mask):
            lines.append(f"{fmt(xv)}," + ("" if m else fmt(v)))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PotentialGrid:
    """``V`` on the mesh (1D for VP4, ``(y, x)``-shaped otherwise) and the auxiliary ``W(y)``."""

    case_id: str
    x: np.ndarray
    y: np.ndarray | None
    V: np.ndarray
    W: np.ndarray | None
    mask: np.ndarray
    notes: tuple = field(default_factory=tuple)

    @property
    def masked_cells(self) -> int:
        return int(self.mask.sum())

    def to_csv(self) -> str:
        from .io import fmt
        if self.y is None:
            lines = ["x,V"]
            for xv, v, m in zip(self.x, self.V, self.mask):
                lines.append(f"{fmt(xv)}," + ("" if m else fmt(v)))
        else:
            lines = ["x,y,V,W"]
            for j, yv in enumerate(self.y):
                wv = self.W[j]
                wtxt = fmt(wv) if np.isfinite(wv) else ""
                for i, xv in enumerate(self.x):
                    m = self.mask[j, i]
                    lines.append(f"{fmt(xv)},{fmt(yv)}," + ("" if m else fmt(self.V[j, i])) + f",{wtxt}")
        return "\n".join(lines) + "\n"


class TwoSided:
    """Glue two trajectories integrated away from a common initial point."""

    def __init__(self, left, right, z0: float):
        self.left, self.right, self.z0 = left, right, z0

    def __call__(self, z, deriv: int = 0):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.full(z.shape, np.nan)
        lo = z <= self.z0 if self.right is None else z < self.z0
        hi = ~lo
        if lo.any() and self.left is not None:
            out[lo] = self.left(z[lo], deriv)
        if hi.any() and self.right is not None:
            out[hi] = self.right(z[hi], deriv)
        return out


def trajectory_source(kind: str, params, ic, zlo: float, zhi: float, **kw):
    """Integrate from ``ic = (z0, w0, w0')`` over ``[zlo, zhi]`` in both directions as needed."""
    spec = PainleveSpec(kind, tuple(params))
    z0 = float(ic[0])
    left = integrate_painleve(spec, ic, (z0, zlo), **kw) if zlo < z0 else None
    right = integrate_painleve(spec, ic, (z0, zhi), **kw) if zhi > z0 else None
    return TwoSided(left, right, z0)


def _mesh_axis(spec) -> np.ndarray:
    lo, hi, h = (float(v) for v in spec)
    if not (hi > lo and h > 0):
        raise ValueError("mesh axis must be (lo, hi, step) with hi > lo and step > 0")
    return lo + h * np.arange(int(round((hi - lo) / h)) + 1)


def _p4_params(params):
    return float(params.get("alpha", 0.0)), float(params.get("beta", 0.0))


def eval_exotic_potential(case_id: str, params: dict, mesh: dict, source=None) -> PotentialGrid:
    """Potential and auxiliary ``W`` of ``case_id`` on ``mesh``.

    ``mesh`` has ``x = (lo, hi, step)`` and, except for VP4, ``y``.
    Without ``source`` the P4 rational seed is used when it exists, else
    ``params["ic"] = (z0, w0, w0')`` is integrated over the mesh image.
    """
    if case_id not in CASES:
        raise ValueError(f"unknown case {case_id!r}; expected one of {CASES}")
    if case_id == "VP4":
        return _vp4(params, _mesh_axis(mesh["x"]), source)
    from .fourth import certify as C
    xs, ys = _mesh_axis(mesh["x"]), _mesh_axis(mesh["y"])
    consts = C.param_values(case_id, params)
    if source is None:
        source = case_source(case_id, params, ys)
    yvals = C.transcendent_values(case_id, consts, source, ys)
    raw = printed.EXOTIC_CASES[case_id]()
    V = C.evaluate_grid(C.normalize(raw["V"]), xs, ys, yvals, consts)
    W = C.evaluate_grid(C.normalize(raw["W"]), np.zeros(1), ys, yvals, consts)[:, 0]
    bad_y = ~np.isfinite(yvals["P"]) | ~np.isfinite(yvals["PY"]) | (ys == 0)
    notes = []
    if case_id == "Q1_1":
        cross = np.abs(yvals["P"] - 1.0) < 1e-8
        if cross.any():
            notes.append(f"{int(cross.sum())} rows masked at P5 = 1")
        bad_y |= cross
    if case_id in ("Q1_1", "Q3_1"):
        bad_y |= np.abs(yvals["P"]) < 1e-12
    mask = bad_y[:, None] | (xs == 0)[None, :] | ~np.isfinite(V)
    if np.any(~np.isfinite(yvals["P"])):
        notes.append("transcendent undefined (pole or outside trajectory) on part of the mesh")
    V = np.where(mask, np.nan, V)
    W = np.where(bad_y, np.nan, W)
    return PotentialGrid(case_id, xs, ys, V, W, mask, tuple(notes))


def case_source(case_id: str, params: dict, ys: np.ndarray):
    """Transcendent source covering the image of ``ys`` under the case's change of variable."""
    from .fourth import certify as C
    consts = C.param_values(case_id, params)
    Y = np.asarray(C.chain_for(case_id).arg.evaluate({**consts, "y": ys}), dtype=float) * np.ones_like(ys)
    return _default_source(case_id, params, float(Y.min()), float(Y.max()))


def _default_source(case_id, params, lo, hi):
    kind = _KIND[case_id]
    if kind == "P4":
        seed = rational_seed("P4", _p4_params(params))
        if seed is not None:
            return seed
    if "ic" not in params:
        raise ValueError(f"{case_id}: give a transcendent source or params['ic'] = (z0, w0, w0')")
    names = {"P3": ("alpha", "beta", "gamma", "delta"), "P5": ("alpha", "beta", "gamma", "delta"),
             "P4": ("alpha", "beta")}[kind]
    return trajectory_source(kind, [float(params[n]) for n in names], params["ic"], lo, hi)


def vp4_potential(w, wp, z, alpha, epsilon, hbar=1.0, omega=1.0):
    """``V_E`` from ``w = P4(z)``, ``wp = dw/dz`` at ``z = sqrt(omega/hbar) x``."""
    e = hbar * omega
    return e * (epsilon * wp / 2 + w * w / 2 + z * w + (epsilon - alpha) / 3)


def _vp4(params, xs, source):
    hb, om = float(params.get("hbar", 1.0)), float(params.get("omega", 1.0))
    ep = float(params.get("epsilon", 1.0))
    if ep not in (1.0, -1.0):
        raise ValueError("epsilon must be +1 or -1")
    al, _ = _p4_params(params)
    z = np.sqrt(om / hb) * xs
    if source is None:
        source = _default_source("VP4", params, float(z.min()), float(z.max()))
    w = np.asarray(source(z, 0), dtype=float)
    wp = np.asarray(source(z, 1), dtype=float)
    V = vp4_potential(w, wp, z, al, ep, hb, om)
    mask = ~np.isfinite(V)
    notes = ("transcendent pole or gap inside the mesh",) if mask.any() else ()
    return PotentialGrid("VP4", xs, None, np.where(mask, np.nan, V), None, mask, notes)
