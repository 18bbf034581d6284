"""Batch front-end: ``superint <command> --problem FILE [--out DIR] [--tol T] [--threads N]``.

Exit status 0 means every check passed, 1 means a check failed and 2
means the input was rejected (a JSON error object is printed and, when
possible, written to ``DIR/error.json``).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .io import dumps, fmt

COMMANDS = ("verify2", "compat4", "ptest", "painleve", "potential", "spectrum", "susy")
TOL_ENV = "SUPERINT_TOL"
DEFAULT_TOL = {"verify2": 0.0, "compat4": 1e-6, "ptest": 0.0, "painleve": 1e-8, "potential": 0.0,
               "spectrum": 1e-5, "susy": 1e-5}
TABLES = {"painleve": "trajectory.csv", "potential": "potential.csv", "spectrum": "spectrum.csv",
          "susy": "zero_modes.csv"}


class InputError(Exception):
    def __init__(self, kind: str, message: str, path: str = ""):
        super().__init__(message)
        self.kind, self.message, self.path = kind, message, path

    def to_json(self) -> dict:
        return {"error": {"kind": self.kind, "message": self.message, "path": self.path}}


def schema() -> dict:
    text = resources.files("superint").joinpath("schemas/problem.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate(problem) -> None:
    import jsonschema
    v = jsonschema.Draft202012Validator(schema())
    errors = sorted(v.iter_errors(problem), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        e = _deepest(errors[0])
        raise InputError("schema", e.message, "/".join(str(p) for p in e.absolute_path))


def _deepest(err):
    while err.context:
        err = min(err.context, key=lambda c: (-len(c.absolute_path), c.message))
    return err


def load_problem(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError("io", f"cannot read problem file: {exc.strerror}", str(path))
    if not text.strip():
        raise InputError("schema", "empty problem file", str(path))
    try:
        problem = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("schema", f"invalid JSON: {exc.msg} (line {exc.lineno})", str(path))
    validate(problem)
    return problem


def _real(v) -> float:
    return float(Fraction(v.replace(" ", ""))) if isinstance(v, str) else float(v)


def _exact(v) -> Fraction:
    return Fraction(v.replace(" ", "")) if isinstance(v, str) else Fraction(v)


def _reals(d: dict) -> dict:
    return {k: ([_real(x) for x in v] if isinstance(v, list) else _real(v)) for k, v in d.items()}


def resolve_tol(command: str, problem: dict, cli_tol: float | None) -> float:
    if cli_tol is not None:
        tol = cli_tol
    elif "tol" in problem:
        tol = float(problem["tol"])
    elif os.environ.get(TOL_ENV, "").strip():
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise InputError("input", f"{TOL_ENV} is not a number", TOL_ENV)
    else:
        tol = DEFAULT_TOL[command]
    if not (tol >= 0 and math.isfinite(tol)):
        raise InputError("input", "tolerance must be a finite nonnegative number", "tol")
    return tol


# -- commands -----------------------------------------------------------------------------------------
# Each returns (result dict, checks dict of name -> bool, optional CSV table text).

def cmd_verify2(p: dict, tol: float):
    from . import second_order as so
    from .exact import parse_rational
    if "family" in p:
        V, rules, rels = so.superintegrable_family(p["family"])
        label = p["family"]
    else:
        V, rules, rels = parse_rational(p["potential"], register_new=True), None, ()
        label = p["potential"]
    basis = so.integral_space(V, rules=rules, relations=rels)
    result = {"potential": label, "integral_space_dimension": len(basis),
              "integral_space": [[c.to_text() for c in b.as_tuple()] for b in basis],
              "classes": [so.classify_integral(b).label for b in basis], "tuples": []}
    checks = {}
    for i, t in enumerate(p.get("integrals", [])):
        params = so.IntegralParams2(*[_exact(v) for v in t])
        res = so.compatibility_2nd(params, V, rules=rules, relations=rels)
        phi_x, phi_y = so.derive_determining_2nd(params)
        result["tuples"].append({"params": [str(_exact(v)) for v in t], "residual": res.to_text(),
                                 "phi_x": phi_x.to_text(), "phi_y": phi_y.to_text(),
                                 "class": so.classify_integral(params).label})
        checks[f"residual_zero[{i}]"] = res.is_zero()
    need = p.get("min_integrals", 0 if checks else 1)
    if need or not checks:
        checks["min_integrals"] = len(basis) >= need
    return result, checks, None


def cmd_compat4(p: dict, tol: float):
    from .exact import parse_rational
    from .fourth.coeffs import LeadingCoeffs4, build_fi
    from .fourth import linear as L
    result, checks = {}, {}
    if "A" in p:
        A = LeadingCoeffs4({k: _exact(v) for k, v in p["A"].items()})
        result["f"] = [f.to_text() for f in build_fi(A)]
        cls = L.classify_exotic(A)
        if isinstance(cls, L.NotExotic):
            result["classification"] = {"exotic": False, "reason": cls.reason, "detail": cls.detail}
            label = cls.reason
        else:
            result["classification"] = {
                "exotic": True, "class": cls.label, "exotic_function": cls.exotic,
                "canonical": cls.canonical,
                "shift": None if cls.shift is None else [c.to_text() for c in cls.shift]}
            label = cls.label
            std = L.solve_standard_V1(cls)
            result["standard_V1"] = {"path": std.path, "constraint": std.constraint.to_text(),
                                     "families": {n: f.to_text() for n, f in std.families}}
        if "expect_class" in p:
            checks["class"] = label == p["expect_class"]
        if "potential" in p:
            V = parse_rational(p["potential"], register_new=True)
            res = L.linear_compatibility_pde(A, V)
            result["lcc_residual"] = res.to_text()
            checks["lcc_zero"] = res.is_zero()
    if "certify" in p:
        from .fourth.certify import GridSpec, verify_fourth_order_integral
        from .potentials import case_source
        c = p["certify"]
        params = _reals(c["params"])
        g = c["grid"]
        grid = GridSpec(tuple(_real(v) for v in g["x"]), tuple(_real(v) for v in g["y"]), float(g["step"]))
        source = None
        if "ic" in params:
            source = case_source(c["case"], params, grid.axes()[1])
        rep = verify_fourth_order_integral(c["case"], params, grid, source=source, tol=tol)
        result["certification"] = rep.to_json()
        checks["certified"] = rep.passed
    return result, checks, None


def _ptest_ode(p: dict):
    from .exact import ExactPoly, parse_poly
    from .fourth.exotic import OdePoly, vbii3, vbii4
    from .jets import formal
    from .painleve_test import painleve_ode
    values = {k: _exact(v) for k, v in p.get("values", {}).items()}
    if "ode" in p:
        name = p["ode"]
        if name in ("VbII3", "VbII4"):
            ode = vbii3() if name == "VbII3" else vbii4()
        else:
            ode = painleve_ode(name)
    else:
        base, var = p.get("base", "W"), p.get("var", "y")
        formal(base, (var,))
        ode = OdePoly(parse_poly(p["expression"], register_new=True), base, var)
    if values:
        ode = ode.subs({k: ExactPoly.const(v) for k, v in values.items()})
    return ode


def cmd_ptest(p: dict, tol: float):
    from .painleve_test import painleve_test
    ode = _ptest_ode(p)
    rep = painleve_test(ode)
    result = {"ode": ode.to_text(), **rep.to_json()}
    expect = p.get("expect", "pass")
    return result, {"verdict": rep.passes == (expect == "pass")}, None


def cmd_painleve(p: dict, tol: float):
    from .transcendents import PainleveSpec, integrate_painleve, rational_seed, residual_certificate
    spec = PainleveSpec(p["kind"], tuple(_real(v) for v in p.get("params", [])))
    kw = {k: float(p[k]) for k in ("rtol", "hmax") if k in p}
    traj = integrate_painleve(spec, [_real(v) for v in p["ic"]], [_real(v) for v in p["range"]], **kw)
    cert = residual_certificate(traj)
    result = {**traj.metadata(), "residual_certificate": cert}
    checks = {"complete": bool(traj.complete), "residual": cert < tol}
    if p.get("compare_seed"):
        seed = rational_seed(p["kind"], spec.params)
        if seed is None:
            raise InputError("input", "compare_seed: no rational seed for these parameters", "params/params")
        err = float(np.nanmax(np.abs(traj.w - seed(traj.z, 0))))
        result["seed"] = seed.text()
        result["seed_max_error"] = err
        checks["seed"] = err < max(tol, 1e-8)
    return result, checks, traj.to_csv()


def cmd_potential(p: dict, tol: float):
    from .potentials import eval_exotic_potential
    mesh = {k: [_real(v) for v in ax] for k, ax in p["mesh"].items()}
    if p["case"] != "VP4" and "y" not in mesh:
        raise InputError("input", f"{p['case']} needs a y axis in the mesh", "params/mesh")
    grid = eval_exotic_potential(p["case"], _reals(p.get("params", {})), mesh)
    V = grid.V[~grid.mask]
    result = {"case": grid.case_id, "cells": int(grid.mask.size), "masked_cells": grid.masked_cells,
              "V_min": float(V.min()) if V.size else None, "V_max": float(V.max()) if V.size else None,
              "notes": list(grid.notes)}
    checks = {"evaluated": V.size > 0}
    if "max_masked" in p:
        checks["masked"] = grid.masked_cells <= p["max_masked"]
    return result, checks, grid.to_csv()


def _spectrum_source(p: dict, alpha: float, beta: float):
    from .potentials import trajectory_source
    from .transcendents import rational_seed
    if "ic" in p:
        lo, hi = (_real(v) for v in p.get("zrange", [-8, 8]))
        return trajectory_source("P4", (alpha, beta), [_real(v) for v in p["ic"]], lo, hi)
    seed = rational_seed("P4", (alpha, beta))
    if seed is None:
        raise InputError("input", "no rational seed for these parameters; give ic and zrange", "params")
    return seed


def cmd_spectrum(p: dict, tol: float):
    from .algebra_spectrum import compare_series, energy_series, vp4_numeric_spectrum
    al, be = _real(p["alpha"]), _real(p["beta"])
    ep, om, hb = int(p["epsilon"]), _real(p.get("omega", 1)), _real(p.get("hbar", 1))
    p_max = int(p.get("p_max", 4))
    series = energy_series(_exact_or_float(p["alpha"]), _exact_or_float(p["beta"]), ep, om, hb, p_max)
    n_alg = sum(len(r.eigenvalues) for k, r in series.items() if k != "notes")
    num = vp4_numeric_spectrum(al, be, ep, om, hb, n_levels=int(p.get("n_levels", n_alg)),
                               h=float(p.get("h", 1e-3)), source=_spectrum_source(p, al, be))
    levels = num["levels"]
    rows = compare_series(series, levels)
    union = sorted({round(r["E_alg"], 12) for r in rows})
    k = min(len(union), len(levels))
    union_delta = float(np.max(np.abs(np.array(union[:k]) - levels[:k]))) if k else float("inf")
    result = {"params": {"alpha": al, "beta": be, "epsilon": ep, "omega": om, "hbar": hb, "p_max": p_max},
              "rows": rows, "numeric_levels": levels.tolist(), "union_max_delta": union_delta,
              "notes": series["notes"]}
    checks = {"rows": all(r["delta"] < tol for r in rows),
              "union": len(union) == len(levels) and union_delta < tol}
    lines = ["p,series,E_alg,E_num,|Δ|"]
    for r in rows:
        lines.append(f"{r['p']},{r['series']},{fmt(r['E_alg'])},{fmt(r['E_num'])},{fmt(r['delta'])}")
    return result, checks, "\n".join(lines) + "\n"


def _exact_or_float(v):
    return _exact(v) if isinstance(v, (int, str)) else float(v)


def cmd_susy(p: dict, tol: float):
    from . import susyqm as Q
    from .algebra_spectrum import energy_series
    from .schrodinger import GridFunc, eigen_1d
    al, be = _real(p["alpha"]), _real(p["beta"])
    ep, hb, om = int(p["epsilon"]), _real(p.get("hbar", 1)), _real(p.get("omega", 1))
    lo, hi = (_real(v) for v in p.get("window", [-12, 12]))
    h = float(p.get("h", 1e-3))
    n = int(round((hi - lo) / h))
    x = np.linspace(lo, hi, n + 1)
    z = x[1:-1]
    if "ic" in p:
        from .potentials import trajectory_source
        source = trajectory_source("P4", (al, be), [_real(v) for v in p["ic"]], lo, hi)
    else:
        source = _spectrum_source(p, al, be)
    data = Q.SuperData.from_source(source, al, be, ep, z, hbar=hb, omega=om, branch=int(p.get("branch", -1)))
    tfs = p.get("testfns") or [{"center": c, "width": 1.0} for c in (0.25 * lo, 0.0, 0.15 * hi)]
    testfns = [np.exp(-((z - t["center"]) / t["width"]) ** 2 / 2) for t in tfs]
    inter = Q.verify_intertwining(data, testfns, tol)
    modes = Q.zero_modes(data)
    norm = [m for m in modes if m.normalizable]
    result = {"intertwining": inter.to_json(), "zero_modes": [m.to_json() for m in modes],
              "two_lambda": data.two_lambda, "units": "z = sqrt(omega/hbar) x, energies in hbar omega"}
    checks = {"intertwining": inter.passed,
              "zero_mode_annihilation": bool(norm) and all(m.annihilation_residual < tol for m in norm),
              "zero_mode_energy": all(abs(m.energy - m.chain_energy) < tol for m in norm)}
    levels = int(p.get("ladder_levels", 5))
    if levels:
        U = data.potential()
        eig = eigen_1d(GridFunc(x[0], x[1] - x[0], np.concatenate(([U[0]], U, [U[-1]]))), levels + 4)
        lad = Q.ladder_check(data, eig, levels=range(levels))
        result["ladder"] = lad.to_json()
        result["model_levels"] = (np.asarray(eig.eigenvalues) + 0.5).tolist()
        checks["ladder"] = lad.passed and not lad.skipped
    if be < 0:
        ser = energy_series(al, be, ep, 1.0, 1.0, 0)
        ground = sorted(float(r.eigenvalues[0]) for k, r in ser.items() if k != "notes")
        got = sorted(m.energy for m in norm)
        result["series_ground"] = ground
        if len(got) == len(ground):
            checks["series_ground"] = max(abs(a - b) for a, b in zip(got, ground)) < tol
    header = "z," + ",".join(f"psi_{m.label}" for m in modes)
    lines = [header]
    for i, zv in enumerate(z):
        lines.append(fmt(zv) + "," + ",".join(fmt(m.psi[i]) if math.isfinite(m.psi[i]) else "" for m in modes))
    return result, checks, "\n".join(lines) + "\n"


HANDLERS = {"verify2": cmd_verify2, "compat4": cmd_compat4, "ptest": cmd_ptest, "painleve": cmd_painleve,
            "potential": cmd_potential, "spectrum": cmd_spectrum, "susy": cmd_susy}


# -- driver -------------------------------------------------------------------------------------------

def run(command: str, problem: dict, out: Path, tol: float | None = None) -> int:
    """Execute a validated problem; returns the exit status and writes the artifacts."""
    if problem.get("command") != command:
        raise InputError("input", f"problem file is for {problem.get('command')!r}, not {command!r}", "command")
    t = resolve_tol(command, problem, tol)
    try:
        result, checks, table = HANDLERS[command](problem["params"], t)
    except InputError:
        raise
    except (ValueError, ArithmeticError, KeyError, RuntimeError) as exc:
        raise InputError("module", f"{type(exc).__name__}: {exc}", command)
    passed = all(checks.values())
    names = problem.get("outputs", {})
    out.mkdir(parents=True, exist_ok=True)
    report = {"command": command, "tolerance": t, "passed": passed, "checks": checks, "result": result}
    if table is not None:
        tname = names.get("table", TABLES[command])
        (out / tname).write_text(table, encoding="utf-8")
        report["table"] = tname
    (out / names.get("report", "report.json")).write_text(dumps(report), encoding="utf-8")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superint", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--problem", required=True, help="JSON problem file")
    ap.add_argument("--out", default=".", help="output directory (default: current directory)")
    ap.add_argument("--tol", type=float, default=None,
                    help=f"check tolerance; overrides the problem file and ${TOL_ENV}")
    ap.add_argument("--threads", type=int, default=None, help="worker threads for compiled kernels")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    out = Path(args.out)
    try:
        if args.threads is not None:
            if args.threads < 1:
                raise InputError("input", "--threads must be at least 1", "threads")
            from ._accel import set_threads
            set_threads(args.threads)
        problem = load_problem(args.problem)
        return run(args.command, problem, out, args.tol)
    except InputError as err:
        text = dumps(err.to_json())
        sys.stdout.write(text)
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / "error.json").write_text(text, encoding="utf-8")
        except OSError:
            pass
        return 2


if __name__ == "__main__":
    sys.exit(main())
