"""Compiled (numba) versus plain numpy kernels.

Each backend runs in its own interpreter because the choice is made at
import time (``SUPERINT_NO_NUMBA=1``).  Compilation is timed separately
from the steady-state runs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def worker(repeat: int) -> dict:
    import numpy as np
    from superint import _accel
    from superint.schrodinger import _eigenvalues
    from superint.transcendents import PainleveSpec, _run

    n, L = 20001, 12.0
    x = np.linspace(-L, L, n + 2)[1:-1]
    h = x[1] - x[0]
    k = 1.0 / (2 * h * h)
    d = x * x / 2 + 2 * k
    e = np.full(n - 1, -k)

    def sturm():
        return _eigenvalues(d, e, 10)

    spec = PainleveSpec("P4", (0.0, -2.0 / 9.0))

    def dopri():
        # rational seed w = -2z/3 from z = 1 to 3 with a small maximal step
        return _run(spec.code, spec.param_array(), 1.0 + 0j, 1.0 + 0j, 2.0, -2.0 / 3.0 + 0j,
                    -2.0 / 3.0 + 0j, 1e-12, 1e-12, 1e-4, 1e6, 0.0, 0.0)

    res = {"backend": _accel.backend()}
    for name, fn in (("sturm_bisection", sturm), ("dopri_p4", dopri)):
        t0 = time.perf_counter()
        out = fn()
        first = time.perf_counter() - t0
        best, out = _best(fn, repeat)
        res[name] = {"first_call_s": first, "best_s": best}
        if name == "sturm_bisection":
            res[name]["max_error"] = float(np.max(np.abs(out - (np.arange(10) + 0.5))))
        else:
            n = out[0]
            res[name]["steps"] = int(n)
            res[name]["w_end_error"] = float(abs(out[3][n - 1] + 2.0))
    return res


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None, help="write the raw results here")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.worker:
        print(json.dumps(worker(args.repeat)))
        return 0
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, SUPERINT_NO_NUMBA=flag)
        proc = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
                              env=env, capture_output=True, text=True, check=True)
        r = json.loads(proc.stdout.strip().splitlines()[-1])
        results[r["backend"]] = r
    print(f"{'kernel':<18}{'numba best [s]':>16}{'numpy best [s]':>16}{'speedup':>10}{'numba 1st [s]':>16}")
    for name in ("sturm_bisection", "dopri_p4"):
        a, b = results["numba"][name], results["numpy"][name]
        print(f"{name:<18}{a['best_s']:>16.4f}{b['best_s']:>16.4f}{b['best_s'] / a['best_s']:>10.1f}"
              f"{a['first_call_s']:>16.3f}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
