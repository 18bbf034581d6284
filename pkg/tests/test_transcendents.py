import json
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from superint.transcendents import (
    FixedSingularity, PainleveSpec, integrate_painleve, rational_seed, residual_certificate,
)


def test_p4_rational_seed_reproduced():
    spec = PainleveSpec("P4", (0, -2 / 9))
    tr = integrate_painleve(spec, (1.0, -2 / 3, -2 / 3), (1.0, 3.0))
    seed = rational_seed("P4", (0, -2 / 9))
    assert tr.complete and not tr.poles
    assert np.max(np.abs(tr.w - seed(tr.z))) < 1e-8
    assert seed.text() == "w = -2/3*z"


def test_second_seed():
    tr = integrate_painleve(PainleveSpec("P4", (0, -2)), (0.5, -1.0, -2.0), (0.5, 2.5))
    assert np.max(np.abs(tr.w + 2 * tr.z)) < 1e-10


def test_seed_catalogue():
    assert rational_seed("P4", (1, 1)) is None
    with pytest.raises(ValueError):
        rational_seed("P2", (0,))


@pytest.mark.parametrize("kind,params,ic,z1", [
    ("P1", (), (0.0, 0.0, 0.0), 1.5),
    ("P2", (0.0,), (0.0, 0.1, 0.0), 2.0),
    ("P4", (1.0, -0.5), (1.0, 0.5, 0.0), 1.8),
])
def test_against_scipy_on_pole_free_range(kind, params, ic, z1):
    spec = PainleveSpec(kind, params)
    tr = integrate_painleve(spec, ic, (ic[0], z1))
    assert tr.complete and not tr.poles

    def f(z, u):
        return [u[1], spec.rhs(z, u[0], u[1])]

    ref = solve_ivp(f, (ic[0], z1), [ic[1], ic[2]], method="DOP853", rtol=1e-13, atol=1e-13,
                    dense_output=True)
    assert np.max(np.abs(tr.w - ref.sol(tr.z)[0])) < 1e-8


def test_pole_is_passed_and_exact_solution_recovered():
    # w = -1/z solves P2 with alpha = 1 and has a simple pole at z = 0
    tr = integrate_painleve(PainleveSpec("P2", (1.0,)), (-2.0, 0.5, 0.25), (-2.0, 2.0))
    assert tr.complete and len(tr.poles) == 1
    assert abs(tr.poles[0].location) < 1e-6
    after = tr.z > 0.5
    assert np.max(np.abs(tr.w[after] + 1 / tr.z[after])) < 1e-7
    assert tr.residual_bound < 1e-6


def test_dense_output_and_nan_across_detour():
    tr = integrate_painleve(PainleveSpec("P2", (1.0,)), (-2.0, 0.5, 0.25), (-2.0, 2.0))
    zq = np.linspace(0.6, 1.9, 7)
    assert np.max(np.abs(tr(zq) + 1 / zq)) < 1e-7
    assert np.max(np.abs(tr(zq, 1) - 1 / zq ** 2)) < 1e-7
    assert np.isnan(tr(np.array([0.0])))[0]
    assert np.isnan(tr(np.array([5.0])))[0]


def test_p1_pole_vaulting():
    tr = integrate_painleve(PainleveSpec("P1", ()), (0.0, 0.0, 0.0), (0.0, 4.0))
    assert tr.complete and len(tr.poles) == 1
    assert residual_certificate(tr) < 1e-6


def test_backward_integration():
    tr = integrate_painleve(PainleveSpec("P4", (0, -2 / 9)), (3.0, -2.0, -2 / 3), (3.0, 1.0))
    assert np.max(np.abs(tr.w + 2 * tr.z / 3)) < 1e-8


def test_fixed_singularities_rejected():
    with pytest.raises(FixedSingularity):
        integrate_painleve(PainleveSpec("P3", (1, 1, 1, -1)), (0.0, 1.0, 0.0), (0.0, 1.0))
    with pytest.raises(FixedSingularity):
        integrate_painleve(PainleveSpec("P3", (1, 1, 1, -1)), (-1.0, 1.0, 0.0), (-1.0, 1.0))
    with pytest.raises(FixedSingularity):
        integrate_painleve(PainleveSpec("P5", (1, 1, 1, 1)), (1.0, 1.0, 0.0), (1.0, 2.0))


def test_bad_specs():
    with pytest.raises(ValueError):
        PainleveSpec("P7")
    with pytest.raises(ValueError):
        PainleveSpec("P4", (1.0,))
    with pytest.raises(ValueError):
        integrate_painleve(PainleveSpec("P1"), (0.0, 0.0, 0.0), (1.0, 2.0))


def test_metadata_and_csv():
    tr = integrate_painleve(PainleveSpec("P4", (0, -2 / 9)), (1.0, -2 / 3, -2 / 3), (1.0, 1.5))
    md = tr.metadata()
    assert md["kind"] == "P4" and md["params"] == {"alpha": 0.0, "beta": -2 / 9}
    assert tr.to_csv().splitlines()[0] == "z,w,wp"
    assert len(tr.to_csv().splitlines()) == len(tr.z) + 1


_SNIPPET = """
import json
from superint import _accel
from superint.transcendents import PainleveSpec, integrate_painleve
tr = integrate_painleve(PainleveSpec("P2", (1.0,)), (-2.0, 0.5, 0.25), (-2.0, 2.0))
print(json.dumps([_accel.backend(), tr.w.tolist()]))
"""


def test_numpy_fallback_matches_compiled():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, SUPERINT_NO_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", _SNIPPET], env=env, capture_output=True, text=True,
                              check=True)
        backend, w = json.loads(proc.stdout.strip().splitlines()[-1])
        out[backend] = np.array(w)
    assert set(out) == {"numba", "numpy"}
    assert out["numba"].shape == out["numpy"].shape
    assert np.max(np.abs(out["numba"] - out["numpy"])) < 1e-12
