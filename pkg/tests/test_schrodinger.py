import json
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from superint.potentials import GridFunc
from superint.schrodinger import (
    _matrix, confining_domain, convergence_ratios, distinct_levels, eigen_1d, fd_eigenvalues, node_count,
    overlap_matrix, spectrum_2d_separable,
)


def osc(x):
    return x * x / 2


def test_harmonic_oscillator_levels():
    rec = eigen_1d(osc, 8, domain=(-10, 10), h=0.01)
    np.testing.assert_allclose(rec.eigenvalues, np.arange(8) + 0.5, atol=1e-8)
    assert np.all(rec.errors < 1e-4)


def test_three_point_matrix_against_lapack():
    g = GridFunc.from_function(osc, -8, 8, 0.02)
    d, e = _matrix(g, 1.0)
    ref = eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, 9))
    np.testing.assert_allclose(fd_eigenvalues(g, 10), ref, rtol=0, atol=1e-11)


def test_second_order_convergence():
    r = convergence_ratios(osc, 4, (-8, 8), 0.04)
    np.testing.assert_allclose(r, 4.0, rtol=1e-2)


def test_hbar_scaling():
    rec = eigen_1d(osc, 4, hbar=0.5, domain=(-8, 8), h=0.005)
    np.testing.assert_allclose(rec.eigenvalues, 0.5 * (np.arange(4) + 0.5), atol=1e-8)


def test_poschl_teller_bound_state():
    # -psi''/2 - sech^2 x psi has the single bound state E = -1/2
    rec = eigen_1d(lambda x: -1 / np.cosh(x) ** 2, 1, domain=(-25, 25), h=0.01)
    assert rec.eigenvalues[0] == pytest.approx(-0.5, abs=1e-7)


def test_half_line_gives_odd_states():
    rec = eigen_1d(osc, 4, domain=(0, 10), h=0.005, bc="half-line-dirichlet")
    np.testing.assert_allclose(rec.eigenvalues, 2 * np.arange(4) + 1.5, atol=1e-7)


def test_eigenvectors_orthonormal_with_node_counts():
    rec = eigen_1d(osc, 6, domain=(-10, 10), h=0.01)
    np.testing.assert_allclose(overlap_matrix(rec), np.eye(6), atol=1e-8)
    assert [node_count(v) for v in rec.vectors] == list(range(6))
    # ground state is the Gaussian pi^(-1/4) exp(-x^2/2)
    ref = np.pi ** -0.25 * np.exp(-rec.x ** 2 / 2)
    assert np.max(np.abs(rec.vectors[0] - ref)) < 1e-4


def test_grid_input_richardson():
    g = GridFunc.from_function(osc, -10, 10, 0.005)
    rec = eigen_1d(g, 5)
    np.testing.assert_allclose(rec.eigenvalues, np.arange(5) + 0.5, atol=1e-8)
    assert rec.to_csv().splitlines()[0] == "n,E,error"


def test_two_dimensional_separable_degeneracies():
    rec = spectrum_2d_separable(osc, osc, 10, domain1=(-9, 9), domain2=(-9, 9), h=0.01)
    np.testing.assert_allclose(rec.eigenvalues, [1, 2, 2, 3, 3, 3, 4, 4, 4, 4], atol=1e-7)
    assert rec.labels[0] == (0, 0)
    np.testing.assert_allclose(distinct_levels(rec.eigenvalues), [1, 2, 3, 4], atol=1e-7)


def test_confining_domain_is_sufficient():
    lo, hi = confining_domain(osc, 5.0)
    assert lo < -4 and hi > 4
    rec = eigen_1d(osc, 5, domain=(lo, hi), h=0.01)
    np.testing.assert_allclose(rec.eigenvalues, np.arange(5) + 0.5, atol=1e-8)


def test_too_many_levels_warns():
    with pytest.warns(UserWarning):
        rec = eigen_1d(osc, 500, domain=(-5, 5), h=0.1)
    assert len(rec.eigenvalues) == 99 // 20


@pytest.mark.parametrize("kw", [dict(count=0), dict(count=1, hbar=0.0)])
def test_bad_arguments(kw):
    with pytest.raises(ValueError):
        eigen_1d(osc, domain=(-5, 5), h=0.1, **kw)


def test_masked_potential_rejected():
    vals = np.zeros(101)
    vals[50] = np.nan
    with pytest.raises(ValueError):
        eigen_1d(GridFunc(0.0, 0.01, vals), 1)
    with pytest.raises(ValueError):
        eigen_1d(osc, 1)


_SNIPPET = """
import json
import numpy as np
from superint import _accel
from superint.schrodinger import eigen_1d
rec = eigen_1d(lambda x: x * x / 2, 6, domain=(-9, 9), h=0.01)
print(json.dumps([_accel.backend(), rec.eigenvalues.tolist(), rec.vectors[3].tolist()]))
"""


def test_numpy_fallback_matches_compiled():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, SUPERINT_NO_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", _SNIPPET], env=env, capture_output=True, text=True,
                              check=True)
        backend, E, v = json.loads(proc.stdout.strip().splitlines()[-1])
        out[backend] = (np.array(E), np.array(v))
    assert set(out) == {"numba", "numpy"}
    np.testing.assert_allclose(out["numba"][0], out["numpy"][0], rtol=0, atol=1e-12)
    np.testing.assert_allclose(out["numba"][1], out["numpy"][1], rtol=0, atol=1e-9)
