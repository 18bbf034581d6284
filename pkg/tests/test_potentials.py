import numpy as np
import pytest

from superint.potentials import (
    GridFunc, TwoSided, eval_exotic_potential, trajectory_source, vp4_potential,
)
from superint.transcendents import rational_seed

SEED = {"alpha": 0, "beta": -2 / 9, "epsilon": 1}
Q2 = dict(c2=2, hbar=1, a=0.5, alpha=0, beta=-2 / 9, epsilon=1)


def test_vp4_on_rational_seed():
    # w = -2z/3 gives V = -1/3 + 2z^2/9 - 2z^2/3 + 1/3 = -4z^2/9
    g = eval_exotic_potential("VP4", SEED, {"x": [-2, 2, 0.5]})
    assert g.y is None and g.masked_cells == 0
    np.testing.assert_allclose(g.V, -4 * g.x ** 2 / 9, atol=1e-14)


def test_vp4_scaling_with_hbar_omega():
    w, wp, z = 0.3, -0.2, 0.7
    assert vp4_potential(w, wp, z, 1.0, -1, hbar=2.0, omega=3.0) == pytest.approx(
        6.0 * vp4_potential(w, wp, z, 1.0, -1))


def test_vp4_seed_matches_integrated_source():
    src = trajectory_source("P4", (0, -2 / 9), (0.5, -1 / 3, -2 / 3), -3.0, 3.0)
    a = eval_exotic_potential("VP4", SEED, {"x": [-3, 3, 0.05]})
    b = eval_exotic_potential("VP4", SEED, {"x": [-3, 3, 0.05]}, source=src)
    assert np.max(np.abs(a.V - b.V)) < 1e-8


def test_q2_potential_seed_against_trajectory():
    mesh = {"x": [-1, 1, 0.25], "y": [0.5, 2, 0.25]}
    a = eval_exotic_potential("Q2_1", Q2, mesh)
    # transcendent argument is -kappa y with kappa = (8 c2 / hbar^2)^(1/4) = 2
    src = trajectory_source("P4", (0, -2 / 9), (-1.0, 2 / 3, -2 / 3), -4.0, -1.0)
    b = eval_exotic_potential("Q2_1", Q2, mesh, source=src)
    assert a.V.shape == (len(a.y), len(a.x))
    assert np.array_equal(a.mask, b.mask)
    assert np.nanmax(np.abs(a.V - b.V)) < 1e-7
    assert np.nanmax(np.abs(a.W - b.W)) < 1e-7


def test_q2_auxiliary_function_on_seed():
    g = eval_exotic_potential("Q2_1", Q2, {"x": [0.5, 1, 0.5], "y": [0.5, 2, 0.5]})
    np.testing.assert_allclose(g.W, 8 * g.y ** 3 / 27, rtol=1e-12)


def test_x_zero_column_is_masked():
    g = eval_exotic_potential("Q2_1", Q2, {"x": [-1, 1, 0.5], "y": [0.5, 1, 0.5]})
    assert g.mask[:, 2].all() and g.masked_cells == len(g.y)
    assert np.isnan(g.V[:, 2]).all()


def test_csv_layout():
    g = eval_exotic_potential("Q2_1", Q2, {"x": [-1, 1, 0.5], "y": [0.5, 1, 0.5]})
    lines = g.to_csv().splitlines()
    assert lines[0] == "x,y,V,W" and len(lines) == 1 + g.V.size
    assert lines[3].split(",")[2] == ""
    assert eval_exotic_potential("VP4", SEED, {"x": [0, 1, 0.5]}).to_csv().splitlines()[0] == "x,V"


def test_pole_inside_mesh_is_masked():
    src = trajectory_source("P4", (1.0, 0.0), (0.0, 1.0, 3.0), -1.0, 1.5)
    g = eval_exotic_potential("VP4", {"alpha": 1, "beta": 0, "epsilon": 1}, {"x": [-1, 1.5, 0.01]}, source=src)
    assert len(src.right.poles) == 2
    assert g.masked_cells > 0 and g.notes
    assert np.isfinite(g.V[~g.mask]).all()


@pytest.mark.parametrize("case,params,mesh", [
    ("nope", {}, {"x": [0, 1, 0.1]}),
    ("VP4", {**SEED, "epsilon": 2}, {"x": [0, 1, 0.1]}),
    ("VP4", SEED, {"x": [1, 0, 0.1]}),
    ("Q1_1", {"alpha": 1, "beta": 0, "gamma": 0, "delta": 0}, {"x": [0, 1, 0.5], "y": [1, 2, 0.5]}),
    ("Q1_1", {"alpha": -1, "beta": 0, "gamma": 0, "delta": 0}, {"x": [0, 1, 0.5], "y": [1, 2, 0.5]}),
    ("Q2_1", {**Q2, "c2": -1}, {"x": [0, 1, 0.5], "y": [1, 2, 0.5]}),
    ("VP4", {"alpha": 1, "beta": 1, "epsilon": 1}, {"x": [0, 1, 0.5]}),
])
def test_invalid_inputs(case, params, mesh):
    with pytest.raises(ValueError):
        eval_exotic_potential(case, params, mesh)


def test_two_sided_glue():
    seed = rational_seed("P4", (0, -2 / 9))
    ts = TwoSided(None, seed, 0.0)
    out = ts(np.array([-1.0, 1.0]))
    assert np.isnan(out[0]) and out[1] == pytest.approx(-2 / 3)


def test_gridfunc_validation():
    with pytest.raises(ValueError):
        GridFunc(0.0, 0.0, np.zeros(3))
    with pytest.raises(ValueError):
        GridFunc(0.0, 0.1, np.zeros(3), bc="periodic")
    g = GridFunc.from_function(np.sin, 0.0, 1.0, 0.25)
    assert len(g.values) == 5 and not g.mask.any()
