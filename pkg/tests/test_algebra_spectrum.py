from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superint.algebra_spectrum import (
    CubicAlgebra, casimir_polynomial, casimir_value, compare_series, energy_series, jacobi_check,
    series_definitions, union_levels, vp4_numeric_spectrum,
)
from superint.exact import ExactPoly, sym

H = sym("H")
SEED = (0, F(-2, 9))


def test_defining_commutators():
    alg = CubicAlgebra.printed()
    A, B, C = (alg.gen(g) for g in "ABC")
    assert alg.bracket(A, B) == C
    assert alg.bracket(A, C) == {("B",): alg.ac_coefficient}
    bc = alg.bracket(B, C)
    assert bc[("A", "A", "A")] == -2 * sym("hbar") ** 2


def test_jacobi_symbolic_parameters():
    rep = jacobi_check(CubicAlgebra.printed())
    assert rep.passed and not rep.jacobiator


def test_jacobi_detects_broken_relation():
    alg = CubicAlgebra.printed(*SEED, 1, 1, 1).with_bc_extra({("B",): ExactPoly.const(1)})
    rep = jacobi_check(alg)
    assert not rep.passed
    assert rep.to_json()["jacobiator"] == {"C": "1"}


def test_jacobi_holds_for_any_ac_coefficient():
    assert jacobi_check(CubicAlgebra.printed().with_ac(17)).passed


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.sampled_from([1, -1]))
def test_jacobi_numeric_parameters(a, b, e):
    assert jacobi_check(CubicAlgebra.printed(a, b, e, 2, 1)).passed


def test_casimir_degree_and_epsilon_dependence():
    K = casimir_polynomial()
    assert K.degree("H") == 4
    assert K.coefficient("H", 4) == -16 * sym("hbar") ** 2
    for k in (4, 2):
        assert "epsilon" not in K.coefficient("H", k).symbols()
    assert "epsilon" in K.coefficient("H", 0).symbols()


def test_casimir_value_exact_and_float():
    # -16*16 + (64/3) + 0 + 80/9 at H = 2 for the seed parameters
    assert casimir_value(2, *SEED, 1) == ExactPoly.const(F(-2032, 9))
    assert casimir_value(2.0, 0, -2 / 9, 1) == pytest.approx(-2032 / 9, rel=1e-14)


def test_printed_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        CubicAlgebra.printed(0, 0, 2)


def test_series_offsets_for_seed():
    s = energy_series(*SEED, 1, 1, 1)
    np.testing.assert_allclose(s["E1"].eigenvalues, np.arange(5) + 4 / 3)
    np.testing.assert_allclose(s["E2"].eigenvalues, np.arange(5) + 1)
    np.testing.assert_allclose(s["E3"].eigenvalues, np.arange(5) + 2 / 3)
    assert s["notes"] == []


def test_series_exact_offsets():
    defs, _ = series_definitions(*SEED, -1)
    assert [d.offset for d in defs] == [F(2, 3), F(4, 3), F(1)]


def test_nonnegative_beta_omits_two_series():
    s = energy_series(1, F(1, 2), -1)
    assert set(s) == {"E1", "notes"}
    assert s["notes"] == ["beta >= 0: series E2 and E3 omitted"]


def test_series_scale_with_hbar_omega():
    a = energy_series(*SEED, 1, 2.0, 0.5)
    b = energy_series(*SEED, 1, 1.0, 1.0)
    np.testing.assert_allclose(a["E1"].eigenvalues, b["E1"].eigenvalues)


@pytest.mark.parametrize("epsilon", [1, -1])
def test_series_match_numeric_spectrum(epsilon):
    s = energy_series(*SEED, epsilon, 1, 1, p_max=4)
    union = union_levels(s)
    assert len(np.unique(np.round(union, 12))) == 15
    num = vp4_numeric_spectrum(0.0, -2 / 9, epsilon, n_levels=15, h=2e-3)
    assert len(num["levels"]) == 15
    np.testing.assert_allclose(np.unique(np.round(union, 12)), num["levels"], atol=1e-6)
    rows = compare_series(s, num["levels"])
    assert len(rows) == 15 and max(r["delta"] for r in rows) < 1e-6


def test_numeric_spectrum_needs_source():
    with pytest.raises(ValueError):
        vp4_numeric_spectrum(1.0, 1.0, 1)
