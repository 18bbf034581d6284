from fractions import Fraction

import pytest

from superint import printed as PR
from superint import second_order as so
from superint.exact import ExactPoly, GaussRat, sym
from superint.fourth import certify as C
from superint.fourth import determining as D
from superint.fourth import exotic as E
from superint.fourth import linear as L
from superint.jets import jet
from superint.fourth.coeffs import LeadingCoeffs4, build_fi, fi_from_operator

x, y = sym("x"), sym("y")


@pytest.fixture(scope="module")
def system():
    return D.derive_determining_4th()


@pytest.fixture(scope="module")
def A():
    return LeadingCoeffs4.symbolic()


# -- leading part -------------------------------------------------------------------------------

def test_build_fi_single_coefficients():
    assert list(build_fi(LeadingCoeffs4(A202=1))) == [ExactPoly(), ExactPoly(), y * y, -2 * x * y, x * x]
    f = list(build_fi(LeadingCoeffs4(A400=1)))
    assert f == [y ** 4, -4 * x * y ** 3, 6 * x * x * y * y, -4 * x ** 3 * y, x ** 4]
    assert all(fi.is_zero() for fi in build_fi(LeadingCoeffs4()))


def test_build_fi_matches_operator_expansion(A):
    assert all((a - b).is_zero() for a, b in zip(build_fi(A), fi_from_operator(A)))


def test_build_fi_degrees(A):
    for f in build_fi(A):
        assert f.degree("x") <= 4 and f.degree("y") <= 4


# -- determining system -------------------------------------------------------------------------

def test_order_two_remainder_vanishes(system):
    assert all(r.is_zero() for r in system.order2_remainder)


def test_rhs_matches_fi_formula(system, A):
    assert all((a - b).is_zero() for a, b in zip(system.rhs20, D.rhs20_from_fi(A)))


def test_printed_ell_equations_match(system, A):
    lx, ly = PR.ell_equations(A)
    assert (system.ell_x - system.reduce(lx)).is_zero()
    assert (system.ell_y - system.reduce(ly)).is_zero()


# -- linear compatibility -----------------------------------------------------------------------

def test_general_condition_reduces_to_second_order():
    params = so.IntegralParams2.symbolic()
    assert (L.lcc_general(2, L.A2_from_params(params)) + so.compatibility_2nd()).is_zero()


def test_general_condition_fourth_order(A):
    assert (L.lcc_general(4, L.A4_as_general(A)) + L.linear_compatibility_pde(A)).is_zero()


def test_separable_condition_needs_coefficient_fix(A):
    C4 = L.separable_condition(A)
    assert not (C4 - PR.separable_condition(A, True)).is_zero()
    assert (C4 - PR.separable_condition(A, False)).is_zero()


def test_split_odes_sign_conventions(A):
    sp = L.split_odes(A)
    (a, b), (c, d) = PR.split_odes(A)
    assert (sp.v1[0] + a).is_zero() and (sp.v1[1] - b).is_zero()
    assert (sp.v2[0] + c).is_zero() and (sp.v2[1] + d).is_zero()


# -- exotic classification ----------------------------------------------------------------------

@pytest.mark.parametrize("kw,label", [
    (dict(A202=1), "I"), (dict(A013=1), "III"), (dict(A103=1), "IIa"), (dict(A112=1), "IIb"),
])
def test_classify_exotic_labels(kw, label):
    c = L.classify_exotic(LeadingCoeffs4(**kw))
    assert c.label == label and c.exotic == "V2" and c.canonical


def test_classify_exotic_not_exotic():
    assert L.classify_exotic(LeadingCoeffs4()).reason == "trivial"
    assert L.classify_exotic(LeadingCoeffs4(A400=1)).reason == "standard"


def test_classify_exotic_mirrored_frame():
    mirrored = LeadingCoeffs4(A202=1).mirrored()
    c = L.classify_exotic(mirrored)
    assert c.label == "I" and c.exotic == "V1"


def test_normalizing_shift_reaches_canonical_form():
    A = LeadingCoeffs4(A112=2, A103=3, A202=1, A013=3)
    c = L.classify_exotic(A)
    assert c.label == "I" and not c.canonical
    assert c.shift == (GaussRat(Fraction(-3, 2)), GaussRat(1))
    moved = L.translate_A(A, *c.shift)
    c2 = L.classify_exotic(moved)
    assert c2.label == "I" and c2.canonical


def test_standard_v1_constraint_path_admits_singular_family():
    s = L.solve_standard_V1(L.classify_exotic(LeadingCoeffs4(A112=2, A103=3, A202=1, A013=3)))
    assert s.path == "constraint" and s.constraint.is_zero()
    assert s.center == GaussRat(Fraction(-3, 2))
    assert [n for n, _ in s.families][-1].startswith("singular")


def test_standard_v1_generic_path():
    s = L.solve_standard_V1(L.classify_exotic(LeadingCoeffs4(A202=1, A013=1)))
    assert s.path == "generic"
    assert all(not n.startswith("singular") for n, _ in s.families)


# -- exotic ODEs ---------------------------------------------------------------------------------

def test_third_order_ode_leading_coefficient():
    ode = E.vbii3()
    assert ode.order == 3
    assert ode.leading_coefficient() == sym("hbar") ** 2 * y * y


def test_third_order_is_first_integral_of_fourth():
    pair = E.assemble_exotic_ode()
    assert (pair.third.total_derivative().expr - 2 * y * pair.fourth.expr).is_zero()


def test_assemble_rejects_other_classes():
    with pytest.raises(ValueError):
        E.assemble_exotic_ode(L.classify_exotic(LeadingCoeffs4(A013=1)))


def test_chazy_reduction():
    r = E.chazy_reduce()
    assert r.factor == -16 * sym("hbar") ** 4
    assert r.sdib_multiplier == 2 * jet("U", 2)
    k3, k4 = E.chazy_constants()
    assert r.k3 == k3 and r.k4 == k4


def test_chazy_singular_at_hbar_zero():
    with pytest.raises(ValueError):
        E.chazy_reduce(hbar=0)


# -- certification ------------------------------------------------------------------------------

Q2 = dict(c2=2, hbar=1, a=0.5, alpha=0, beta=-2 / 9, epsilon=1)
GRID = C.GridSpec((0.5, 3.0), (0.5, 3.0), 0.01)


def test_q2_integral_certified_exactly():
    rep = C.verify_fourth_order_integral("Q2_1", Q2, GRID)
    assert rep.passed
    assert all(rep.exact_zero.values())
    assert max(rep.max_residual.values()) < 1e-6


def test_q2_perturbed_g2_fails():
    rep = C.verify_fourth_order_integral("Q2_1", Q2, GRID, perturb={"g2": x * y})
    assert not rep.passed


def test_certification_rejects_bad_parameters():
    with pytest.raises(ValueError):
        C.verify_fourth_order_integral("Q2_1", {**Q2, "c2": -1}, GRID)


def test_q3_printed_data_not_an_integral():
    res = C.residual_expressions("Q3_1").expressions
    assert res["g1_x"].is_zero()
    assert not any(res[k].is_zero() for k in ("g2_x+g1_y", "g3_x+g2_y", "g3_y", "ell_xy-ell_yx"))


@pytest.mark.slow
def test_q1_integral_exact():
    res = C.residual_expressions("Q1_1").expressions
    assert all(e.is_zero() for e in res.values())
