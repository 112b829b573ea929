import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfhe.symcalc import (
    ALPHA1,
    BETA1,
    LNTAU,
    PI,
    R2,
    Z1,
    ZB1,
    CoeffExpr,
    CoordForm,
    DenominatorError,
    GenSection,
    GradeError,
    VField,
    bidegree_part,
    courant,
    dbar,
    ext_d,
    frame_vectors,
    function_form,
    interior,
    lie_bracket,
    lie_derivative,
    pairing,
    partial,
    to_coord,
    to_frame,
    wedge,
)

from oracles import VARS, to_sympy
from strategies import coeffs, forms, sections, vfields

CASES = settings(max_examples=200, deadline=None)
SIDES = st.sampled_from(["plus", "minus"])


# -- coefficient ring against sympy ------------------------------------------------


@CASES
@given(coeffs(), coeffs())
def test_ring_operations_match_sympy(a, b):
    assert sympy.expand(sympy.together(to_sympy(a + b) - to_sympy(a) - to_sympy(b))) == 0
    assert sympy.expand(sympy.together(to_sympy(a * b) - to_sympy(a) * to_sympy(b))) == 0


@CASES
@given(coeffs(), st.integers(0, 3))
def test_derivative_matches_sympy(a, var):
    lhs = to_sympy(a.diff(var))
    rhs = sympy.diff(to_sympy(a), VARS[var])
    assert sympy.simplify(sympy.together(lhs - rhs)) == 0


@CASES
@given(coeffs(), coeffs(), coeffs())
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == CoeffExpr.coerce(0)
    assert (a * b).conj() == a.conj() * b.conj()


def test_canonical_form_cancels_r2():
    assert (R2 * Z1) / R2**2 == Z1 / R2
    assert (Z1 * ZB1 / R2) + (R2 - Z1 * ZB1) / R2 == CoeffExpr.coerce(1)
    assert (1 / (2 * PI)) * (2 * PI) == CoeffExpr.coerce(1)


def test_division_outside_ring_rejected():
    with pytest.raises(DenominatorError):
        CoeffExpr.coerce(1) / (Z1 + 1)


def test_numeric_evaluation():
    e = (Z1 * ZB1 + LNTAU) / R2
    z1, z2 = 0.3 + 0.4j, 1.0 - 0.5j
    val = e.evaluate(z1, z2, {"lntau": 0.7})
    assert np.isclose(val, (abs(z1) ** 2 + 0.7) / (abs(z1) ** 2 + abs(z2) ** 2))


# -- exterior calculus laws --------------------------------------------------------


@CASES
@given(forms())
def test_d_squared_is_zero(a):
    assert ext_d(ext_d(a)).is_zero()


@CASES
@given(forms(), forms())
def test_leibniz(a, b):
    sign = -1 if a.grade % 2 else 1
    lhs = ext_d(wedge(a, b))
    rhs = wedge(ext_d(a), b) + wedge(a, ext_d(b)).scale(sign)
    assert (lhs - rhs).is_zero()


@CASES
@given(vfields(), forms())
def test_cartan_formula(X, a):
    if a.grade == 0:
        expected = interior(X, ext_d(a))
    else:
        expected = ext_d(interior(X, a)) + interior(X, ext_d(a))
    assert (lie_derivative(X, a) - expected).is_zero()


@CASES
@given(vfields(), vfields(), forms(grade=1))
def test_lie_bracket_against_forms(X, Y, a):
    # i_[X,Y] = [L_X, i_Y] on 1-forms
    lhs = interior(lie_bracket(X, Y), a)
    rhs = lie_derivative(X, interior(Y, a)) - interior(Y, lie_derivative(X, a))
    assert (lhs - rhs).is_zero()


@CASES
@given(sections(), sections(), forms(grade=3))
def test_courant_symmetrization(s, t, gamma):
    gamma = ext_d(interior(VField({0: Z1}), gamma)) if not gamma.is_zero() else gamma
    sym = courant(s, t, gamma) + courant(t, s, gamma)
    assert sym.vec.is_zero()
    assert (sym.form - ext_d(function_form(pairing(s, t))).scale(2)).is_zero()


@CASES
@given(forms(), SIDES)
def test_frame_round_trip(a, side):
    assert to_coord(to_frame(a, side)) == a


@CASES
@given(forms(grade=1), SIDES)
def test_bidegree_parts_sum(a, side):
    total = bidegree_part(a, side, (1, 0)) + bidegree_part(a, side, (0, 1))
    assert total == a


@settings(max_examples=60, deadline=None)
@given(coeffs(2, 1), SIDES)
def test_dbar_squared_zero_on_functions(f, side):
    # both structures are integrable, so dbar^2 = 0
    assert dbar(dbar(function_form(f), side), side).is_zero()


def test_frame_duality():
    for side in ("plus", "minus"):
        vecs = frame_vectors(side)
        fr = to_frame(ALPHA1 if side == "minus" else BETA1, side)
        assert fr[(0,)] == CoeffExpr.coerce(1)
        assert all(fr[(i,)].is_zero() for i in (1, 2, 3))
        assert len(vecs) == 4


def test_partial_plus_dbar_is_d():
    f = function_form(Z1 * ZB1 / R2)
    for side in ("plus", "minus"):
        assert partial(f, side) + dbar(f, side) == ext_d(f)


def test_interior_of_function_rejected():
    with pytest.raises(GradeError):
        interior(VField({0: Z1}), function_form(Z1))


def test_wedge_over_top_degree_vanishes():
    top = CoordForm(4, {(0, 1, 2, 3): 1})
    assert wedge(top, CoordForm(1, {(0,): 1})).is_zero()


def test_gen_section_pairing_symmetric():
    s = GenSection(VField({0: Z1}), CoordForm(1, {(1,): ZB1}))
    t = GenSection(VField({1: ZB1}), CoordForm(1, {(0,): Z1}))
    assert pairing(s, t) == pairing(t, s)
