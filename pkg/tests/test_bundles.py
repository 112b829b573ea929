import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfhe.bundles import (
    Eta,
    HermitianBackground,
    UnsupportedInput,
    chern_curvature,
    commutation_defect,
    constant_subline_scan,
    constant_subline_verdict,
    defect_is_zero,
    degree_json,
    degrees,
    direct_sum,
    dual,
    example_4_8,
    example_4_11,
    example_4_12,
    example_4_13,
    flatness_defect,
    line_bundle,
    quadrature_degree,
    scan_to_csv,
    stability_scan,
    tensor,
)
from hopfhe.symcalc import ALPHA1, ALPHA2, BETA1, BETA2, LNTAU, CoeffExpr, GaussQ, const, sym, wedge

from oracles import midpoint_degree_line

CASES = settings(max_examples=200, deadline=None)
exps = st.fractions(min_value=-5, max_value=5, max_denominator=6)
args = st.fractions(min_value=-2, max_value=2, max_denominator=4)
alphas = st.fractions(min_value=0, max_value=1, max_denominator=50).filter(lambda a: 0 < a < 1)


def _q(x: CoeffExpr) -> Fraction:
    assert x.is_number()
    g = x.as_number()
    assert g.im == 0
    return g.re


# -- degrees of line bundles -----------------------------------------------------------


@pytest.mark.parametrize("m", range(-3, 4))
def test_degree_of_tau_powers(m):
    d = degrees(line_bundle(Eta.tau_power(m)))
    assert _q(d.deg_plus) == m
    assert _q(d.deg_minus) == -m


@pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 2, -2.0])
def test_unit_modulus_has_degree_zero(theta):
    d = degrees(line_bundle(Eta.polar(1.0, theta)))
    assert d.deg_plus.is_zero() and d.deg_minus.is_zero()


def test_quadrature_cross_check():
    L = line_bundle(2.0, tau=2.0)
    val = quadrature_degree(L, "plus", 2.0)
    assert abs(val - 1.0) <= 1e-6
    assert abs(val - midpoint_degree_line(math.log(2.0), 2.0)) <= 1e-6
    assert abs(quadrature_degree(L, "minus", 2.0) + 1.0) <= 1e-6


@pytest.mark.parametrize("eta,tau", [(3.0, 2.0), (0.5 + 0.5j, 3.0), (5.0, 1.5)])
def test_degree_matches_closed_form(eta, tau):
    L = line_bundle(eta, tau=tau)
    vals = {"pi": math.pi, "lntau": math.log(tau), **L.value_map()}
    dp, dm = degrees(L).numeric(vals)
    expected = midpoint_degree_line(math.log(abs(eta)), tau)
    assert np.isclose(dp.real, expected) and np.isclose(dm.real, -expected)
    assert abs(dp.imag) < 1e-12


def test_line_bundle_curvature_closed_forms():
    L = line_bundle(Eta.polar(3.0, 0.5, "e"))
    c = sym("ln|e|") / LNTAU
    Fp = chern_curvature(L, None, "plus")[0][0]
    Fm = chern_curvature(L, None, "minus")[0][0]
    assert Fp == wedge(BETA2, BETA2.conj()).scale(c)
    assert Fm == wedge(ALPHA2, ALPHA2.conj()).scale(-c)


@CASES
@given(exps, args, exps, args)
def test_tensor_additivity(m1, a1, m2, a2):
    A, B = line_bundle(Eta.tau_power(m1, a1)), line_bundle(Eta.tau_power(m2, a2))
    dA, dB, dAB = degrees(A), degrees(B), degrees(tensor(A, B))
    assert dAB.deg_plus == dA.deg_plus + dB.deg_plus
    assert dAB.deg_minus == dA.deg_minus + dB.deg_minus
    assert _q(dAB.deg_plus) == m1 + m2


@CASES
@given(exps, args)
def test_duality(m, a):
    L = line_bundle(Eta.tau_power(m, a))
    d, dd = degrees(L), degrees(dual(L))
    assert dd.deg_plus == -d.deg_plus and dd.deg_minus == -d.deg_minus


@CASES
@given(exps, exps, alphas)
def test_direct_sum_slope(m1, m2, a):
    V = direct_sum(line_bundle(Eta.tau_power(m1)), line_bundle(Eta.tau_power(m2)))
    d = degrees(V)
    assert _q(d.deg_plus) == m1 + m2
    assert _q(d.alpha_slope(a)) == (a * (m1 + m2) + (1 - a) * (-m1 - m2)) / 2


_G = lambda re, im=0: CoeffExpr.coerce(GaussQ(Fraction(re), Fraction(im)))  # noqa: E731


@pytest.mark.parametrize("h0", [
    ((_G(2), _G(1)), (_G(1), _G(3))),
    ((_G(5), _G("1/2", "1/3")), (_G("1/2", "-1/3"), _G(1))),
])
def test_degree_independent_of_constant_metric(h0):
    h = HermitianBackground(h0)
    for s in (example_4_13(1, 2), example_4_8(1, 2, "1/2", -1)):
        assert degrees(s, h).deg_plus == degrees(s).deg_plus
        assert degrees(s, h).deg_minus == degrees(s).deg_minus


def test_non_hermitian_metric_rejected():
    with pytest.raises(ValueError):
        HermitianBackground(((const(1), const(2)), (const(0), const(1))))


@CASES
@given(exps, exps, alphas, alphas)
def test_alpha_slope_is_affine(mp, mm, a, b):
    d = degrees(direct_sum(line_bundle(Eta.tau_power(mp)), line_bundle(Eta.tau_power(mm))))
    t = Fraction(1, 3)
    mid = t * a + (1 - t) * b
    assert d.alpha_degree(mid) == t * d.alpha_degree(a) + (1 - t) * d.alpha_degree(b)


@CASES
@given(st.integers(1, 6), st.integers(2, 6))
def test_single_verdict_flip(mp, mm):
    desc = example_4_11(mp, mm)
    grid = [Fraction(k, 97) for k in range(1, 97)]
    verdicts = [r["verdict"] for r in stability_scan(desc, grid)]
    flips = sum(1 for u, v in zip(verdicts, verdicts[1:]) if u != v)
    assert flips == 1
    assert verdicts[0] == "stable" and verdicts[-1] == "unstable"


# -- flatness and commutation ---------------------------------------------------------


@pytest.mark.parametrize("s", [example_4_13(1, 2), example_4_8(1, 2, 3, 4), line_bundle(3.0)])
def test_structures_are_integrable(s):
    for side in ("plus", "minus"):
        assert all(x.is_zero() for row in flatness_defect(s, side) for x in row)


def test_example_4_13_commutes():
    s = example_4_13(1, 2)
    assert defect_is_zero(commutation_defect(s))
    d = degrees(s)
    assert _q(d.deg_plus) == -1 and _q(d.deg_minus) == 2


@pytest.mark.parametrize("mp,mm", [(1, 2), (2, 3), (3, 5)])
def test_example_4_13_family(mp, mm):
    s = example_4_13(mp, mm)
    assert defect_is_zero(commutation_defect(s))
    d = degrees(s)
    assert _q(d.deg_plus) == -mp and _q(d.deg_minus) == mm


def test_example_4_8_defect_nonzero():
    s = example_4_8(1, 2, "1/2", -1)
    assert not defect_is_zero(commutation_defect(s))


def test_example_4_8_sublines():
    scan = constant_subline_scan(example_4_8(1, 2, 3, -1))
    plus = {tuple(str(x) for x in p.w) for p in scan["plus"]}
    minus = {tuple(str(x) for x in m.w) for m in scan["minus"]}
    assert plus == {("1", "0"), ("0", "1")}
    assert minus == {("1", "1"), ("1", "-1")}
    assert scan["common"] == []


def test_example_4_8_rejects_collisions():
    with pytest.raises(ValueError):
        example_4_8(1, 1, 2, 3)
    with pytest.raises(ValueError):
        example_4_8(1, 2, 3, 3)


def test_example_4_13_constant_sublines():
    s = example_4_13(1, 2)
    res = constant_subline_verdict(s, Fraction(2, 5))
    lines = {tuple(r["line"]): r for r in res["sublines"]}
    assert set(lines) == {("1", "0"), ("1", "1")}
    assert lines[("1", "1")]["deg_plus"] == "-1" and lines[("1", "1")]["deg_minus"] == "2"


# -- threshold families ---------------------------------------------------------------


def _flip_bracket(desc, step: Fraction):
    grid = [k * step for k in range(1, int(1 / step))]
    rows = stability_scan(desc, grid)
    for u, v in zip(rows, rows[1:]):
        if u["verdict"] != v["verdict"]:
            return u["alpha"], v["alpha"]
    raise AssertionError("no flip")


@pytest.mark.parametrize("desc", [example_4_11(1, 2), example_4_12(-1, 2)], ids=["4_11", "4_12"])
def test_threshold_two_thirds(desc):
    assert desc.alpha0 == Fraction(2, 3)
    lo, hi = _flip_bracket(desc, Fraction(1, 10000))
    assert lo <= Fraction(2, 3) <= hi
    assert hi - lo == Fraction(1, 10000)


@CASES
@given(st.integers(1, 8), st.integers(2, 8))
def test_threshold_4_11_formula(mp, mm):
    desc = example_4_11(mp, mm)
    a0 = desc.alpha0
    assert desc.mu_V(a0) == desc.mu_L(a0)
    assert desc.verdict(a0 * Fraction(99, 100)) == "stable"


@CASES
@given(st.integers(-8, -1), st.integers(1, 8))
def test_threshold_4_12_formula(d, mm):
    desc = example_4_12(d, mm)
    assert desc.mu_V(desc.alpha0) == desc.mu_L(desc.alpha0)
    # brute-force oracle: maximize alpha-degree over the certified sub-line bounds
    for a in (desc.alpha0 * Fraction(1, 2), (1 + desc.alpha0) / 2):
        worst = max(a * np + (1 - a) * r for np in range(d - 3, d + 1) for r in range(mm - 3, mm + 1))
        assert desc.verdict(a) == ("stable" if worst < 0 else "unstable")


@pytest.mark.parametrize("bad", [(0, 2), (1, 1), (1.5, 2), (True, 2)])
def test_example_4_11_rejects(bad):
    with pytest.raises(ValueError):
        example_4_11(*bad)


def test_example_4_12_rejects():
    with pytest.raises(ValueError):
        example_4_12(0, 2)
    with pytest.raises(ValueError):
        example_4_12(-1, 0)


def test_scan_csv_shape():
    desc = example_4_11(1, 2)
    text = scan_to_csv(stability_scan(desc, [Fraction(1, 2), Fraction(7, 10)]), desc.alpha0)
    lines = text.strip().splitlines()
    assert lines[0].startswith("# alpha0=2/3")
    assert lines[1] == "alpha,mu_alpha_V,mu_alpha_L,verdict"
    assert lines[2].endswith("stable") and lines[3].endswith("unstable")


def test_rank_three_unsupported():
    from hopfhe.bundles import BundleStructure

    z = const(0)
    with pytest.raises(UnsupportedInput):
        BundleStructure(3, ((z,) * 3,) * 3, ((z,) * 3,) * 3)


def test_line_bundle_input_validation():
    with pytest.raises(ValueError):
        line_bundle(0)
    with pytest.raises(ValueError):
        line_bundle(2.0, tau=1.0)


def test_degree_json_round_trip():
    import json

    d = json.loads(degree_json(line_bundle(Eta.tau_power(2)), Fraction(1, 4), 2.0))
    assert d["deg_plus_value"] == pytest.approx(2.0)
    assert d["deg_alpha_value"] == pytest.approx(0.25 * 2 - 0.75 * 2)


# -- metric independence through the reduced operator ---------------------------------

_REDUCED = {}


def _reduced(side):
    if side not in _REDUCED:
        from hopfhe.hesolver import reduce_operators
        from hopfhe.hopf import standard_hopf

        op = reduce_operators(standard_hopf(), line_bundle(Eta.tau_power(1)), Fraction(1, 2))
        _REDUCED["plus"], _REDUCED["minus"] = op.plus, op.minus
    return _REDUCED[side]


@CASES
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=3),
       st.sampled_from(["plus", "minus"]))
def test_degree_independent_of_conformal_factor(coeffs, side):
    from oracles import conformal_degree_shift

    sc = _reduced(side)
    assert conformal_degree_shift(sc.c_d, sc.c_0, coeffs) == 0
