import time

import numpy as np
import pytest

from hopfhe.cli import EXIT_OK, EXIT_VERIFY, cmd_verify, corrupted_table
from hopfhe.hopf import HopfGeometry, STRUCTURE_TABLE_MINUS, standard_hopf, verify_all, verify_prop_4_4
from hopfhe.symcalc import ALPHA1, ALPHA2, BETA1, BETA2

from oracles import VARS, d_one_form, one_form_sympy, pfaffian_top, two_form_matrix_equal, wedge_one_forms


@pytest.fixture(scope="module")
def report():
    t0 = time.perf_counter()
    rep = verify_all(standard_hopf())
    return rep, time.perf_counter() - t0


def test_identity_suite_passes_quickly(report):
    rep, elapsed = report
    assert rep.passed, [c.name for c in rep.failures()]
    assert elapsed < 30.0
    assert all(c.witness == "0" for c in rep.checks)


def test_identity_suite_covers_groups(report):
    rep, _ = report
    names = [c.name for c in rep.checks]
    for key in ("δ_ij", "ω₊² − ω₋²", "dγ", "ℓ₋ = span", "ℓ₊ = span", "J² + 1", "J'² + 1", "JJ' − J'J"):
        assert any(key in n for n in names), key
    brackets = [n for n in names if "*" in n and "𝔛" in n]
    assert len(brackets) == 16


def test_courant_bracket_group_alone():
    assert verify_prop_4_4(standard_hopf()).passed


def test_corrupted_table_is_reported():
    geom = standard_hopf()
    rep = verify_all(geom, corrupted_table(geom))
    assert not rep.passed
    (bad,) = rep.failures()
    assert bad.name == "∂̄₋α₁"
    assert bad.witness != "0"


def test_cmd_verify_exit_codes(tmp_path):
    assert cmd_verify(out=str(tmp_path / "ok.json")) == EXIT_OK
    assert cmd_verify(table=corrupted_table(), out=str(tmp_path / "bad.json")) == EXIT_VERIFY


def test_tau_validation():
    for bad in (1.0, 0.5, float("nan"), -3.0):
        with pytest.raises(ValueError):
            HopfGeometry(tau=bad)


# -- independent sympy oracle for the coframe structure equations ---------------------


def test_structure_equations_sympy_oracle():
    a1, a2 = one_form_sympy(ALPHA1), one_form_sympy(ALPHA2)
    ab1, ab2 = one_form_sympy(ALPHA1.conj()), one_form_sympy(ALPHA2.conj())
    b1, b2 = one_form_sympy(BETA1), one_form_sympy(BETA2)
    bb1, bb2 = one_form_sympy(BETA1.conj()), one_form_sympy(BETA2.conj())
    # d = partial + dbar, summed from the expected minus table
    assert two_form_matrix_equal(d_one_form(a1), wedge_one_forms(a2, ab2))
    assert two_form_matrix_equal(d_one_form(a2), -wedge_one_forms(a1, a2) + wedge_one_forms(ab1, a2))
    assert two_form_matrix_equal(d_one_form(b1), -wedge_one_forms(b2, bb2))
    assert two_form_matrix_equal(d_one_form(b2), wedge_one_forms(b1, b2) - wedge_one_forms(bb1, b2))


def test_structure_table_consistent_with_sympy():
    t = STRUCTURE_TABLE_MINUS(standard_hopf())
    pt = (0.6 - 0.3j, 0.2 + 0.9j)
    subs = dict(zip(VARS, (pt[0], np.conj(pt[0]), pt[1], np.conj(pt[1]))))
    D = d_one_form(one_form_sympy(ALPHA1))
    lhs = t["∂₋α₁"] + t["∂̄₋α₁"]
    for (i, j), v in lhs.items():
        assert np.isclose(complex(D[i, j].subs(subs)), complex(v.evaluate(*pt)))


def test_volume_forms_agree_numerically():
    """``w+^2 = w-^2`` checked through Pfaffians of the numeric component matrices."""
    geom = standard_hopf()
    rng = np.random.default_rng(4)
    for _ in range(10):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        tops = []
        for side in ("plus", "minus"):
            w = geom.omega(side)
            a = np.zeros((4, 4), complex)
            for (i, j), v in w.items():
                a[i, j] = complex(v.evaluate(*z, {"pi": np.pi}))
            tops.append(pfaffian_top(a))
        assert np.isclose(tops[0], tops[1])
        assert abs(tops[0]) > 0
