"""Hypothesis strategies for random exact coefficients, forms and vector fields."""

from __future__ import annotations

from hypothesis import strategies as st

from hopfhe.symcalc import R2, Z1, Z2, ZB1, ZB2, CoeffExpr, CoordForm, GenSection, GaussQ, VField
from hopfhe.symcalc.forms import all_indices

_VARS = (Z1, Z2, ZB1, ZB2)

gauss = st.builds(GaussQ, st.integers(-3, 3), st.integers(-3, 3))


@st.composite
def monomials(draw) -> CoeffExpr:
    exps = draw(st.lists(st.integers(0, 2), min_size=4, max_size=4))
    m = CoeffExpr.coerce(1)
    for v, e in zip(_VARS, exps):
        m = m * v**e
    return m


@st.composite
def coeffs(draw, max_terms: int = 3, max_k: int = 2) -> CoeffExpr:
    n = draw(st.integers(0, max_terms))
    out = CoeffExpr.coerce(0)
    for _ in range(n):
        c = draw(gauss)
        out = out + draw(monomials()) * CoeffExpr.coerce(complex(c))
    k = draw(st.integers(0, max_k))
    return out / R2**k


@st.composite
def forms(draw, grade: int | None = None, max_terms: int = 2) -> CoordForm:
    g = draw(st.integers(0, 4)) if grade is None else grade
    idx = all_indices(g)
    chosen = draw(st.lists(st.sampled_from(idx), max_size=min(len(idx), 3), unique=True))
    return CoordForm(g, {k: draw(coeffs(max_terms)) for k in chosen})


@st.composite
def vfields(draw) -> VField:
    return VField({i: draw(coeffs(2, 1)) for i in range(4) if draw(st.booleans())})


@st.composite
def sections(draw) -> GenSection:
    return GenSection(draw(vfields()), draw(forms(1)))
