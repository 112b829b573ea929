"""TeX-like debug printing for coefficients and forms."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .coeff import CoeffExpr, GaussQ

_VAR_TEX = ("z_1", r"\bar z_1", "z_2", r"\bar z_2")
_SYM_TEX = {"pi": r"\pi", "lntau": r"\ln\tau"}


def _number_tex(c: "GaussQ") -> str:
    def q(x) -> str:
        return str(x.numerator) if x.denominator == 1 else rf"\frac{{{x.numerator}}}{{{x.denominator}}}"

    if not c.im:
        return q(c.re)
    if not c.re:
        return "i" if c.im == 1 else "-i" if c.im == -1 else q(c.im) + "i"
    sign = "+" if c.im > 0 else "-"
    return f"({q(c.re)}{sign}{q(abs(c.im))}i)"


def _mono_tex(m: tuple) -> str:
    parts = []
    for name, e in zip(_VAR_TEX, m[:4]):
        if e:
            parts.append(name if e == 1 else f"{name}^{{{e}}}")
    for name, e in m[4]:
        t = _SYM_TEX.get(name, name)
        parts.append(t if e == 1 else f"{t}^{{{e}}}")
    return " ".join(parts)


def coeff_to_tex(e: "CoeffExpr") -> str:
    if e.is_zero():
        return "0"
    terms = []
    for m, c in sorted(e.numerator.items(), reverse=True):
        mono = _mono_tex(m)
        num = _number_tex(c)
        if not mono:
            terms.append(num)
        elif num == "1":
            terms.append(mono)
        elif num == "-1":
            terms.append("-" + mono)
        else:
            terms.append(f"{num} {mono}")
    body = " + ".join(terms).replace("+ -", "- ")
    k = e.r2_power
    if k == 0:
        return body
    den = "|z|^2" if k == 1 else f"|z|^{{{2 * k}}}"
    return rf"\frac{{{body}}}{{{den}}}"
