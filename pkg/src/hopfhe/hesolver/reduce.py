"""Exact reduction of the mean-curvature operators to ODEs in ``t = ln|z|^2``.

For an invariant structure with connection form ``M psi-bar`` (``psi`` the first
coframe element of the side) and a metric ``h = h0 f(t)`` with ``h0 = id``::

    f^{-1} d0 f   = G psi,            G = f^{-1}(f' - [M^*, f])
    i Lambda dbar(G psi) = c_d G' + c_0 G + c_m [M, G]

The constants ``c_d, c_0, c_m`` are read off from symbolic contractions; the
reduction refuses to proceed if ``partial t`` is not ``psi`` or a contraction
is not constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from ..bundles import BundleStructure, Sign, chern_curvature
from ..hopf import HopfGeometry, standard_hopf
from ..symcalc import (
    I,
    ONE,
    R2,
    ZERO,
    CoeffExpr,
    CoordForm,
    dbar,
    ext_d,
    function_form,
    partial,
    wedge,
)

_TOP = (0, 1, 2, 3)


class ReductionError(RuntimeError):
    """The invariant ansatz did not close on constant coefficients."""


def lambda_contract(phi: CoordForm, geom: HopfGeometry, side: Sign) -> CoeffExpr:
    """``Lambda`` for ``omega_side`` on a 2-form, normalized by ``Lambda omega = 2``."""
    if phi.grade != 2:
        raise ValueError("Lambda acts on 2-forms")
    w = geom.omega(side)
    return 2 * wedge(phi, w)[_TOP] / wedge(w, w)[_TOP]


def dt_form() -> CoordForm:
    """``d ln r2`` as an exact 1-form."""
    return ext_d(function_form(R2)).scale(ONE / R2)


@dataclass(frozen=True)
class SideCoefficients:
    side: str
    c_d: CoeffExpr
    c_0: CoeffExpr
    c_m: CoeffExpr
    K: tuple[tuple[CoeffExpr, ...], ...]

    def numeric(self, values: dict[str, float]) -> tuple[float, float, float]:
        return tuple(_num(x, values).real for x in (self.c_d, self.c_0, self.c_m))  # type: ignore[return-value]

    def K_numeric(self, values: dict[str, float]) -> np.ndarray:
        return np.array([[_num(x, values) for x in row] for row in self.K])


def _num(x: CoeffExpr, values: dict[str, float]) -> complex:
    return complex(x.substitute(values).as_number())


def _require_constant(x: CoeffExpr, what: str) -> CoeffExpr:
    if not x.is_constant():
        raise ReductionError(f"{what} is not constant: {x.to_tex()}")
    return x


def _side_coefficients(geom: HopfGeometry, s: BundleStructure, side: Sign) -> SideCoefficients:
    psi = s.psi(side).conj()
    dt = dt_form()
    d_t = partial(function_form(R2), side).scale(ONE / R2)
    if d_t != psi:
        raise ReductionError(f"partial_{side} t does not match the structure coform")
    if dbar(function_form(R2), side).scale(ONE / R2) != psi.conj() or d_t + psi.conj() != dt:
        raise ReductionError("dt does not split as psi + conj(psi)")
    if not partial(psi, side).is_zero():
        raise ReductionError("partial psi has a (2,0)-part")
    c_d = _require_constant(I * lambda_contract(wedge(psi.conj(), psi), geom, side), "c_d")
    c_0 = _require_constant(I * lambda_contract(dbar(psi, side), geom, side), "c_0")
    c_m = c_d
    F = chern_curvature(s, None, side)
    K = tuple(
        tuple(_require_constant(I * lambda_contract(F[i][j], geom, side), "K") for j in range(s.rank))
        for i in range(s.rank)
    )
    return SideCoefficients(side, c_d, c_0, c_m, K)


@dataclass(frozen=True)
class ReducedOperator:
    """Reduced ODE data for both sides of one structure at weight ``alpha``.

    Attributes
    ----------
    plus, minus : SideCoefficients
        Exact ``(c_d, c_0, c_m)`` and background mean curvature ``K``.
    alpha : Fraction or float
    values : dict
        Numeric values for ``pi`` and ``lntau``.
    """

    plus: SideCoefficients
    minus: SideCoefficients
    alpha: Any
    M_plus: np.ndarray
    M_minus: np.ndarray
    values: dict[str, float]
    period: float

    @property
    def rank(self) -> int:
        return self.M_plus.shape[0]

    @property
    def weights(self) -> tuple[float, float]:
        a = float(self.alpha)
        return a, 1.0 - a

    def sides(self):
        """``(weight, c_d, c_0, c_m, M)`` per side, numeric."""
        wp, wm = self.weights
        out = []
        for w, sc, M in ((wp, self.plus, self.M_plus), (wm, self.minus, self.M_minus)):
            c_d, c_0, c_m = sc.numeric(self.values)
            out.append((w, c_d, c_0, c_m, M))
        return out

    def scalar_coefficients(self) -> tuple[float, float]:
        """``(a2, a1)`` with ``P^alpha k = a2 k'' + a1 k'``."""
        a2 = a1 = 0.0
        for w, c_d, c_0, _c_m, _M in self.sides():
            a2 += w * c_d
            a1 += w * c_0
        return a2, a1

    def exact_scalar_coefficients(self) -> tuple[CoeffExpr, CoeffExpr]:
        a = CoeffExpr.coerce(Fraction(self.alpha) if not isinstance(self.alpha, float) else self.alpha)
        b = 1 - a
        return a * self.plus.c_d + b * self.minus.c_d, a * self.plus.c_0 + b * self.minus.c_0

    def to_dict(self) -> dict[str, Any]:
        def side(sc: SideCoefficients) -> dict[str, Any]:
            return {"c_d": sc.c_d.to_tex(), "c_0": sc.c_0.to_tex(), "c_m": sc.c_m.to_tex(),
                    "K": [[x.to_tex() for x in row] for row in sc.K]}

        return {"alpha": str(self.alpha), "plus": side(self.plus), "minus": side(self.minus)}


def reduce_operators(geom: HopfGeometry | None, s: BundleStructure, alpha: Any) -> ReducedOperator:
    """Derive the reduced operator of ``s`` from the symbolic calculus."""
    geom = geom or standard_hopf()
    a = float(alpha)
    if not 0 < a < 1:
        raise ValueError("alpha must lie in (0, 1)")
    plus = _side_coefficients(geom, s, "plus")
    minus = _side_coefficients(geom, s, "minus")
    values = {**geom.numeric_values(), **s.value_map()}
    return ReducedOperator(
        plus, minus, alpha,
        s.numeric_M("plus", geom.tau), s.numeric_M("minus", geom.tau),
        values, geom.period,
    )


@dataclass(frozen=True)
class BackgroundCurvature:
    """``K_alpha`` of ``h0 = id``, the Einstein constant and ``K0 = K_alpha - lambda Id``."""

    K_alpha: tuple[tuple[CoeffExpr, ...], ...]
    lam: CoeffExpr
    K0: tuple[tuple[CoeffExpr, ...], ...]
    values: dict[str, float]

    def K0_numeric(self) -> np.ndarray:
        return np.array([[_num(x, self.values) for x in row] for row in self.K0])

    def K_alpha_numeric(self) -> np.ndarray:
        return np.array([[_num(x, self.values) for x in row] for row in self.K_alpha])

    @property
    def lam_numeric(self) -> float:
        return _num(self.lam, self.values).real

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lam.to_tex(),
            "lambda_value": self.lam_numeric,
            "K_alpha": [[x.to_tex() for x in row] for row in self.K_alpha],
            "K0": [[x.to_tex() for x in row] for row in self.K0],
        }


def background_mean_curvature(s: BundleStructure, alpha: Any, geom: HopfGeometry | None = None,
                              op: ReducedOperator | None = None) -> BackgroundCurvature:
    """Constant ``K_alpha`` with ``lambda`` chosen so that ``tr K0`` vanishes."""
    op = op or reduce_operators(geom, s, alpha)
    a = CoeffExpr.coerce(Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha))
    r = s.rank
    Ka = tuple(tuple(a * op.plus.K[i][j] + (1 - a) * op.minus.K[i][j] for j in range(r)) for i in range(r))
    lam = sum((Ka[i][i] for i in range(r)), ZERO) / r
    K0 = tuple(tuple(Ka[i][j] - (lam if i == j else ZERO) for j in range(r)) for i in range(r))
    return BackgroundCurvature(Ka, lam, K0, op.values)


def lambda_from_slope(mu_alpha: float) -> float:
    """Einstein constant predicted by the slope for unit-volume normalization."""
    return 2 * math.pi * mu_alpha
