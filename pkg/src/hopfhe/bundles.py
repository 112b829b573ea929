"""Invariant I+- holomorphic structures on rank-1 and rank-2 bundles.

A structure on the trivial bundle with constant frame ``e_a`` is fixed by two
constant matrices::

    dbar_plus  e_a = sum_b M_plus[b][a]  * conj(beta1)  e_b
    dbar_minus e_a = sum_b M_minus[b][a] * conj(alpha1) e_b

Everything in this module is exact; degrees are read off as the coefficient of
``tr F ^ omega`` against ``vol_g = omega^2 / 2``.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Literal, Sequence

import numpy as np

from .hopf import HopfGeometry, bismut_coform, standard_hopf
from .symcalc import (
    ALPHA1,
    BETA1,
    I,
    LNTAU,
    ONE,
    PI,
    ZERO,
    CoeffExpr,
    CoordForm,
    const,
    dbar,
    frame_vectors,
    function_form,
    partial,
    sym,
    wedge,
)

Sign = Literal["plus", "minus"]
Matrix = tuple[tuple[CoeffExpr, ...], ...]

__all__ = [
    "Eta",
    "BundleStructure",
    "HermitianBackground",
    "DegreeResult",
    "UnsupportedInput",
    "line_bundle",
    "tensor",
    "dual",
    "chern_curvature",
    "degree",
    "degrees",
    "slope_alpha",
    "commutation_defect",
    "defect_is_zero",
    "direct_sum",
    "degree_json",
    "SubLine",
    "Sign",
    "flatness_defect",
    "example_4_8",
    "example_4_11",
    "example_4_12",
    "example_4_13",
    "constant_subline_scan",
    "constant_subline_verdict",
    "FamilyDescriptor",
    "stability_scan",
    "scan_to_csv",
    "quadrature_degree",
]

_TOP = (0, 1, 2, 3)


class UnsupportedInput(ValueError):
    """Input outside the invariant, constant-coefficient scope of this module."""


# ---------------------------------------------------------------------------
# matrices of CoeffExpr


def _mat(rows: Iterable[Iterable[Any]]) -> Matrix:
    return tuple(tuple(CoeffExpr.coerce(x) for x in row) for row in rows)


def _identity(r: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(r)) for i in range(r))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)) for i in range(n))


def _matadd(a: Matrix, b: Matrix, sign: int = 1) -> Matrix:
    return tuple(tuple(x + y if sign > 0 else x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _adjoint(a: Matrix) -> Matrix:
    r = len(a)
    return tuple(tuple(a[j][i].conj() for j in range(r)) for i in range(r))


def _commutator(a: Matrix, b: Matrix) -> Matrix:
    return _matadd(_matmul(a, b), _matmul(b, a), -1)


def _mat_is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def _inverse(h: Matrix) -> Matrix:
    r = len(h)
    if r == 1:
        return ((ONE / h[0][0],),)
    if r == 2:
        det = h[0][0] * h[1][1] - h[0][1] * h[1][0]
        inv = ONE / det
        return ((h[1][1] * inv, -h[0][1] * inv), (-h[1][0] * inv, h[0][0] * inv))
    raise UnsupportedInput("rank must be 1 or 2")


def _to_complex(a: Matrix, values: dict[str, float] | None = None) -> np.ndarray:
    out = np.zeros((len(a), len(a[0])), dtype=complex)
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            out[i, j] = complex(x.substitute(values or {}).as_number()) if not x.is_number() else complex(x.as_number())
    return out


# ---------------------------------------------------------------------------
# line bundle parameter


@dataclass(frozen=True)
class Eta:
    """Exact description of ``eta = exp(log_abs + i*arg)``.

    ``log_abs`` and ``arg`` are :class:`CoeffExpr` built from exact rationals,
    ``lntau``, ``pi`` and named opaque constants whose numeric values are kept in
    ``values``.
    """

    log_abs: CoeffExpr
    arg: CoeffExpr
    values: tuple[tuple[str, float], ...] = ()

    @classmethod
    def tau_power(cls, m: int | Fraction, arg_over_pi: int | Fraction = 0) -> "Eta":
        return cls(CoeffExpr.coerce(Fraction(m)) * LNTAU, CoeffExpr.coerce(Fraction(arg_over_pi)) * PI)

    @classmethod
    def polar(cls, r: float, theta: float, name: str = "eta") -> "Eta":
        if not r > 0:
            raise ValueError("eta must be nonzero")
        vals: list[tuple[str, float]] = []
        if r == 1:
            la = const(0)
        else:
            la = sym(f"ln|{name}|")
            vals.append((f"ln|{name}|", math.log(r)))
        if theta == 0:
            ar = const(0)
        else:
            ar = sym(f"arg_{name}")
            vals.append((f"arg_{name}", float(theta)))
        return cls(la, ar, tuple(vals))

    @classmethod
    def from_complex(cls, eta: complex, name: str = "eta") -> "Eta":
        if eta == 0:
            raise ValueError("eta must be nonzero")
        return cls.polar(abs(eta), cmath.phase(eta), name)

    def value_map(self) -> dict[str, float]:
        return dict(self.values)

    def __mul__(self, other: "Eta") -> "Eta":
        merged = dict(self.values)
        merged.update(other.values)
        return Eta(self.log_abs + other.log_abs, self.arg + other.arg, tuple(sorted(merged.items())))

    def inverse(self) -> "Eta":
        return Eta(-self.log_abs, -self.arg, self.values)


# ---------------------------------------------------------------------------
# structures


@dataclass(frozen=True)
class BundleStructure:
    """Pair of invariant holomorphic structures on the trivial rank-r bundle.

    ``M_plus`` and ``M_minus`` are constant r x r matrices (entries free of the
    coordinates); the connection forms are ``M_plus * conj(beta1)`` and
    ``M_minus * conj(alpha1)``.
    """

    rank: int
    M_plus: Matrix
    M_minus: Matrix
    label: str = ""
    values: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        if self.rank not in (1, 2):
            raise UnsupportedInput("rank must be 1 or 2")
        for M in (self.M_plus, self.M_minus):
            if len(M) != self.rank or any(len(row) != self.rank for row in M):
                raise ValueError("connection matrices must be rank x rank")
            if not all(x.is_constant() for row in M for x in row):
                raise UnsupportedInput("connection matrix entries must be constant")

    def M(self, sign: Sign) -> Matrix:
        return self.M_plus if _sign(sign) == "plus" else self.M_minus

    def psi(self, sign: Sign) -> CoordForm:
        """The (0,1)-form carrying the structure: conj(beta1) or conj(alpha1)."""
        return BETA1.conj() if _sign(sign) == "plus" else ALPHA1.conj()

    def A(self, sign: Sign) -> tuple[tuple[CoordForm, ...], ...]:
        psi = self.psi(sign)
        return tuple(tuple(psi.scale(x) for x in row) for row in self.M(sign))

    @property
    def A_plus(self) -> tuple[tuple[CoordForm, ...], ...]:
        return self.A("plus")

    @property
    def A_minus(self) -> tuple[tuple[CoordForm, ...], ...]:
        return self.A("minus")

    def value_map(self) -> dict[str, float]:
        return dict(self.values)

    def numeric_M(self, sign: Sign, tau: float) -> np.ndarray:
        vals = {"pi": math.pi, "lntau": math.log(tau), **self.value_map()}
        return _to_complex(self.M(sign), vals)


def _sign(sign: str) -> str:
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    return sign


@dataclass(frozen=True)
class HermitianBackground:
    """Background metric ``h0`` (matrix of CoeffExpr) and a conformal profile handle."""

    h0: Matrix
    k0: Any = None

    @classmethod
    def identity(cls, rank: int) -> "HermitianBackground":
        return cls(_identity(rank))

    def __post_init__(self) -> None:
        h = self.h0
        if _adjoint(h) != h:
            raise ValueError("h0 must be Hermitian")
        vals = {"pi": math.pi, "lntau": math.log(2.0)}
        mat = np.array([[complex(x.evaluate(1.0 + 0j, 0j, vals)) for x in row] for row in h])
        if np.linalg.eigvalsh(mat).min() <= 0:
            raise ValueError("h0 must be positive at the sample point (1,0)")


def line_bundle(eta: Eta | complex | float, tau: float = 2.0, name: str = "eta") -> BundleStructure:
    """``L_eta`` with ``c = ln(eta) / (2 ln tau)`` on both sides."""
    if not (isinstance(tau, (int, float)) and tau > 1):
        raise ValueError("tau must be a real number > 1")
    if not isinstance(eta, Eta):
        if eta == 0:
            raise ValueError("eta must be nonzero")
        eta = Eta.from_complex(complex(eta), name)
    c = (eta.log_abs + I * eta.arg) / (2 * LNTAU)
    return BundleStructure(1, ((c,),), ((c,),), label=f"L_{name}", values=eta.values)


def tensor(a: BundleStructure, b: BundleStructure) -> BundleStructure:
    if a.rank != 1 or b.rank != 1:
        raise UnsupportedInput("tensor product implemented for line bundles")
    merged = {**a.value_map(), **b.value_map()}
    return BundleStructure(
        1,
        ((a.M_plus[0][0] + b.M_plus[0][0],),),
        ((a.M_minus[0][0] + b.M_minus[0][0],),),
        label=f"{a.label}⊗{b.label}",
        values=tuple(sorted(merged.items())),
    )


def dual(a: BundleStructure) -> BundleStructure:
    neg_t = lambda M: tuple(tuple(-M[j][i] for j in range(a.rank)) for i in range(a.rank))  # noqa: E731
    return BundleStructure(a.rank, neg_t(a.M_plus), neg_t(a.M_minus), label=f"{a.label}*", values=a.values)


def direct_sum(a: BundleStructure, b: BundleStructure) -> BundleStructure:
    if a.rank != 1 or b.rank != 1:
        raise UnsupportedInput("direct sum implemented for two line bundles")
    block = lambda x, y: ((x, ZERO), (ZERO, y))  # noqa: E731
    merged = {**a.value_map(), **b.value_map()}
    return BundleStructure(
        2,
        block(a.M_plus[0][0], b.M_plus[0][0]),
        block(a.M_minus[0][0], b.M_minus[0][0]),
        label=f"{a.label}⊕{b.label}",
        values=tuple(sorted(merged.items())),
    )


# ---------------------------------------------------------------------------
# connections and curvature


def _form_matmul(a, b):
    r = len(a)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = None
            for k in range(r):
                t = wedge(a[i][k], b[k][j])
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def chern_connection(s: BundleStructure, h: HermitianBackground | None, sign: Sign):
    """Connection matrix ``Theta = A + H^{-1}(dH^{1,0} - A^dagger H)``.

    Convention: ``h(u, v) = v^dagger H u`` on coefficient columns, so
    compatibility reads ``dH = H Theta + Theta^dagger H``.
    """
    side = _sign(sign)
    r = s.rank
    h = h or HermitianBackground.identity(r)
    H = h.h0
    try:
        Hinv = _inverse(H)
    except Exception as exc:  # DenominatorError or ZeroDivisionError
        raise ValueError(f"metric is not invertible in the coefficient ring: {exc}") from exc
    A = s.A(side)
    Adag = tuple(tuple(A[j][i].conj() for j in range(r)) for i in range(r))
    dH = tuple(tuple(partial(function_form(H[i][j]), side) for j in range(r)) for i in range(r))
    Hf = tuple(tuple(function_form(H[i][j]) for j in range(r)) for i in range(r))
    Hinvf = tuple(tuple(function_form(Hinv[i][j]) for j in range(r)) for i in range(r))
    inner = tuple(
        tuple(dH[i][j] - _form_matmul(Adag, Hf)[i][j] for j in range(r)) for i in range(r)
    )
    t10 = _form_matmul(Hinvf, inner)
    return tuple(tuple(A[i][j] + t10[i][j] for j in range(r)) for i in range(r))


def chern_curvature(s: BundleStructure, h: HermitianBackground | None = None, sign: Sign = "plus"):
    """Curvature matrix ``d Theta + Theta ^ Theta`` of the Chern connection."""
    from .symcalc import ext_d

    Th = chern_connection(s, h, sign)
    r = s.rank
    TT = _form_matmul(Th, Th)
    return tuple(tuple(ext_d(Th[i][j]) + TT[i][j] for j in range(r)) for i in range(r))


def flatness_defect(s: BundleStructure, sign: Sign):
    """(0,2)-part of ``dbar A + A ^ A``; zero iff the partial structure is integrable."""
    side = _sign(sign)
    A = s.A(side)
    AA = _form_matmul(A, A)
    r = s.rank
    return tuple(tuple(dbar(A[i][j], side) + AA[i][j] for j in range(r)) for i in range(r))


def _vol_coefficient(top: CoordForm, geom: HopfGeometry) -> CoeffExpr:
    v = geom.vol()[_TOP]
    return top[_TOP] / v


def degree(s: BundleStructure, sign: Sign, h: HermitianBackground | None = None,
           geom: HopfGeometry | None = None) -> CoeffExpr:
    """Exact normalized degree ``(i / 2 pi) tr F ^ omega / vol_g``.

    The ratio is a constant function for invariant data; anything else is
    rejected so callers can fall back to quadrature.
    """
    geom = geom or standard_hopf()
    F = chern_curvature(s, h, sign)
    trF = F[0][0] if s.rank == 1 else F[0][0] + F[1][1]
    top = wedge(trF, geom.omega(sign))
    ratio = (I / (2 * PI)) * _vol_coefficient(top, geom)
    if not ratio.is_constant():
        raise UnsupportedInput("curvature is not invariant; use quadrature_degree")
    return ratio


@dataclass(frozen=True)
class DegreeResult:
    """Exact plus/minus degrees with the alpha-combination as an affine function."""

    deg_plus: CoeffExpr
    deg_minus: CoeffExpr
    rank: int = 1

    def alpha_degree(self, alpha: Any) -> CoeffExpr:
        a = CoeffExpr.coerce(alpha)
        return a * self.deg_plus + (1 - a) * self.deg_minus

    def alpha_slope(self, alpha: Any) -> CoeffExpr:
        return self.alpha_degree(alpha) / self.rank

    def numeric(self, values: dict[str, float]) -> tuple[complex, complex]:
        return (
            complex(self.deg_plus.substitute(values).as_number()),
            complex(self.deg_minus.substitute(values).as_number()),
        )

    def to_dict(self, alpha: Any | None = None, values: dict[str, float] | None = None) -> dict[str, Any]:
        out: dict[str, Any] = {"deg_plus": self.deg_plus.to_tex(), "deg_minus": self.deg_minus.to_tex(), "rank": self.rank}
        if alpha is not None:
            out["alpha"] = str(alpha)
            out["deg_alpha"] = self.alpha_degree(alpha).to_tex()
            out["slope_alpha"] = self.alpha_slope(alpha).to_tex()
        if values is not None:
            dp, dm = self.numeric(values)
            out["deg_plus_value"] = dp.real
            out["deg_minus_value"] = dm.real
            if alpha is not None:
                a = float(Fraction(str(alpha))) if not isinstance(alpha, float) else alpha
                out["deg_alpha_value"] = a * dp.real + (1 - a) * dm.real
        return out


def degrees(s: BundleStructure, h: HermitianBackground | None = None, geom: HopfGeometry | None = None) -> DegreeResult:
    return DegreeResult(degree(s, "plus", h, geom), degree(s, "minus", h, geom), s.rank)


def slope_alpha(s: BundleStructure, alpha: Any, h: HermitianBackground | None = None) -> CoeffExpr:
    return degrees(s, h).alpha_slope(alpha)


# ---------------------------------------------------------------------------
# commutation relation


def _delta_bar(s: BundleStructure, side: Sign, w: Sequence[CoordForm], geom: HopfGeometry) -> list[CoordForm]:
    """Apply the extended operator of ``side`` to a V-valued form of grade 0 or 1.

    The new one-form factor is placed first, so ``T_side (x) T_other`` becomes
    the wedge ``new ^ old`` and the swap of tensor factors is the sign of the
    wedge.  One-form coefficients are differentiated with the Bismut connection
    of the *other* structure along the anti-holomorphic directions of ``side``.
    """
    other = "minus" if side == "plus" else "plus"
    M = s.M(side)
    psi = s.psi(side)
    r = s.rank
    dirs = frame_vectors(side)[2:]
    cof = [c.conj() for c in (geom.beta1, geom.beta2)] if side == "plus" else [c.conj() for c in (geom.alpha1, geom.alpha2)]
    out = []
    for c in range(r):
        wc = w[c]
        if wc.grade == 0:
            term = dbar(wc, side)
        else:
            term = CoordForm.zero(2)
            for V, th in zip(dirs, cof):
                term = term + wedge(th, bismut_coform(geom, V, wc, other))
        for b in range(r):
            if not M[c][b].is_zero():
                term = term + wedge(psi.scale(M[c][b]), w[b])
        out.append(term)
    return out


def commutation_defect(s: BundleStructure, geom: HopfGeometry | None = None):
    """Matrix ``D[c][a]`` of 2-forms: component ``c`` of the defect on ``e_a``."""
    geom = geom or standard_hopf()
    r = s.rank
    cols = []
    for a in range(r):
        e = [CoordForm(0, {(): ONE if b == a else ZERO}) for b in range(r)]
        pm = _delta_bar(s, "plus", _delta_bar(s, "minus", e, geom), geom)
        mp = _delta_bar(s, "minus", _delta_bar(s, "plus", e, geom), geom)
        cols.append([x + y for x, y in zip(pm, mp)])
    return tuple(tuple(cols[a][c] for a in range(r)) for c in range(r))


def defect_is_zero(D) -> bool:
    return all(x.is_zero() for row in D for x in row)


# ---------------------------------------------------------------------------
# examples


def _check_distinct(x: CoeffExpr, y: CoeffExpr, what: str) -> None:
    if x == y:
        raise ValueError(f"{what} must be distinct")


def example_4_8(eta: Any, xi: Any, a: Any, b: Any) -> BundleStructure:
    """Diagonal in ``{e1, e2}`` on the plus side, in ``{e1+e2, e1-e2}`` on the minus side."""
    eta, xi, a, b = (CoeffExpr.coerce(v) for v in (eta, xi, a, b))
    _check_distinct(eta, xi, "eta and xi")
    _check_distinct(a, b, "a and b")
    half = const("1/2")
    Mp = ((eta, ZERO), (ZERO, xi))
    Mm = ((half * (a + b), half * (a - b)), (half * (a - b), half * (a + b)))
    return BundleStructure(2, Mp, Mm, label="example 4.8")


def example_4_13(m_plus: int, m_minus: int) -> BundleStructure:
    """Upper-triangular extension of ``L2`` by the trivial ``L1``.

    The minus-side entries carry the sign that makes ``L2`` equal to
    ``O_-(m_minus)`` under the degree normalization used here.
    """
    _require_int(m_plus, "m_plus", lo=1)
    _require_int(m_minus, "m_minus", lo=2)
    hp = const(Fraction(-m_plus, 2))
    hm = const(Fraction(-m_minus, 2))
    Mp = ((ZERO, hp), (ZERO, hp))
    Mm = ((ZERO, hm), (ZERO, hm))
    return BundleStructure(2, Mp, Mm, label=f"example 4.13({m_plus},{m_minus})")


def _require_int(x: Any, name: str, lo: int | None = None, hi: int | None = None) -> None:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"{name} must be an integer")
    if lo is not None and x < lo:
        raise ValueError(f"{name} must be >= {lo}")
    if hi is not None and x > hi:
        raise ValueError(f"{name} must be <= {hi}")


@dataclass(frozen=True)
class FamilyDescriptor:
    """Certified degree data for a family decided by one competing sub-line bundle.

    ``mu_V(alpha)`` and ``mu_L(alpha)`` are exact affine functions; the verdict is
    stable iff the competing slope is strictly below the bundle slope.  The two
    lines cross once, at ``alpha0``; which side is stable depends on the family.
    """

    name: str
    params: dict[str, int]
    alpha0: Fraction
    mu_V_coeffs: tuple[Fraction, Fraction]
    mu_L_coeffs: tuple[Fraction, Fraction]

    def mu_V(self, alpha: Any) -> Fraction:
        a = Fraction(alpha) if not isinstance(alpha, float) else Fraction(alpha)
        return self.mu_V_coeffs[0] * a + self.mu_V_coeffs[1] * (1 - a)

    def mu_L(self, alpha: Any) -> Fraction:
        a = Fraction(alpha) if not isinstance(alpha, float) else Fraction(alpha)
        return self.mu_L_coeffs[0] * a + self.mu_L_coeffs[1] * (1 - a)

    def verdict(self, alpha: Any) -> str:
        a = Fraction(alpha)
        if not 0 < a < 1:
            raise ValueError("alpha must lie in (0, 1)")
        return "stable" if self.mu_L(a) < self.mu_V(a) else "unstable"

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.name, "params": self.params, "alpha0": str(self.alpha0), "alpha0_float": float(self.alpha0)}


def example_4_11(m_plus: int, m_minus: int) -> FamilyDescriptor:
    """Extension family with ``O`` as the only sub-line bundle on both sides.

    ``mu(V) = (alpha(-m+) + (1-alpha) m-)/2`` against ``mu(L) = 0``.
    """
    _require_int(m_plus, "m_plus", lo=1)
    _require_int(m_minus, "m_minus", lo=2)
    a0 = Fraction(m_minus, m_plus + m_minus)
    return FamilyDescriptor(
        "example_4_11",
        {"m_plus": m_plus, "m_minus": m_minus},
        a0,
        (Fraction(-m_plus, 2), Fraction(m_minus, 2)),
        (Fraction(0), Fraction(0)),
    )


def example_4_12(deg_plus_L: int, m_minus: int) -> FamilyDescriptor:
    """Rank-2 family with trivial determinant; the competing sub-line bundle has
    degrees ``(deg_plus_L, m_minus)`` and is the maximum over the certified bounds.

    Its alpha-degree ``alpha (deg_plus_L - m_minus) + m_minus`` decreases through 0
    at ``alpha0``, so the family is stable exactly for ``alpha > alpha0``.
    """
    _require_int(deg_plus_L, "deg_plus_L", hi=-1)
    _require_int(m_minus, "m_minus", lo=1)
    a0 = Fraction(m_minus, m_minus - deg_plus_L)
    return FamilyDescriptor(
        "example_4_12",
        {"deg_plus_L": deg_plus_L, "m_minus": m_minus},
        a0,
        (Fraction(0), Fraction(0)),
        (Fraction(deg_plus_L), Fraction(m_minus)),
    )


@dataclass(frozen=True)
class SubLine:
    """Constant line ``span(w)`` with the eigenvalue of the structure matrix on it."""

    w: tuple[Any, Any]
    eigenvalue: Any

    def key(self) -> tuple[Any, Any]:
        return self.w


def _invariant_lines(M: Matrix) -> list[SubLine] | str:
    import sympy

    def to_sym(x: CoeffExpr):
        if not x.is_number():
            raise UnsupportedInput("constant sub-line scan needs numeric matrix entries")
        g = x.as_number()
        return sympy.Rational(g.re.numerator, g.re.denominator) + sympy.I * sympy.Rational(g.im.numerator, g.im.denominator)

    S = sympy.Matrix([[to_sym(x) for x in row] for row in M])
    if S[0, 1] == 0 and S[1, 0] == 0 and sympy.simplify(S[0, 0] - S[1, 1]) == 0:
        return "all"
    out = []
    for lam, _mult, vecs in S.eigenvects():
        for v in vecs:
            v = sympy.Matrix(v)
            lead = v[0] if v[0] != 0 else v[1]
            v = (v / lead).applyfunc(sympy.nsimplify)
            out.append(SubLine((sympy.simplify(v[0]), sympy.simplify(v[1])), sympy.simplify(lam)))
    return out


def _same_line(u: tuple, v: tuple) -> bool:
    import sympy

    return sympy.simplify(u[0] * v[1] - u[1] * v[0]) == 0


def constant_subline_scan(s: BundleStructure) -> dict[str, Any]:
    """Constant lines invariant under each side and their common intersection.

    Returns a dict with keys ``plus``, ``minus`` (lists of :class:`SubLine` or the
    string ``"all"`` for scalar matrices) and ``common`` (pairs of plus/minus
    sub-lines spanning the same line).
    """
    if s.rank != 2:
        raise UnsupportedInput("sub-line scan needs rank 2")
    plus = _invariant_lines(s.M_plus)
    minus = _invariant_lines(s.M_minus)
    common: list[tuple[SubLine, SubLine]] = []
    if plus == "all" or minus == "all":
        common = []  # every line of the other side qualifies; reported separately
    else:
        for p in plus:
            for m in minus:
                if _same_line(p.w, m.w):
                    common.append((p, m))
    return {"plus": plus, "minus": minus, "common": common}


def constant_subline_verdict(s: BundleStructure, alpha: Any) -> dict[str, Any]:
    """Compare alpha-slopes of the common constant sub-lines with ``mu_alpha(V)``.

    A common line ``w`` with eigenvalues ``(l+, l-)`` inherits the line-bundle
    structure ``c+ = l+``, ``c- = l-``, hence degrees ``(2 Re l+, -2 Re l-)``.
    """
    import sympy

    a = Fraction(alpha)
    scan = constant_subline_scan(s)
    if scan["plus"] == "all" or scan["minus"] == "all":
        raise UnsupportedInput("scalar structure matrix: every constant line is invariant on one side")
    dV = degrees(s)
    muV = Fraction(str(sympy.nsimplify(complex(dV.alpha_slope(a).as_number()).real)))
    rows = []
    for p, m in scan["common"]:
        dplus = 2 * sympy.re(p.eigenvalue)
        dminus = -2 * sympy.re(m.eigenvalue)
        mu = sympy.Rational(a.numerator, a.denominator) * dplus + (1 - sympy.Rational(a.numerator, a.denominator)) * dminus
        rows.append({"line": [str(p.w[0]), str(p.w[1])], "deg_plus": str(dplus), "deg_minus": str(dminus),
                     "mu_alpha": str(mu), "destabilizing": bool(mu >= sympy.Rational(muV.numerator, muV.denominator))})
    stable = not any(r["destabilizing"] for r in rows)
    return {"alpha": str(a), "mu_alpha_V": str(muV), "sublines": rows,
            "verdict": "stable" if stable else "unstable",
            "note": "decided over constant sub-lines only"}


# ---------------------------------------------------------------------------
# scans and serialization


def stability_scan(desc: FamilyDescriptor, grid: Iterable[Any]) -> list[dict[str, Any]]:
    rows = []
    for a in grid:
        fa = Fraction(a) if not isinstance(a, Fraction) else a
        rows.append({
            "alpha": fa,
            "mu_alpha_V": desc.mu_V(fa),
            "mu_alpha_L": desc.mu_L(fa),
            "verdict": desc.verdict(fa),
        })
    return rows


def scan_to_csv(rows: list[dict[str, Any]], alpha0: Fraction | None = None) -> str:
    buf = io.StringIO()
    if alpha0 is not None:
        buf.write(f"# alpha0={alpha0} ({float(alpha0):.12g})\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "mu_alpha_V", "mu_alpha_L", "verdict"])
    for r in rows:
        w.writerow([_fmt(r["alpha"]), _fmt(r["mu_alpha_V"]), _fmt(r["mu_alpha_L"]), r["verdict"]])
    return buf.getvalue()


def _fmt(x: Any) -> str:
    if isinstance(x, Fraction):
        return repr(float(x)) if x.denominator != 1 else str(x.numerator)
    return str(x)


# ---------------------------------------------------------------------------
# quadrature oracle


def quadrature_degree(
    s: BundleStructure,
    sign: Sign,
    tau: float,
    *,
    prefactor: float = 1.0 / (2.0 * math.pi),
    n_t: int = 4,
    n_theta: int = 2000,
    n_phi: int = 8,
) -> float:
    """Midpoint-rule value of ``(prefactor * i) int tr F ^ omega / int vol_g``.

    Integrates over the shell ``1 <= |z| <= tau`` in Hopf coordinates
    ``z1 = r cos(th) e^{i p1}``, ``z2 = r sin(th) e^{i p2}`` with ``t = ln r^2``;
    the Jacobian is ``(r^4/2) cos(th) sin(th)`` and the common factor relating
    ``dz1 dz2 dzb1 dzb2`` to Lebesgue measure cancels in the ratio.
    """
    geom = HopfGeometry(tau=tau)
    F = chern_curvature(s, None, sign)
    trF = F[0][0] if s.rank == 1 else F[0][0] + F[1][1]
    top = wedge(trF, geom.omega(sign))[_TOP]
    vol = geom.vol()[_TOP]
    T = 2 * math.log(tau)
    t = (np.arange(n_t) + 0.5) * T / n_t
    th = (np.arange(n_theta) + 0.5) * (math.pi / 2) / n_theta
    ph = (np.arange(n_phi) + 0.5) * 2 * math.pi / n_phi
    tt, hh, p1, p2 = np.meshgrid(t, th, ph, ph, indexing="ij")
    r = np.exp(tt / 2)
    z1 = r * np.cos(hh) * np.exp(1j * p1)
    z2 = r * np.sin(hh) * np.exp(1j * p2)
    jac = r**4 / 2 * np.cos(hh) * np.sin(hh)
    vals = {"pi": math.pi, "lntau": math.log(tau), **s.value_map()}
    w = (T / n_t) * (math.pi / 2 / n_theta) * (2 * math.pi / n_phi) ** 2
    num = np.sum(top.evaluate(z1, z2, vals) * jac) * w
    den = np.sum(vol.evaluate(z1, z2, vals) * jac) * w
    return float((1j * prefactor * num / den).real)


def degree_json(s: BundleStructure, alpha: Any, tau: float) -> str:
    d = degrees(s)
    vals = {"pi": math.pi, "lntau": math.log(tau), **s.value_map()}
    return json.dumps(d.to_dict(alpha, vals), ensure_ascii=False, sort_keys=True)
