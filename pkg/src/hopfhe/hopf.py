"""The standard Hopf surface as an even generalized Kahler manifold.

Builds the bi-Hermitian data ``(g, I+, I-)`` in invariant frames, the torsion
3-form, Bismut connections through the Dorfman bracket, the pair of generalized
complex structures, and an exact verification suite whose checks all reduce to
comparing canonical :class:`~hopfhe.symcalc.CoeffExpr` values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Mapping

import numpy as np

from .symcalc import (
    ALPHA1,
    ALPHA2,
    BETA1,
    BETA2,
    I,
    PI,
    R2,
    X1,
    X2,
    Y1,
    Y2,
    ZERO,
    CoeffExpr,
    CoordForm,
    FrameForm,
    GenSection,
    VField,
    const,
    courant,
    dbar,
    dc,
    ext_d,
    frame_coforms,
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
from .symcalc.forms import _BASIS_CONJ

Sign = Literal["plus", "minus"]

__all__ = [
    "HopfGeometry",
    "CheckResult",
    "VerificationReport",
    "standard_hopf",
    "bismut",
    "gk_structures",
    "verify_frames",
    "verify_lemma_4_1",
    "verify_lemma_4_2",
    "verify_assumption_1_1",
    "verify_gk_reconstruction",
    "verify_prop_4_4",
    "verify_ell_spans",
    "verify_all",
    "STRUCTURE_TABLE_MINUS",
]

TWO_PI = 2 * PI
SAMPLE_POINT = (1.0 + 0.0j, 0.0 + 0.0j)


@dataclass(frozen=True)
class HopfGeometry:
    """Invariant data of ``(C^2 \\ {0}) / <z -> tau z>``.

    Attributes
    ----------
    tau : float
        Real contraction factor, ``tau > 1``.  Only used numerically; the exact
        layer refers to ``ln tau`` through the opaque symbol ``lntau``.
    """

    tau: float = 2.0
    X1: VField = field(default=X1, repr=False)
    X2: VField = field(default=X2, repr=False)
    Y1: VField = field(default=Y1, repr=False)
    Y2: VField = field(default=Y2, repr=False)
    alpha1: CoordForm = field(default=ALPHA1, repr=False)
    alpha2: CoordForm = field(default=ALPHA2, repr=False)
    beta1: CoordForm = field(default=BETA1, repr=False)
    beta2: CoordForm = field(default=BETA2, repr=False)

    def __post_init__(self) -> None:
        if not (isinstance(self.tau, (int, float)) and math.isfinite(self.tau) and self.tau > 1):
            raise ValueError(f"tau must be a real number > 1, got {self.tau!r}")

    @property
    def lntau(self) -> float:
        return math.log(self.tau)

    @property
    def period(self) -> float:
        """Period of ``t = ln|z|^2`` on the quotient."""
        return 2.0 * math.log(self.tau)

    def numeric_values(self) -> dict[str, float]:
        return {"pi": math.pi, "lntau": self.lntau}

    def omega(self, side: Sign) -> CoordForm:
        c = frame_coforms(_frame_of(side))
        return (wedge(c[0], c[2]) + wedge(c[1], c[3])).scale(I / TWO_PI)

    @property
    def omega_minus(self) -> CoordForm:
        return self.omega("minus")

    @property
    def omega_plus(self) -> CoordForm:
        return self.omega("plus")

    @property
    def gamma(self) -> CoordForm:
        b1, b2 = self.beta1, self.beta2
        return wedge(wedge(b1.conj() - b1, b2), b2.conj()).scale(1 / TWO_PI)

    @property
    def gamma_alpha(self) -> CoordForm:
        a1, a2 = self.alpha1, self.alpha2
        return wedge(wedge(a1.conj() - a1, a2), a2.conj()).scale(1 / TWO_PI)

    def vol(self) -> CoordForm:
        w = self.omega_plus
        return wedge(w, w).scale(const("1/2"))

    # -- metric -------------------------------------------------------------------
    def gflat(self, V: VField) -> CoordForm:
        """``g(V, .)`` with ``g = (1/(2 pi r2)) sum (dz_i dzb_i + dzb_i dz_i)``."""
        s = 1 / (TWO_PI * R2)
        return CoordForm(1, {(_BASIS_CONJ[i],): s * v for i, v in V.items()})

    def gsharp(self, xi: CoordForm) -> VField:
        s = TWO_PI * R2
        return VField({_BASIS_CONJ[k[0]]: s * v for k, v in xi.items()})

    def graph(self, V: VField, sign: int) -> GenSection:
        """``V + g(V)`` for ``sign=+1`` and ``V - g(V)`` for ``sign=-1``."""
        g = self.gflat(V)
        return GenSection(V, g if sign > 0 else -g)

    def project(self, s: GenSection, side: Sign) -> GenSection:
        """Projection onto ``C+ = graph(g)`` or ``C- = graph(-g)``."""
        sg = 1 if side == "plus" else -1
        half = const("1/2")
        sharp = self.gsharp(s.form) if not s.form.is_zero() else VField()
        W = (s.vec + (sharp if sg > 0 else -sharp)).scale(half)
        return self.graph(W, sg)

    # -- complex structures as frame-defined endomorphisms ---------------------------
    def I_vec(self, V: VField, side: Sign) -> VField:
        vecs = frame_vectors(_frame_of(side))
        cof = frame_coforms(_frame_of(side))
        out = VField()
        for j in range(4):
            c = interior(V, cof[j])[()]
            if not c.is_zero():
                out = out + vecs[j].scale(c * (I if j < 2 else -I))
        return out

    def I_dual(self, xi: CoordForm, side: Sign) -> CoordForm:
        """``I^* xi = xi o I``."""
        ff = to_frame(xi, _frame_of(side))
        return to_coord(FrameForm(ff.frame, 1, {k: v * (I if k[0] < 2 else -I) for k, v in ff.items()}))

    def omega_vec(self, V: VField, side: Sign) -> CoordForm:
        return interior(V, self.omega(side))

    def omega_inv(self, xi: CoordForm, side: Sign) -> VField:
        """Inverse of ``V -> i_V omega``."""
        fr = _frame_of(side)
        vecs = frame_vectors(fr)
        ff = to_frame(xi, fr)
        out = VField()
        for (k,), v in ff.items():
            # i_{E_j} omega = (i/2pi) bar theta_j,  i_{bar E_j} omega = -(i/2pi) theta_j
            if k >= 2:
                out = out + vecs[k - 2].scale(v * TWO_PI / I)
            else:
                out = out + vecs[k + 2].scale(-v * TWO_PI / I)
        return out

    # -- generalized frames ---------------------------------------------------------
    def frak_X(self, j: int) -> GenSection:
        X = (self.X1, self.X2)[j - 1]
        a = (self.alpha1, self.alpha2)[j - 1]
        return GenSection(X, -a.conj().scale(1 / TWO_PI))

    def frak_Y(self, j: int) -> GenSection:
        Y = (self.Y1, self.Y2)[j - 1]
        b = (self.beta1, self.beta2)[j - 1]
        return GenSection(Y, b.conj().scale(1 / TWO_PI))

    def real_directions(self) -> list[VField]:
        """Real and imaginary parts of the two complex frames (8 real fields)."""
        out = []
        for V in (self.X1, self.X2, self.Y1, self.Y2):
            out.append(V + V.conj())
            out.append((V - V.conj()).scale(I))
        return out


def _frame_of(side: Sign) -> str:
    if side not in ("plus", "minus"):
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    return side


def standard_hopf(tau: float = 2.0) -> HopfGeometry:
    return HopfGeometry(tau=float(tau))


def bismut(geom: HopfGeometry, X: VField, Y: VField, sign: Sign) -> VField:
    """Bismut connection through the Dorfman bracket and the ``C+-`` projections."""
    sg = 1 if sign == "plus" else -1
    s = geom.graph(X, -sg)
    t = geom.graph(Y, sg)
    return geom.project(courant(s, t, geom.gamma), sign).vec


def bismut_coform(geom: HopfGeometry, X: VField, theta: CoordForm, sign: Sign) -> CoordForm:
    """Induced connection on 1-forms, returned as coefficients over the frame of ``sign``."""
    fr = "plus" if sign == "plus" else "minus"
    vecs = frame_vectors(fr)
    cof = frame_coforms(fr)
    out = CoordForm.zero(1)
    for j in range(4):
        val = X(interior(vecs[j], theta)[()]) - interior(bismut(geom, X, vecs[j], sign), theta)[()] \
            if not theta.is_zero() else ZERO
        if not val.is_zero():
            out = out + cof[j].scale(val)
    return out


def gk_structures(geom: HopfGeometry) -> tuple[Callable[[GenSection], GenSection], Callable[[GenSection], GenSection]]:
    """The commuting pair ``(J, J')`` from the block formula."""
    half = const("1/2")

    def make(pm: int) -> Callable[[GenSection], GenSection]:
        def J(s: GenSection) -> GenSection:
            X, xi = s.vec, s.form
            Ip, Im = geom.I_vec(X, "plus"), geom.I_vec(X, "minus")
            vec = Ip + (Im if pm > 0 else -Im)
            form = geom.omega_vec(X, "plus") - (geom.omega_vec(X, "minus") if pm > 0 else -geom.omega_vec(X, "minus"))
            if not xi.is_zero():
                wp, wm = geom.omega_inv(xi, "plus"), geom.omega_inv(xi, "minus")
                vec = vec - (wp - (wm if pm > 0 else -wm))
                Dp, Dm = geom.I_dual(xi, "plus"), geom.I_dual(xi, "minus")
                form = form - (Dp + (Dm if pm > 0 else -Dm))
            return GenSection(vec, form).scale(half)

        return J

    return make(+1), make(-1)


# ---------------------------------------------------------------------------
# verification reports


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: str = "0"

    def to_dict(self) -> dict[str, str]:
        return {"check_name": self.name, "status": "pass" if self.passed else "fail", "witness_text": self.witness}


@dataclass
class VerificationReport:
    """Ordered collection of named checks; each name appears once."""

    title: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, difference: Any) -> None:
        if any(c.name == name for c in self.checks):
            raise ValueError(f"check {name!r} registered twice")
        zero = _is_zero(difference)
        self.checks.append(CheckResult(name, zero, "0" if zero else _tex(difference)))

    def add_bool(self, name: str, ok: bool, witness: str) -> None:
        if any(c.name == name for c in self.checks):
            raise ValueError(f"check {name!r} registered twice")
        self.checks.append(CheckResult(name, bool(ok), "0" if ok else witness))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        out = VerificationReport(self.title, list(self.checks))
        for c in other.checks:
            if any(d.name == c.name for d in out.checks):
                raise ValueError(f"check {c.name!r} registered twice")
            out.checks.append(c)
        return out

    def to_dict(self) -> dict[str, Any]:
        return {"title": self.title, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def to_json(self, **kw: Any) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kw)


def _is_zero(x: Any) -> bool:
    if isinstance(x, (CoeffExpr, CoordForm, VField, GenSection, FrameForm)):
        return x.is_zero()
    if isinstance(x, (list, tuple)):
        return all(_is_zero(y) for y in x)
    raise TypeError(f"cannot decide zero-ness of {type(x).__name__}")


def _tex(x: Any) -> str:
    if isinstance(x, GenSection):
        return f"{x.vec.to_tex()} ; {x.form.to_tex()}"
    if isinstance(x, (list, tuple)):
        return "; ".join(_tex(y) for y in x if not _is_zero(y))
    return x.to_tex()


def _named(geom: HopfGeometry) -> dict[str, CoordForm]:
    a1, a2, b1, b2 = geom.alpha1, geom.alpha2, geom.beta1, geom.beta2
    return {"a1": a1, "a2": a2, "ab1": a1.conj(), "ab2": a2.conj(), "b1": b1, "b2": b2, "bb1": b1.conj(), "bb2": b2.conj()}


def _w(*forms: CoordForm) -> CoordForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def STRUCTURE_TABLE_MINUS(geom: HopfGeometry) -> dict[str, CoordForm]:
    """Expected Dolbeault derivatives of the minus coframe."""
    n = _named(geom)
    return {
        "∂₋α₁": CoordForm.zero(2),
        "∂₋α₂": -_w(n["a1"], n["a2"]),
        "∂̄₋α₁": _w(n["a2"], n["ab2"]),
        "∂̄₋α₂": _w(n["ab1"], n["a2"]),
    }


def _structure_table_plus(geom: HopfGeometry) -> dict[str, CoordForm]:
    n = _named(geom)
    return {
        "∂₊β₁": CoordForm.zero(2),
        "∂₊β₂": _w(n["b1"], n["b2"]),
        "∂̄₊β₁": -_w(n["b2"], n["bb2"]),
        "∂̄₊β₂": -_w(n["bb1"], n["b2"]),
    }


def verify_frames(geom: HopfGeometry | None = None) -> VerificationReport:
    geom = geom or standard_hopf()
    rep = VerificationReport("frame duality and metric")
    for side, sym in (("minus", "α"), ("plus", "β")):
        vecs, cof = frame_vectors(side), frame_coforms(side)
        diffs = []
        for i in range(4):
            for j in range(4):
                diffs.append(interior(vecs[j], cof[i])[()] - (1 if i == j else 0))
        rep.add(f"{sym}_i(E_j) = δ_ij", diffs)
    rep.add("g(X_j) = α̅_j/2π", [geom.gflat(geom.X1) - geom.alpha1.conj().scale(1 / TWO_PI),
                                 geom.gflat(geom.X2) - geom.alpha2.conj().scale(1 / TWO_PI)])
    rep.add("g(Y_j) = β̅_j/2π", [geom.gflat(geom.Y1) - geom.beta1.conj().scale(1 / TWO_PI),
                                 geom.gflat(geom.Y2) - geom.beta2.conj().scale(1 / TWO_PI)])
    rep.add("dz₁ = z₁α₁ − z₂α̅₂", to_coord(to_frame(CoordForm(1, {(0,): 1}), "minus")) - CoordForm(1, {(0,): 1}))
    return rep


def verify_lemma_4_1(
    geom: HopfGeometry | None = None, table: Mapping[str, CoordForm] | None = None
) -> VerificationReport:
    """Items (1)-(4) for the minus structure.  ``table`` overrides expected values."""
    from .symcalc import ZB1, Z2

    geom = geom or standard_hopf()
    n = _named(geom)
    rep = VerificationReport("minus structure")
    rep.add("∂₋(|z|²)", partial(function_form(R2), "minus") - geom.alpha1.scale(R2))
    rep.add("∂̄₋(z̄₁/|z|²)", dbar(function_form(ZB1 / R2), "minus"))
    rep.add("∂̄₋(z₂/|z|²)", dbar(function_form(Z2 / R2), "minus"))
    rep.add("dα₁", ext_d(n["a1"]) - _w(n["a2"], n["ab2"]))
    rep.add("dα₂", ext_d(n["a2"]) - (-_w(n["a1"], n["a2"]) + _w(n["ab1"], n["a2"])))
    expected = dict(STRUCTURE_TABLE_MINUS(geom))
    if table:
        expected.update(table)
    computed = {
        "∂₋α₁": partial(n["a1"], "minus"),
        "∂₋α₂": partial(n["a2"], "minus"),
        "∂̄₋α₁": dbar(n["a1"], "minus"),
        "∂̄₋α₂": dbar(n["a2"], "minus"),
    }
    for name, val in computed.items():
        rep.add(name, val - expected[name])
    om = geom.omega_minus
    rep.add("ω₋", om - (_w(n["a1"], n["ab1"]) + _w(n["a2"], n["ab2"])).scale(I / TWO_PI))
    rep.add("d^c₋ω₋", dc(om, "minus") + _w(n["ab1"] - n["a1"], n["a2"], n["ab2"]).scale(1 / TWO_PI))
    return rep


def verify_lemma_4_2(
    geom: HopfGeometry | None = None, table: Mapping[str, CoordForm] | None = None
) -> VerificationReport:
    geom = geom or standard_hopf()
    n = _named(geom)
    rep = VerificationReport("plus structure")
    rep.add("∂₊(|z|²)", partial(function_form(R2), "plus") - geom.beta1.scale(R2))
    expected = dict(_structure_table_plus(geom))
    if table:
        expected.update(table)
    computed = {
        "∂₊β₁": partial(n["b1"], "plus"),
        "∂₊β₂": partial(n["b2"], "plus"),
        "∂̄₊β₁": dbar(n["b1"], "plus"),
        "∂̄₊β₂": dbar(n["b2"], "plus"),
    }
    for name, val in computed.items():
        rep.add(name, val - expected[name])
    op = geom.omega_plus
    rep.add("ω₊", op - (_w(n["b1"], n["bb1"]) + _w(n["b2"], n["bb2"])).scale(I / TWO_PI))
    rep.add("d^c₊ω₊", dc(op, "plus") - _w(n["bb1"] - n["b1"], n["b2"], n["bb2"]).scale(1 / TWO_PI))
    return rep


def verify_assumption_1_1(geom: HopfGeometry | None = None) -> VerificationReport:
    geom = geom or standard_hopf()
    rep = VerificationReport("Gauduchon and volume conditions")
    op, om = geom.omega_plus, geom.omega_minus
    rep.add("dd^c₊ω₊", ext_d(dc(op, "plus")))
    rep.add("dd^c₋ω₋", ext_d(dc(om, "minus")))
    rep.add("ω₊² − ω₋²", wedge(op, op) - wedge(om, om))
    rep.add("γ(β) − γ(α)", geom.gamma - geom.gamma_alpha)
    rep.add("dγ", ext_d(geom.gamma))
    rep.add("d^c₊ω₊ − γ", dc(op, "plus") - geom.gamma)
    rep.add("d^c₋ω₋ + γ", dc(om, "minus") + geom.gamma)
    return rep


def _gk_basis(geom: HopfGeometry) -> list[GenSection]:
    vecs = frame_vectors("minus")
    cof = frame_coforms("minus")
    return [GenSection(v) for v in vecs] + [GenSection(form=c) for c in cof]


def verify_gk_reconstruction(geom: HopfGeometry | None = None) -> VerificationReport:
    geom = geom or standard_hopf()
    rep = VerificationReport("generalized Kahler reconstruction")
    J, Jp = gk_structures(geom)
    basis = _gk_basis(geom)
    Jb = [J(s) for s in basis]
    Jpb = [Jp(s) for s in basis]
    rep.add("J² + 1", [J(t) + s for s, t in zip(basis, Jb)])
    rep.add("J'² + 1", [Jp(t) + s for s, t in zip(basis, Jpb)])
    rep.add("JJ' − J'J", [J(tp) - Jp(t) for t, tp in zip(Jb, Jpb)])
    rep.add("⟨Js,Jt⟩ − ⟨s,t⟩", [pairing(Jb[i], Jb[j]) - pairing(basis[i], basis[j]) for i in range(8) for j in range(i, 8)])
    rep.add("⟨J's,J't⟩ − ⟨s,t⟩", [pairing(Jpb[i], Jpb[j]) - pairing(basis[i], basis[j]) for i in range(8) for j in range(i, 8)])
    gram = generalized_metric_gram(geom)
    eig = np.linalg.eigvalsh(gram)
    diag = np.diag(gram)
    rep.add_bool("G positive on real frame at (1,0)", bool(np.all(diag > 0) and eig.min() > 0),
                 f"diag={diag.tolist()} min_eig={eig.min():.3e}")
    return rep


def real_gk_frame(geom: HopfGeometry) -> list[GenSection]:
    """Eight real sections: real frame directions of the minus frame and their duals."""
    out = []
    for V in (geom.X1, geom.X2):
        out.append(GenSection(V + V.conj()))
        out.append(GenSection((V - V.conj()).scale(I)))
    for a in (geom.alpha1, geom.alpha2):
        out.append(GenSection(form=a + a.conj()))
        out.append(GenSection(form=(a - a.conj()).scale(I)))
    return out


def generalized_metric_gram(geom: HopfGeometry, point: tuple[complex, complex] = SAMPLE_POINT) -> np.ndarray:
    """Gram matrix of ``G(s,t) = <-J J' s, t>`` on the real frame, evaluated at ``point``."""
    J, Jp = gk_structures(geom)
    frame = real_gk_frame(geom)
    Gs = [-J(Jp(s)) for s in frame]
    vals = geom.numeric_values()
    n = len(frame)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            v = complex(pairing(Gs[i], frame[j]).evaluate(*point, vals))
            out[i, j] = v.real
    return out


def verify_prop_4_4(geom: HopfGeometry | None = None) -> VerificationReport:
    geom = geom or standard_hopf()
    rep = VerificationReport("Bismut flatness of invariant frames")
    dirs = geom.real_directions()
    Ys = frame_vectors("plus")
    Xs = frame_vectors("minus")
    rep.add("∇⁺Y_k, ∇⁺Y̅_k", [bismut(geom, V, Y, "plus") for V in dirs for Y in Ys])
    rep.add("∇⁻X_k, ∇⁻X̅_k", [bismut(geom, V, X, "minus") for V in dirs for X in Xs])
    names = ("", "̅")
    for j in (1, 2):
        for k in (1, 2):
            for cx in (0, 1):
                for cy in (0, 1):
                    fx, fy = geom.frak_X(j), geom.frak_Y(k)
                    if cx:
                        fx = fx.conj()
                    if cy:
                        fy = fy.conj()
                    rep.add(f"𝔛{names[cx]}{j} * 𝔜{names[cy]}{k}", courant(fx, fy, geom.gamma))
    for j, (X, a) in enumerate(((geom.X1, geom.alpha1), (geom.X2, geom.alpha2)), start=1):
        rep.add(f"d(α̅{j}/2π) − ι_X{j}γ", ext_d(a.conj().scale(1 / TWO_PI)) - interior(X, geom.gamma))
    # Lie derivative facts used along the way
    rep.add("[X_j, Y_k], [X_j, Y̅_k]", [lie_bracket(X, Y) for X in (geom.X1, geom.X2) for Y in Ys])
    rep.add("ℒ_X β, ℒ_Y α", [lie_derivative(X, b) for X in (geom.X1, geom.X2) for b in frame_coforms("plus")]
            + [lie_derivative(Y, a) for Y in (geom.Y1, geom.Y2) for a in frame_coforms("minus")])
    # induced connection on the dual coframes: delta-bar operators on frame one-forms
    ybar = frame_vectors("plus")[2:]
    xbar = frame_vectors("minus")[2:]
    rep.add("δ̄₊α̅_i", [bismut_coform(geom, V, a.conj(), "minus") for V in ybar for a in (geom.alpha1, geom.alpha2)])
    rep.add("δ̄₋β̅_i", [bismut_coform(geom, V, b.conj(), "plus") for V in xbar for b in (geom.beta1, geom.beta2)])
    return rep


def verify_ell_spans(geom: HopfGeometry | None = None) -> VerificationReport:
    """``l- = {X + i i_X omega-}`` and ``l+ = {X - i i_X omega+}`` against the spanning sections."""
    geom = geom or standard_hopf()
    rep = VerificationReport("isotropic subbundles")
    diffs_m, diffs_p = [], []
    for j, X in ((1, geom.X1), (2, geom.X2)):
        ell = GenSection(X, interior(X, geom.omega_minus).scale(I))
        diffs_m.append(ell - geom.frak_X(j))
    for j, Y in ((1, geom.Y1), (2, geom.Y2)):
        ell = GenSection(Y, -interior(Y, geom.omega_plus).scale(I))
        diffs_p.append(ell - geom.frak_Y(j))
    rep.add("ℓ₋ = span(𝔛₁, 𝔛₂)", diffs_m)
    rep.add("ℓ₊ = span(𝔜₁, 𝔜₂)", diffs_p)
    # graph description and isotropy
    rep.add("𝔛_j ∈ C₋, 𝔜_j ∈ C₊", [geom.project(geom.frak_X(j), "minus") - geom.frak_X(j) for j in (1, 2)]
            + [geom.project(geom.frak_Y(j), "plus") - geom.frak_Y(j) for j in (1, 2)])
    rep.add("⟨C₊, C₋⟩", [pairing(geom.frak_X(j), geom.frak_Y(k)) for j in (1, 2) for k in (1, 2)]
            + [pairing(geom.frak_X(j).conj(), geom.frak_Y(k)) for j in (1, 2) for k in (1, 2)])
    rep.add("ℓ± isotropic", [pairing(geom.frak_X(j), geom.frak_X(k)) for j in (1, 2) for k in (1, 2)]
            + [pairing(geom.frak_Y(j), geom.frak_Y(k)) for j in (1, 2) for k in (1, 2)])
    return rep


def verify_all(geom: HopfGeometry | None = None, table: Mapping[str, CoordForm] | None = None) -> VerificationReport:
    geom = geom or standard_hopf()
    rep = VerificationReport("Hopf surface identity suite")
    for part in (
        verify_frames(geom),
        verify_lemma_4_1(geom, table),
        verify_lemma_4_2(geom),
        verify_assumption_1_1(geom),
        verify_ell_spans(geom),
        verify_prop_4_4(geom),
        verify_gk_reconstruction(geom),
    ):
        rep = rep.merge(part)
    return rep
