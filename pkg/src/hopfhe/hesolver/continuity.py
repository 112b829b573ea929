"""Continuity method for the perturbed alpha-Hermitian-Einstein equation.

For ``eps`` decreasing from ``eps0`` the equation::

    L_eps(f) = K0 + sum_s w_s (c_d G_s' + c_0 G_s + c_m [M_s, G_s]) + eps log f = 0

is solved by damped Gauss-Newton in the logarithm ``H = log f``: the unknowns are
the ``r^2`` real coordinates of ``H`` per node and the equations are the real and
imaginary parts of ``L_eps``.  (``f L_eps(f)`` is Hermitian only up to
discretization error and vanishes as ``f -> 0``, so it is not used as residual.)
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from ..bundles import BundleStructure
from ..hopf import HopfGeometry, standard_hopf
from .fields import (
    InvariantField,
    SpectralGrid,
    dagger,
    dexp_weights,
    expm_h,
    fd_d1,
    frob,
    herm_eig,
    hermitian_part,
    logm_h,
    powm_h,
)
from .linear import solve_line_he
from .reduce import BackgroundCurvature, ReducedOperator, background_mean_curvature, reduce_operators


TOL_CAP = 1e-6


class SolverConfigError(ValueError):
    """Invalid solver configuration."""


class NonConvergence(RuntimeError):
    """Newton failed at the starting value of eps."""


@dataclass(frozen=True)
class SolverConfig:
    """Continuity-method parameters; JSON keys match the field names."""

    alpha: float = 0.5
    N: int = 64
    eps0: float = 1.0
    ratio: float = 0.7
    eps_min: float = 1e-4
    newton_tol: float = 1e-10
    blowup_cap: float = 20.0
    max_newton: int = 40
    max_refine: int = 6
    cutoff: float = 0.5

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise SolverConfigError("alpha must lie in (0, 1)")
        if self.N < 4:
            raise SolverConfigError("N must be at least 4")
        if not self.eps0 > 0 or not 0 < self.eps_min <= self.eps0:
            raise SolverConfigError("need 0 < eps_min <= eps0")
        if not 0 < self.ratio < 1:
            raise SolverConfigError("ratio must lie in (0, 1)")
        if not self.newton_tol > 0 or not self.blowup_cap > 0:
            raise SolverConfigError("newton_tol and blowup_cap must be positive")
        if not 0 < self.cutoff < 1:
            raise SolverConfigError("cutoff must lie in (0, 1)")

    @classmethod
    def from_json(cls, text: str | dict) -> "SolverConfig":
        data = json.loads(text) if isinstance(text, str) else dict(text)
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise SolverConfigError(f"unknown solver config keys: {sorted(extra)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise SolverConfigError(str(exc)) from exc

    def schedule(self) -> list[float]:
        out = []
        e = self.eps0
        while e > self.eps_min * (1 + 1e-12):
            out.append(e)
            e *= self.ratio
        out.append(self.eps_min)
        return out


# ---------------------------------------------------------------------------
# the operator


def _K0_field(K0: np.ndarray | BackgroundCurvature | InvariantField, grid: SpectralGrid) -> np.ndarray:
    if isinstance(K0, BackgroundCurvature):
        K0 = K0.K0_numeric()
    if isinstance(K0, InvariantField):
        return K0.values
    K0 = np.asarray(K0, dtype=complex)
    if K0.ndim == 2:
        return np.broadcast_to(K0, (grid.n,) + K0.shape)
    return K0


def curvature_term(op: ReducedOperator, f: np.ndarray, finv: np.ndarray, d1: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """``sum_s w_s i Lambda_s dbar_s(f^{-1} d_{s,0} f)`` for the sampled field ``f``."""
    fp = d1(f)
    out = np.zeros_like(f)
    for w, c_d, c_0, c_m, M in op.sides():
        Ms = M.conj().T
        G = finv @ (fp - (Ms @ f - f @ Ms))
        out = out + w * (c_d * d1(G) + c_0 * G + c_m * (M @ G - G @ M))
    return out


def L_epsilon(f: InvariantField, eps: float, op: ReducedOperator, K0) -> np.ndarray:
    """Pointwise defect of the perturbed equation (matrix log by eigendecomposition)."""
    if np.min(np.linalg.eigvalsh(f.values)) <= 0:
        raise ValueError("f must be positive definite at every node")
    grid = f.grid
    fv = f.values
    finv = np.linalg.inv(fv)
    return _K0_field(K0, grid) + curvature_term(op, fv, finv, grid.d1) + eps * logm_h(fv)


def L_hat(f: InvariantField, eps: float, op: ReducedOperator, K0) -> np.ndarray:
    return f.values @ L_epsilon(f, eps, op, K0)


def mean_curvature_defect(f: InvariantField, op: ReducedOperator, K0) -> np.ndarray:
    """``K_alpha^h - lambda Id`` for ``h = h0 f``."""
    fv = f.values
    return _K0_field(K0, f.grid) + curvature_term(op, fv, np.linalg.inv(fv), f.grid.d1)


def fd_residual(f: InvariantField, eps: float, op: ReducedOperator, K0, factor: int = 2) -> float:
    """Sup-norm of ``L_eps`` on a ``factor``-times finer grid with finite differences."""
    g = f.grid
    fine = g.refine(factor)
    fv = hermitian_part(g.interpolate(f.values, fine.t))
    K0f = _K0_field(K0, g)
    K0v = hermitian_part(g.interpolate(np.asarray(K0f), fine.t))
    h = fine.period / fine.n
    d1 = lambda v: fd_d1(v, h)  # noqa: E731
    L = K0v + curvature_term(op, fv, np.linalg.inv(fv), d1) + eps * logm_h(fv)
    return float(np.max(frob(L)))


# ---------------------------------------------------------------------------
# Hermitian coordinates


def _herm_basis(r: int) -> np.ndarray:
    basis = []
    for i in range(r):
        E = np.zeros((r, r), dtype=complex)
        E[i, i] = 1
        basis.append(E)
    for i in range(r):
        for j in range(i + 1, r):
            E = np.zeros((r, r), dtype=complex)
            E[i, j] = E[j, i] = 1
            basis.append(E)
            E = np.zeros((r, r), dtype=complex)
            E[i, j] = 1j
            E[j, i] = -1j
            basis.append(E)
    return np.array(basis)


def _coords(A: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Real coordinates of Hermitian ``A[..., r, r]`` -> ``[..., r^2]``."""
    norms = np.einsum("kij,kij->k", basis.conj(), basis).real
    return np.einsum("kij,...ij->...k", basis.conj(), A).real / norms


@dataclass
class _State:
    H: np.ndarray
    f: np.ndarray
    finv: np.ndarray
    L: np.ndarray
    F: np.ndarray


class _Newton:
    def __init__(self, op: ReducedOperator, grid: SpectralGrid, K0: np.ndarray, rank: int):
        self.op = op
        self.grid = grid
        self.K0 = K0
        self.r = rank
        self.basis = _herm_basis(rank)
        self.cap = TOL_CAP * (1.0 + float(np.max(frob(K0))))

    def state(self, H: np.ndarray, eps: float) -> _State:
        H = hermitian_part(H)
        # overflow shows up as a non-finite residual, which the caller rejects
        with np.errstate(over="ignore", invalid="ignore"):
            f = expm_h(H)
            finv = expm_h(-H)
            L = self.K0 + curvature_term(self.op, f, finv, self.grid.d1f) + eps * H
            return _State(H, f, finv, L, f @ L)

    def jacobian(self, st: _State, eps: float) -> np.ndarray:
        n, r = self.grid.n, self.r
        nb = len(self.basis)
        w, U = herm_eig(st.H)
        Gam = dexp_weights(w)  # (n, r, r)
        # directions: unknown (node j, basis k) -> field with B_k at node j
        nd = n * nb
        dH = np.zeros((n, nd, r, r), dtype=complex)
        for j in range(n):
            dH[j, j * nb:(j + 1) * nb] = self.basis
        Ud = dagger(U)[:, None]
        Uu = U[:, None]
        df = Uu @ (Gam[:, None] * (Ud @ dH @ Uu)) @ Ud
        d1 = self.grid.d1
        dfp = d1(df)
        fp = d1(st.f)
        f, finv = st.f[:, None], st.finv[:, None]
        dL = eps * dH
        for wgt, c_d, c_0, c_m, M in self.op.sides():
            Ms = M.conj().T
            C = fp[:, None] - (Ms @ f - f @ Ms)
            G = finv @ C
            dC = dfp - (Ms @ df - df @ Ms)
            dG = -(finv @ df @ G) + finv @ dC
            dL = dL + wgt * (c_d * d1(dG) + c_0 * dG + c_m * (M @ dG - dG @ M))
        # rows: residual (node i, entry, re/im); columns: directions
        J = np.concatenate([dL.real.reshape(n, nd, r * r), dL.imag.reshape(n, nd, r * r)], axis=2)
        return np.transpose(J, (0, 2, 1)).reshape(n * 2 * r * r, nd)

    @staticmethod
    def _vec(L: np.ndarray) -> np.ndarray:
        n, r = L.shape[0], L.shape[1]
        return np.concatenate([L.real.reshape(n, r * r), L.imag.reshape(n, r * r)], axis=1).reshape(-1)

    def tolerance(self, H: np.ndarray, tol: float) -> float:
        """``tol`` or the round-off level reachable at this conditioning, whichever is larger.

        ``L`` depends on ``H`` through conjugation by ``f``, which amplifies
        round-off by ``exp(spread of log f)``.  Capped at ``TOL_CAP * (1 + m_K)``
        so that a large spread never turns into acceptance of a crude iterate.
        """
        w = np.linalg.eigvalsh(H)
        spread = float(np.max(w[:, -1] - w[:, 0])) if w.shape[1] > 1 else 0.0
        m_K = float(np.max(frob(self.K0)))
        scaled = 1e3 * np.finfo(float).eps * math.exp(min(spread, 700.0)) * (1.0 + m_K)
        return max(tol, min(scaled, self.cap))

    def solve(self, H0: np.ndarray, eps: float, tol: float, max_iter: int) -> tuple[_State, int, bool]:
        st = self.state(H0, eps)
        nb = len(self.basis)
        for it in range(max_iter + 1):
            res = float(np.max(frob(st.L)))
            if not np.isfinite(res):
                return st, it, False
            if res <= self.tolerance(st.H, tol):
                return st, it, True
            if it == max_iter:
                break
            J = self.jacobian(st, eps)
            rhs = -self._vec(st.L)
            step = np.linalg.lstsq(J, rhs, rcond=None)[0]
            dH = np.einsum("nk,kij->nij", step.reshape(self.grid.n, nb), self.basis)
            base = np.linalg.norm(rhs)
            # stationary point of the least-squares problem: the remaining residual is the
            # part outside the range of J (non-Hermitian discretization error)
            if np.linalg.norm(J @ step - rhs) > 0.5 * base and res <= self.cap:
                return st, it, True
            t = 1.0
            accepted = False
            for _ in range(30):
                trial = self.state(st.H + t * dH, eps)
                tn = np.linalg.norm(self._vec(trial.L))
                if np.isfinite(tn) and tn <= (1 - 1e-4 * t) * base:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                # no descent left: accept only if already at the round-off floor
                return st, it, res <= self.cap
            if tn > 0.99 * base and res <= self.cap:
                return trial, it + 1, True  # stagnation at the round-off floor
            st = trial
        return st, max_iter, False


# ---------------------------------------------------------------------------
# trace


@dataclass
class StepRecord:
    eps: float
    newton_iterations: int
    residual: float
    tolerance: float
    m_eps: float
    m_eps_l2: float
    m_eps_op: float
    logdet: float
    logdet_drift: float
    m_bound: float
    bound_ok: bool
    hermitian_positive: bool
    he_defect: float
    cert_residual: float


@dataclass
class DestabilizerReport:
    projector: np.ndarray
    rank: int
    idempotency: float
    selfadjointness: float
    weak_holomorphy_plus: float
    weak_holomorphy_minus: float
    mu_V: float
    mu_F: float
    line: np.ndarray | None = None

    def angle_to(self, v: np.ndarray) -> float:
        """Principal angle between the rank-1 image of ``pi`` and ``span(v)``."""
        if self.line is None:
            raise ValueError("projector is not of rank 1")
        v = np.asarray(v, dtype=complex)
        c = abs(np.vdot(self.line, v)) / (np.linalg.norm(self.line) * np.linalg.norm(v))
        return float(math.acos(min(1.0, c)))

    def to_dict(self) -> dict[str, Any]:
        P = self.projector
        return {
            "rank": self.rank,
            "projector_re": P.real.tolist(),
            "projector_im": P.imag.tolist(),
            "idempotency": self.idempotency,
            "selfadjointness": self.selfadjointness,
            "weak_holomorphy_plus": self.weak_holomorphy_plus,
            "weak_holomorphy_minus": self.weak_holomorphy_minus,
            "mu_alpha_V": self.mu_V,
            "mu_alpha_F": self.mu_F,
            "line_re": None if self.line is None else self.line.real.tolist(),
            "line_im": None if self.line is None else self.line.imag.tolist(),
        }


@dataclass
class ContinuityTrace:
    """Per-step records of one continuity run."""

    config: SolverConfig
    lam: float
    m_K: float
    steps: list[StepRecord] = field(default_factory=list)
    blowup: bool = False
    blowup_reason: str = ""
    converged_start: bool = True
    final_H: np.ndarray | None = None
    grid: SpectralGrid | None = None
    op: ReducedOperator | None = None
    K0: np.ndarray | None = None
    mu_V: float = 0.0
    destabilizer: DestabilizerReport | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def final_eps(self) -> float:
        return self.steps[-1].eps if self.steps else float("nan")

    def final_field(self) -> InvariantField:
        return InvariantField(self.grid, expm_h(self.final_H), positive=True)

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": asdict(self.config),
            "lambda": self.lam,
            "m_K": self.m_K,
            "mu_alpha_V": self.mu_V,
            "converged_start": self.converged_start,
            "blowup": self.blowup,
            "blowup_reason": self.blowup_reason,
            "steps": [asdict(s) for s in self.steps],
            "destabilizer": None if self.destabilizer is None else self.destabilizer.to_dict(),
            "notes": list(self.notes),
        }

    def to_json(self, **kw: Any) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps", "residual", "m_eps", "logdet", "m_eps_l2", "newton_iterations"])
        for s in self.steps:
            w.writerow([repr(s.eps), repr(s.residual), repr(s.m_eps), repr(s.logdet), repr(s.m_eps_l2), s.newton_iterations])
        return buf.getvalue()


def _record(nt: _Newton, st: _State, eps: float, its: int, logdet0: np.ndarray | None, m_K: float,
            K0: np.ndarray, grid: SpectralGrid, tol: float) -> StepRecord:
    nrm = frob(st.H)
    logdet = float(np.max(np.abs(np.trace(st.H, axis1=1, axis2=2).real)))
    drift = 0.0 if logdet0 is None else float(np.max(np.abs(np.trace(st.H, axis1=1, axis2=2).real - logdet0)))
    evals = np.linalg.eigvalsh(st.f)
    herm = float(np.max(np.abs(st.f - dagger(st.f)))) < 1e-12 * max(1.0, float(np.max(np.abs(st.f))))
    field_ = InvariantField(grid, st.f)
    he = float(np.max(frob(st.L - eps * st.H)))
    m = float(np.max(nrm))
    res = float(np.max(frob(st.L)))
    # acceptance bound actually used: scaled tolerance, or the cap for a stationary stop
    tol_used = nt.tolerance(st.H, tol)
    if res > tol_used:
        tol_used = nt.cap
    return StepRecord(
        eps=eps,
        newton_iterations=its,
        residual=res,
        tolerance=tol_used,
        m_eps=m,
        m_eps_l2=float(np.sqrt(np.mean(nrm**2))),
        m_eps_op=float(np.max(np.abs(np.linalg.eigvalsh(st.H)))),
        logdet=logdet,
        logdet_drift=drift,
        m_bound=m_K / eps,
        # for a solution with residual R the bound reads eps*m <= m_K + R
        bound_ok=bool(m <= (m_K + res) / eps * (1 + 1e-9) + 1e-12),
        hermitian_positive=bool(herm and np.min(evals) > 0),
        he_defect=he,
        cert_residual=fd_residual(field_, eps, nt.op, K0),
    )


def newton_continuation(
    s: BundleStructure,
    alpha: float,
    config: SolverConfig | None = None,
    geom: HopfGeometry | None = None,
    callback: Callable[[StepRecord], None] | None = None,
    H_init: np.ndarray | None = None,
) -> ContinuityTrace:
    """Run the continuity method from ``eps0`` down to ``eps_min`` or until blow-up."""
    cfg = config or SolverConfig(alpha=float(alpha))
    if abs(cfg.alpha - float(alpha)) > 0:
        cfg = SolverConfig(**{**asdict(cfg), "alpha": float(alpha)})
    geom = geom or standard_hopf()
    op = reduce_operators(geom, s, alpha)
    bg = background_mean_curvature(s, alpha, geom, op)
    grid = SpectralGrid(cfg.N, geom.period)
    r = s.rank
    K0c = bg.K0_numeric()
    # conformal normalization of h0 so that tr K0 has zero mean at every node
    tr_profile = np.real(np.trace(_K0_field(K0c, grid), axis1=1, axis2=2)) / r
    conf = solve_line_he(tr_profile, op, grid)
    P_k = -(tr_profile - conf.lam)
    K0 = np.array(_K0_field(K0c, grid)) + (P_k - tr_profile + conf.lam)[:, None, None] * np.eye(r)
    m_K = float(np.max(frob(K0)))
    from ..bundles import degrees

    dV = degrees(s, geom=geom)
    dp, dm = dV.numeric(op.values)
    mu_V = (float(alpha) * dp.real + (1 - float(alpha)) * dm.real) / r
    trace = ContinuityTrace(cfg, bg.lam_numeric + conf.lam, m_K, grid=grid, op=op, K0=K0, mu_V=mu_V)
    trace.notes.append("solutions sought within t-invariant fields")
    nt = _Newton(op, grid, K0, r)
    H = np.zeros((grid.n, r, r), dtype=complex) if H_init is None else np.array(H_init, dtype=complex)
    logdet0 = None
    prev_eps = None
    for eps in cfg.schedule():
        targets = [eps]
        ok = False
        refinements = 0
        while targets:
            e = targets[0]
            st, its, ok = nt.solve(H, e, cfg.newton_tol, cfg.max_newton)
            if not ok:
                if prev_eps is None:
                    trace.converged_start = False
                    trace.blowup_reason = f"Newton did not converge at eps0 = {e:g}"
                    trace.final_H = st.H
                    return trace
                if refinements >= cfg.max_refine:
                    break
                refinements += 1
                targets.insert(0, math.sqrt(prev_eps * e))
                continue
            targets.pop(0)
            H = st.H
            prev_eps = e
            if logdet0 is None:
                logdet0 = np.trace(st.H, axis1=1, axis2=2).real.copy()
            rec = _record(nt, st, e, its, logdet0, m_K, K0, grid, cfg.newton_tol)
            trace.steps.append(rec)
            if callback is not None:
                callback(rec)
            if rec.m_eps > cfg.blowup_cap:
                break
        trace.final_H = H
        if not ok:
            trace.blowup = True
            trace.blowup_reason = f"Newton diverged below eps = {prev_eps:g}"
            break
        if trace.steps[-1].m_eps > cfg.blowup_cap:
            trace.blowup = True
            trace.blowup_reason = f"m_eps exceeded cap {cfg.blowup_cap:g} at eps = {trace.steps[-1].eps:g}"
            break
    if trace.blowup:
        trace.destabilizer = destabilizer_extract(trace)
    return trace


# ---------------------------------------------------------------------------
# destabilizer


def destabilizer_extract(trace: ContinuityTrace, cutoff: float | None = None) -> DestabilizerReport:
    """Spectral-cutoff surrogate of the weak limit of ``rho(eps) f_eps``."""
    if not trace.blowup or trace.final_H is None:
        raise ValueError("destabilizer extraction needs a blown-up trace")
    cutoff = trace.config.cutoff if cutoff is None else cutoff
    grid, op = trace.grid, trace.op
    H = trace.final_H
    M_eps = float(np.max(np.linalg.eigvalsh(H)))
    rho_f = expm_h(H - M_eps * np.eye(H.shape[1]))
    w, U = herm_eig(rho_f)
    small = (w < cutoff * float(np.max(w))).astype(float)
    pi_nodes = (U * small[..., None, :]) @ dagger(U)
    rk = int(round(float(np.mean(np.sum(small, axis=1)))))
    r = H.shape[1]
    if not 0 < rk < r:
        raise ValueError(f"degenerate extraction: rank {rk}")
    # smooth across nodes: mean then re-project onto the top-rk eigenspace
    wm, Um = np.linalg.eigh(hermitian_part(np.mean(pi_nodes, axis=0)))
    V = Um[:, -rk:]
    P = V @ V.conj().T
    dpi = grid.d1(pi_nodes)
    Id = np.eye(r)
    weak = []
    norms_sq = []
    for wgt, _c_d, _c_0, _c_m, M in op.sides():
        dbar_pi = dpi + (M @ pi_nodes - pi_nodes @ M)
        weak.append(float(np.max(frob((Id - pi_nodes) @ dbar_pi))))
        Ms = M.conj().T
        d_pi = dpi - (Ms @ pi_nodes - pi_nodes @ Ms)
        norms_sq.append((wgt, 2 * math.pi * frob(d_pi) ** 2))
    integrand = np.real(np.trace(trace.K0 @ pi_nodes, axis1=1, axis2=2))
    for wgt, nsq in norms_sq:
        integrand = integrand - wgt * nsq
    mu_F = trace.mu_V + float(np.mean(integrand)) / (2 * math.pi * rk)
    line = V[:, 0] if rk == 1 else None
    return DestabilizerReport(
        projector=P,
        rank=rk,
        idempotency=float(np.max(np.abs(P @ P - P))),
        selfadjointness=float(np.max(np.abs(P - P.conj().T))),
        weak_holomorphy_plus=weak[0],
        weak_holomorphy_minus=weak[1],
        mu_V=trace.mu_V,
        mu_F=mu_F,
        line=line,
    )


def fractional_power(f: InvariantField, sigma: float) -> np.ndarray:
    """``f^sigma`` nodewise, eigenvalues clamped."""
    return powm_h(f.values, sigma)
