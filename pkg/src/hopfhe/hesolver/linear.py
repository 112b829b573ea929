"""The scalar operator ``P^alpha`` and the line-bundle Hermitian-Einstein solve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import InvariantField, SpectralGrid
from .reduce import ReducedOperator


def apply_P(op: ReducedOperator, grid: SpectralGrid, k: np.ndarray) -> np.ndarray:
    """``P^alpha k = a2 k'' + a1 k'`` for a scalar profile (real in, real out)."""
    a2, a1 = op.scalar_coefficients()
    return a2 * grid.d2(k) + a1 * grid.d1(k)


def p_alpha_matrix(op: ReducedOperator, grid: SpectralGrid) -> np.ndarray:
    a2, a1 = op.scalar_coefficients()
    return a2 * grid.d2_matrix() + a1 * grid.d1_matrix()


def p_alpha_symbol(op: ReducedOperator, grid: SpectralGrid) -> np.ndarray:
    a2, a1 = op.scalar_coefficients()
    w = grid.omega.copy()
    w1 = 1j * w
    if grid.n % 2 == 0:
        w1[grid.n // 2] = 0.0
        w[grid.n // 2] = np.pi * grid.n / grid.period
    return -a2 * w**2 + a1 * w1


def kernel_report(op: ReducedOperator, grid: SpectralGrid, rtol: float = 1e-10) -> dict[str, float]:
    """Singular values of the discretized ``P^alpha``: kernel dimension and the gap."""
    s = np.linalg.svd(p_alpha_matrix(op, grid), compute_uv=False)[::-1]
    kernel_dim = int(np.sum(s <= rtol * s[-1]))
    return {"kernel_dim": kernel_dim, "sigma_min": float(s[0]), "sigma_2": float(s[1]), "sigma_max": float(s[-1])}


@dataclass(frozen=True)
class LineSolveResult:
    k: InvariantField
    lam: float
    residual: float


def solve_line_he(K0_profile: InvariantField | np.ndarray, op: ReducedOperator,
                  grid: SpectralGrid | None = None) -> LineSolveResult:
    """Conformal factor making ``e^k h0`` Hermitian-Einstein on a line bundle.

    Solves ``P^alpha k = -(f - lambda)`` with ``lambda`` the mean of ``f`` and
    ``k`` normalized to mean zero.
    """
    if isinstance(K0_profile, InvariantField):
        grid = K0_profile.grid
        f = K0_profile.scalar_values()
    else:
        if grid is None:
            raise ValueError("grid required for a raw profile")
        f = np.asarray(K0_profile, dtype=float)
    lam = float(np.mean(f))
    rhs = -(f - lam)
    sym = p_alpha_symbol(op, grid)
    fh = np.fft.fft(rhs)
    kh = np.zeros_like(fh)
    nz = np.abs(sym) > 0
    nz[0] = False
    kh[nz] = fh[nz] / sym[nz]
    k = np.fft.ifft(kh).real
    res = float(np.max(np.abs(apply_P(op, grid, k) + (f - lam))))
    return LineSolveResult(InvariantField.scalar(grid, k), lam, res)
