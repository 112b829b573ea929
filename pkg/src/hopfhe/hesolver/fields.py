"""Periodic matrix fields on the reduced domain ``t in [0, T)``.

Fields are sampled on ``N`` equispaced nodes and differentiated spectrally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EIG_CLAMP = 1e-14


@dataclass(frozen=True)
class SpectralGrid:
    """Equispaced nodes ``t_j = j T / N`` with trigonometric differentiation."""

    n: int
    period: float
    filter_rtol: float = 1e-13

    def __post_init__(self) -> None:
        if self.n < 4:
            raise ValueError("grid needs at least 4 nodes")
        if not self.period > 0:
            raise ValueError("period must be positive")

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.n) * self.period / self.n

    @property
    def omega(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.period / self.n)

    def _apply(self, values: np.ndarray, symbol: np.ndarray, filtered: bool = False) -> np.ndarray:
        v = np.asarray(values)
        shape = (-1,) + (1,) * (v.ndim - 1)
        c = np.fft.fft(v, axis=0)
        if filtered and self.filter_rtol > 0:
            # drop round-off modes so that constant fields differentiate to exactly 0
            mag = np.abs(c)
            c = np.where(mag < self.filter_rtol * mag.max(axis=0, keepdims=True), 0.0, c)
            c[0] = np.fft.fft(v, axis=0)[0]
        out = np.fft.ifft(c * symbol.reshape(shape), axis=0)
        return out.real if np.isrealobj(v) else out

    def d1(self, values: np.ndarray, filtered: bool = False) -> np.ndarray:
        w = self.omega.astype(complex) * 1j
        if self.n % 2 == 0:
            w[self.n // 2] = 0.0
        return self._apply(values, w, filtered)

    def d1f(self, values: np.ndarray) -> np.ndarray:
        """``d1`` with modes below ``filter_rtol`` of the mean mode removed."""
        return self.d1(values, True)

    def d2(self, values: np.ndarray) -> np.ndarray:
        w = self.omega.copy()
        if self.n % 2 == 0:
            w[self.n // 2] = np.pi * self.n / self.period
        return self._apply(values, -(w**2).astype(complex))

    def d1_matrix(self) -> np.ndarray:
        return self.d1(np.eye(self.n))

    def d2_matrix(self) -> np.ndarray:
        return self.d2(np.eye(self.n))

    def mean(self, values: np.ndarray) -> np.ndarray:
        return np.mean(values, axis=0)

    def interpolate(self, values: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Trigonometric interpolant evaluated at arbitrary ``t`` (first axis)."""
        v = np.asarray(values)
        c = np.fft.fft(v, axis=0) / self.n
        w = self.omega.copy()
        if self.n % 2 == 0:
            # split the Nyquist mode symmetrically so real data stays real
            k = self.n // 2
            c = np.concatenate([c, c[k:k + 1] / 2], axis=0)
            c[k] = c[k] / 2
            w = np.concatenate([w, [np.pi * self.n / self.period]])
        phase = np.exp(1j * np.outer(np.asarray(t), w))
        out = np.tensordot(phase, c, axes=(1, 0))
        return out.real if np.isrealobj(v) else out

    def refine(self, factor: int = 2) -> "SpectralGrid":
        return SpectralGrid(self.n * factor, self.period)


def fd_d1(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order periodic central difference along the first axis."""
    v = np.asarray(values)
    r = lambda k: np.roll(v, -k, axis=0)  # noqa: E731
    return (-r(2) + 8 * r(1) - 8 * r(-1) + r(-2)) / (12 * h)


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def herm_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.linalg.eigh(hermitian_part(a))


def herm_func(a: np.ndarray, fn) -> np.ndarray:
    w, u = herm_eig(a)
    return (u * fn(w)[..., None, :]) @ dagger(u)


def expm_h(a: np.ndarray) -> np.ndarray:
    return herm_func(a, np.exp)


def logm_h(f: np.ndarray) -> np.ndarray:
    """Matrix log of a positive Hermitian field; eigenvalues clamped at ``EIG_CLAMP``."""
    w, u = herm_eig(f)
    if np.any(w <= 0):
        raise ValueError("field is not positive definite")
    return (u * np.log(np.maximum(w, EIG_CLAMP))[..., None, :]) @ dagger(u)


def powm_h(f: np.ndarray, s: float) -> np.ndarray:
    w, u = herm_eig(f)
    return (u * np.maximum(w, EIG_CLAMP)[..., None, :] ** s) @ dagger(u)


def dexp_weights(w: np.ndarray) -> np.ndarray:
    """Divided differences of ``exp`` on eigenvalue pairs (Daleckii-Krein kernel)."""
    a = w[..., :, None]
    b = w[..., None, :]
    diff = a - b
    ea, eb = np.exp(a), np.exp(b)
    close = np.abs(diff) < 1e-10
    safe = np.where(close, 1.0, diff)
    return np.where(close, np.exp(0.5 * (a + b)) * (1 + diff**2 / 24), (ea - eb) / safe)


def frob(a: np.ndarray) -> np.ndarray:
    """Pointwise Frobenius norm of a matrix field."""
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))


def opnorm(a: np.ndarray) -> np.ndarray:
    return np.linalg.norm(a, ord=2, axis=(-2, -1))


@dataclass
class InvariantField:
    """Samples of an ``r x r`` Hermitian matrix function of ``t``."""

    grid: SpectralGrid
    values: np.ndarray
    positive: bool = False

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 1:
            v = v[:, None, None]
        if v.shape[0] != self.grid.n or v.shape[1] != v.shape[2]:
            raise ValueError("values must have shape (N, r, r)")
        if np.max(np.abs(v - dagger(v)), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(v))):
            raise ValueError("field is not Hermitian")
        self.values = hermitian_part(v)
        if self.positive and np.min(np.linalg.eigvalsh(self.values)) <= 0:
            raise ValueError("field is not positive definite")

    @property
    def rank(self) -> int:
        return self.values.shape[1]

    @classmethod
    def identity(cls, grid: SpectralGrid, rank: int) -> "InvariantField":
        return cls(grid, np.broadcast_to(np.eye(rank, dtype=complex), (grid.n, rank, rank)).copy(), True)

    @classmethod
    def scalar(cls, grid: SpectralGrid, values: np.ndarray, positive: bool = False) -> "InvariantField":
        return cls(grid, np.asarray(values, dtype=complex).reshape(-1, 1, 1), positive)

    def scalar_values(self) -> np.ndarray:
        if self.rank != 1:
            raise ValueError("not a scalar field")
        return self.values[:, 0, 0].real

    def log(self) -> np.ndarray:
        return logm_h(self.values)
