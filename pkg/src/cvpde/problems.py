"""Worked PDE instances: 3-D Poisson with a Gaussian charge, and the 1-D
oscillator operator -d^2/dx^2 + x^2 with a coherent-state source.

Both carry a closed-form exact solution and an approximate solution obtained
by replacing 1/a with a filter F(a) on every eigencomponent of the source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import FilterSpec, eval_filter
from .numerics import erf, integrate_semi_infinite
from .probability import SpectralDecomposition

__all__ = [
    "PoissonGaussianInstance",
    "QhoCoherentInstance",
    "poisson_approx",
    "poisson_exact",
    "qho_approx",
    "qho_exact",
    "qho_spectral",
]

SINC_TAYLOR_CUTOFF = 1e-8
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PoissonGaussianInstance:
    """-laplacian psi = g(sigma, r) in three dimensions."""

    sigma: float
    dimension: int = 3

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.dimension != 3:
            raise ValueError("only the three-dimensional Poisson problem is supported")

    @property
    def prefactor(self) -> float:
        return 1.0 / math.sqrt(2.0 * math.pi**2.5 * self.sigma**3)


def poisson_exact(inst: PoissonGaussianInstance, r):
    """Exact radial potential erf(sigma r / sqrt 2) / (r sqrt(2 sqrt(pi) sigma^3)).

    r = 0 returns the finite limit sigma sqrt(2/pi) / sqrt(2 sqrt(pi) sigma^3).
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("r must be nonnegative")
    s = inst.sigma
    norm = 1.0 / math.sqrt(2.0 * math.sqrt(math.pi) * s**3)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(r_arr > 0, erf(s * r_arr / SQRT2) / np.where(r_arr > 0, r_arr, 1.0), s * math.sqrt(2.0 / math.pi))
    out = norm * val
    return float(out) if out.ndim == 0 else out


def _sinc2(kr: np.ndarray) -> np.ndarray:
    """2 sin(kr)/(kr) with its Taylor value near zero."""
    small = np.abs(kr) < SINC_TAYLOR_CUTOFF
    safe = np.where(small, 1.0, kr)
    return np.where(small, 2.0 * (1.0 - kr * kr / 6.0), 2.0 * np.sin(safe) / safe)


def poisson_approx(inst: PoissonGaussianInstance, spec: FilterSpec, r, tol: float = 1e-11):
    """Radial potential with 1/k^2 replaced by F(k^2)."""
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0):
        raise ValueError("r must be nonnegative")
    s = inst.sigma
    out = np.empty_like(r_arr)
    for i, ri in enumerate(r_arr):

        def integrand(k, ri=ri):
            k2 = k * k
            return _sinc2(k * ri) * np.exp(-k2 / (2.0 * s * s)) * eval_filter(spec, k2) * k2

        out[i] = inst.prefactor * integrate_semi_infinite(integrand, s, tol, initial_panels=16)
    return float(out[0]) if np.ndim(r) == 0 else out


@dataclass(frozen=True)
class QhoCoherentInstance:
    """(-d^2/dx^2 + x^2) psi = <x|alpha> for a real coherent amplitude alpha."""

    alpha: float
    n_max: int | None = None

    def __post_init__(self):
        need = self.min_cutoff(self.alpha)
        if self.n_max is None:
            object.__setattr__(self, "n_max", need)
        elif self.n_max < need:
            raise ValueError(f"n_max={self.n_max} is below the tail bound {need} for alpha={self.alpha}")

    @staticmethod
    def min_cutoff(alpha: float) -> int:
        return math.ceil(alpha * alpha + 10.0 * abs(alpha) + 20.0)

    @property
    def eigenvalues(self) -> np.ndarray:
        return 2.0 * np.arange(self.n_max + 1) + 1.0


def qho_spectral(inst: QhoCoherentInstance) -> SpectralDecomposition:
    """Coherent-state amplitudes exp(-alpha^2/2) alpha^n / sqrt(n!) on eigenvalues 2n+1."""
    n = np.arange(inst.n_max + 1)
    if inst.alpha == 0:
        return SpectralDecomposition(np.array([1.0]), np.array([1.0]))
    logs = n * math.log(abs(inst.alpha)) - 0.5 * np.array([math.lgamma(k + 1) for k in n]) - 0.5 * inst.alpha**2
    f = np.exp(logs) * np.where((n % 2 == 1) & (inst.alpha < 0), -1.0, 1.0)
    return SpectralDecomposition(inst.eigenvalues, f, "unit")


def _series(inst: QhoCoherentInstance, x, weights: np.ndarray):
    """exp(-(x^2+alpha^2)/2) pi^(-1/4) sum_n T_n(x) w_n, T_n = (alpha/sqrt2)^n H_n(x)/n!.

    T_{n+1} = (2 beta x T_n - 2 beta^2 T_{n-1}) / (n+1) with beta = alpha/sqrt2.
    """
    x_arr = np.asarray(x, dtype=float)
    beta = inst.alpha / SQRT2
    t_prev = np.zeros_like(x_arr)
    t_cur = np.ones_like(x_arr)
    total = weights[0] * t_cur
    for n in range(len(weights) - 1):
        t_next = (2.0 * beta * x_arr * t_cur - 2.0 * beta * beta * t_prev) / (n + 1)
        t_prev, t_cur = t_cur, t_next
        total = total + weights[n + 1] * t_cur
    out = np.exp(-0.5 * (x_arr * x_arr + inst.alpha**2)) * math.pi**-0.25 * total
    return float(out) if out.ndim == 0 else out


def qho_exact(inst: QhoCoherentInstance, x):
    return _series(inst, x, 1.0 / inst.eigenvalues)


def qho_approx(inst: QhoCoherentInstance, spec: FilterSpec, x):
    return _series(inst, x, np.asarray(eval_filter(spec, inst.eigenvalues), dtype=float))
