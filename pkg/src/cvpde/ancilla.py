"""Fock-basis coefficients of the z-mode ancilla.

Three families are built here:

* the truncated barrier of length ``L`` used by the original algorithm,
  with coefficients ``gamma_n = L^(-1/2) * int_0^L phi_n(z) dz``;
* odd superpositions of phi_1, phi_3, ..., phi_{2M+1} whose coefficients
  cancel the first ``M`` inverse-square corrections of the large-eigenvalue
  expansion of the filter that approximates ``1/|a|`` with the input ``A|f>``;
* even superpositions of phi_0, ..., phi_{2M} that do the same for the
  vacuum-ancilla filter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import hermite_function, integrate

__all__ = [
    "AncillaState",
    "BarrierParams",
    "DegenerateParametersError",
    "barrier_coefficients",
    "proposal1_coefficients",
    "proposal2_coefficients",
    "odd_fock_prefactor",
    "even_fock_prefactor",
]

GAMMA_TOL = 1e-12


class DegenerateParametersError(ValueError):
    """The cancellation conditions do not determine a unique coefficient set."""


@dataclass(frozen=True)
class AncillaState:
    """Unit-norm Fock superposition ``sum_n c_n |n>`` of the z-mode ancilla.

    ``norm`` keeps the normalization constant the raw coefficients were
    divided by (Gamma for the barrier, 1 otherwise). ``parity`` is "odd",
    "even" or "mixed".
    """

    parity: str
    indices: tuple[int, ...]
    coefficients: tuple[float, ...]
    norm: float = 1.0

    def __post_init__(self):
        if self.parity not in ("odd", "even", "mixed"):
            raise ValueError(f"unknown parity {self.parity!r}")
        if len(self.indices) != len(self.coefficients) or not self.indices:
            raise ValueError("indices and coefficients must be nonempty and the same length")
        if any(n < 0 for n in self.indices):
            raise ValueError("Fock indices must be nonnegative")
        if self.parity == "odd" and any(n % 2 == 0 for n in self.indices):
            raise ValueError("odd ancilla holds an even Fock index")
        if self.parity == "even" and any(n % 2 == 1 for n in self.indices):
            raise ValueError("even ancilla holds an odd Fock index")
        sq = math.fsum(c * c for c in self.coefficients)
        if abs(sq - 1.0) > 1e-12:
            raise ValueError(f"coefficients are not unit norm (sum of squares {sq!r})")

    @property
    def max_index(self) -> int:
        return max(self.indices)

    def dense(self) -> np.ndarray:
        """Coefficients as a dense vector indexed by Fock number."""
        out = np.zeros(self.max_index + 1)
        out[list(self.indices)] = self.coefficients
        return out

    def subset(self, parity: str) -> tuple[np.ndarray, np.ndarray]:
        """Return (m, c) for the entries ``n = 2m + 1`` (odd) or ``n = 2m`` (even)."""
        want = 1 if parity == "odd" else 0
        pairs = [(n, c) for n, c in zip(self.indices, self.coefficients) if n % 2 == want]
        n = np.array([p[0] for p in pairs], dtype=int)
        c = np.array([p[1] for p in pairs], dtype=float)
        return n // 2, c


@dataclass(frozen=True)
class BarrierParams:
    L: float
    d: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"barrier length must be positive, got {self.L}")
        if self.d < 0:
            raise ValueError(f"Fock cutoff must be nonnegative, got {self.d}")


def raw_barrier_overlaps(params: BarrierParams) -> np.ndarray:
    """Unnormalized gamma_0 .. gamma_d."""
    return np.array(_raw_gammas(float(params.L), int(params.d)))


@lru_cache(maxsize=64)
def _raw_gammas(L: float, d: int) -> tuple[float, ...]:
    scale = 1.0 / math.sqrt(L)
    return tuple(
        scale * integrate(lambda z, n=n: hermite_function(n, z), 0.0, L, GAMMA_TOL, initial_panels=8)
        for n in range(d + 1)
    )


def barrier_coefficients(params: BarrierParams) -> AncillaState:
    """Truncated Fock expansion of the length-L barrier, normalized to unit norm."""
    gam = raw_barrier_overlaps(params)
    big_gamma = math.sqrt(math.fsum(gam * gam))
    coeffs = gam / big_gamma
    # renormalize once more so fsum-level rounding cannot trip the invariant
    coeffs = coeffs / math.sqrt(math.fsum(coeffs * coeffs))
    return AncillaState("mixed", tuple(range(params.d + 1)), tuple(coeffs.tolist()), big_gamma)


def odd_fock_prefactor(m) -> np.ndarray:
    """sqrt((2m+1)!/2^(2m+1)) * (-1)^m / m!, the large-argument limit of h_m."""
    m = np.atleast_1d(np.asarray(m, dtype=int))
    logs = np.array([0.5 * (math.lgamma(2 * k + 2) - (2 * k + 1) * math.log(2.0)) - math.lgamma(k + 1) for k in m])
    return np.where(m % 2 == 0, 1.0, -1.0) * np.exp(logs)


def even_fock_prefactor(m) -> np.ndarray:
    """sqrt((2m)!/2^(2m)) * (-1)^m / m!, the large-argument limit of g_m."""
    m = np.atleast_1d(np.asarray(m, dtype=int))
    logs = np.array([0.5 * (math.lgamma(2 * k + 1) - 2 * k * math.log(2.0)) - math.lgamma(k + 1) for k in m])
    return np.where(m % 2 == 0, 1.0, -1.0) * np.exp(logs)


def _series_mul(p: np.ndarray, q: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(p, q)[: order + 1]


def _binomial_series(c: float, power: float, order: int) -> np.ndarray:
    """Coefficients of (1 + c u)^power up to u^order."""
    out = np.empty(order + 1)
    out[0] = 1.0
    for j in range(1, order + 1):
        out[j] = out[j - 1] * (power - j + 1) / j * c
    return out


def _cancellation_matrix(M: int, delta: float, prefactor_power: float, k: np.ndarray) -> np.ndarray:
    """Row j holds the u^j coefficient contributed by each basis term.

    With u = 1/x^2, the filter times |x| is
    (1 + c2 u)^power * sum_m coef_m k_m r(u)^m, r(u) = (1 + p u)/(1 + c2 u),
    where c2 = (1 + delta^2)^2 and p = delta^4 - 1.
    """
    c2 = (1.0 + delta * delta) ** 2
    p = delta**4 - 1.0
    pref = _binomial_series(c2, prefactor_power, M)
    r = _series_mul(np.array([1.0, p]), _binomial_series(c2, -1.0, M), M)
    cols = []
    r_pow = np.zeros(M + 1)
    r_pow[0] = 1.0
    for m in range(M + 1):
        cols.append(k[m] * _series_mul(pref, r_pow, M))
        r_pow = _series_mul(r_pow, r, M)
    return np.array(cols).T


def _solve_cancellation(M: int, delta: float, prefactor_power: float, k: np.ndarray) -> np.ndarray:
    if M == 0:
        return np.array([1.0])
    mat = _cancellation_matrix(M, delta, prefactor_power, k)[1:]  # drop u^0 (fixed by lambda)
    _, s, vt = np.linalg.svd(mat)
    if s[-1] <= 1e-12 * s[0]:
        raise DegenerateParametersError(f"cancellation system is rank deficient for M={M}, delta={delta}")
    coef = vt[-1]
    coef = coef / np.linalg.norm(coef)
    if coef[0] < 0:
        coef = -coef
    # a fresh solve against the fixed leading coefficient sharpens the null vector
    sol = np.linalg.solve(mat[:, 1:], -mat[:, 0] * coef[0])
    coef = np.concatenate([[coef[0]], sol])
    return coef / np.linalg.norm(coef)


def proposal1_coefficients(M: int, delta: float) -> AncillaState:
    """Odd ancilla phi_1, phi_3, ..., phi_{2M+1} with |a| F(a) - 1 = O(a^-(2M+2))."""
    _check(M, delta)
    coef = _solve_cancellation(M, delta, -1.5, odd_fock_prefactor(np.arange(M + 1)))
    return AncillaState("odd", tuple(2 * m + 1 for m in range(M + 1)), tuple(coef.tolist()))


def proposal2_coefficients(M: int, delta: float) -> AncillaState:
    """Even ancilla phi_0, phi_2, ..., phi_{2M} with |a| F(a) - 1 = O(a^-(2M+2))."""
    _check(M, delta)
    coef = _solve_cancellation(M, delta, -0.5, even_fock_prefactor(np.arange(M + 1)))
    return AncillaState("even", tuple(2 * m for m in range(M + 1)), tuple(coef.tolist()))


def _check(M: int, delta: float) -> None:
    if M < 0:
        raise ValueError(f"M must be nonnegative, got {M}")
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
