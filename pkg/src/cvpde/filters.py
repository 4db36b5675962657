"""Spectral filters F(a) of the ancilla-based inverse and its variants.

Every variant of the algorithm acts on an eigencomponent ``f(a)|a>`` of the
input by multiplying it with a scalar ``F(a)``; the ideal inverse has
``F(a) = 1/a``. All filters here are real: the imaginary units carried by
the normalization constant and by the projected amplitude cancel, and the
remaining sign is fixed so that ``F(a) > 0`` for large positive ``a t``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .ancilla import (
    AncillaState,
    BarrierParams,
    barrier_coefficients,
    even_fock_prefactor,
    odd_fock_prefactor,
    proposal1_coefficients,
    proposal2_coefficients,
)
from .numerics import hermite_functions, integrate, integrate_batch

__all__ = [
    "FilterSpec",
    "SingularEigenvalueError",
    "Variant",
    "eval_filter",
    "lambda_for",
    "lambda_times_delta",
    "oracle_filter",
    "relative_error",
]

PI_14 = math.pi**0.25


class Variant(enum.Enum):
    EXACT = "exact"
    ARRAZOLA_INFINITE = "arrazola-inf"
    ARRAZOLA_TRUNCATED = "arrazola"
    PROPOSAL1 = "prop1"
    PROPOSAL2 = "prop2"


class SingularEigenvalueError(ZeroDivisionError):
    """The exact inverse was asked for at a zero eigenvalue."""


@dataclass(frozen=True)
class FilterSpec:
    """Which filter to apply, with the parameters it depends on.

    Build instances with the classmethod constructors; they create and
    validate the matching ancilla state.
    """

    variant: Variant
    delta: float = 0.0
    t: float = 1.0
    L: float | None = None
    ancilla: AncillaState | None = None

    def __post_init__(self):
        v = self.variant
        if v is Variant.EXACT:
            return
        if self.delta < 0 or not math.isfinite(self.delta):
            raise ValueError(f"delta must be a finite nonnegative number, got {self.delta}")
        if not self.t > 0:
            raise ValueError(f"t must be positive, got {self.t}")
        if v in (Variant.ARRAZOLA_INFINITE, Variant.ARRAZOLA_TRUNCATED):
            if self.L is None or not self.L > 0:
                raise ValueError("barrier variants need a positive L")
        if v is Variant.ARRAZOLA_TRUNCATED and self.ancilla is None:
            raise ValueError("truncated barrier variant needs an ancilla state")
        if v is Variant.PROPOSAL1 and (self.ancilla is None or self.ancilla.parity != "odd"):
            raise ValueError("Proposal 1 needs an odd-parity ancilla")
        if v is Variant.PROPOSAL2 and (self.ancilla is None or self.ancilla.parity != "even"):
            raise ValueError("Proposal 2 needs an even-parity ancilla")

    @classmethod
    def exact(cls) -> "FilterSpec":
        return cls(Variant.EXACT)

    @classmethod
    def arrazola_infinite(cls, L: float, delta: float) -> "FilterSpec":
        return cls(Variant.ARRAZOLA_INFINITE, delta=delta, L=L)

    @classmethod
    def arrazola(cls, L: float, d: int, delta: float) -> "FilterSpec":
        return cls(Variant.ARRAZOLA_TRUNCATED, delta=delta, L=L, ancilla=barrier_coefficients(BarrierParams(L, d)))

    @classmethod
    def proposal1(cls, M: int, delta: float, t: float = 1.0) -> "FilterSpec":
        return cls(Variant.PROPOSAL1, delta=delta, t=t, ancilla=proposal1_coefficients(M, delta))

    @classmethod
    def proposal2(cls, M: int, delta: float, t: float = 1.0) -> "FilterSpec":
        return cls(Variant.PROPOSAL2, delta=delta, t=t, ancilla=proposal2_coefficients(M, delta))

    def with_time(self, t: float) -> "FilterSpec":
        return replace(self, t=t)

    @property
    def is_proposal(self) -> bool:
        return self.variant in (Variant.PROPOSAL1, Variant.PROPOSAL2)


def lambda_times_delta(spec: FilterSpec) -> float:
    """lambda * delta, which stays finite as delta -> 0.

    Every non-exact filter carries lambda together with one factor of delta
    from the overlap of the two momentum windows, so this product is what
    the filters actually use.
    """
    v = spec.variant
    if v in (Variant.ARRAZOLA_INFINITE, Variant.ARRAZOLA_TRUNCATED):
        gamma = spec.ancilla.norm if spec.ancilla is not None else 1.0
        return math.sqrt(spec.L / 2.0) * gamma
    if v is Variant.PROPOSAL1:
        m, c = spec.ancilla.subset("odd")
        denom = 4.0 * PI_14 * float(np.dot(c, odd_fock_prefactor(m)))
    elif v is Variant.PROPOSAL2:
        m, c = spec.ancilla.subset("even")
        denom = 2.0 * float(np.dot(c, even_fock_prefactor(m))) / math.pi
    else:
        raise ValueError(f"{v.value} has no normalization constant")
    if denom == 0.0:
        raise ZeroDivisionError(f"coefficient set gives a vanishing large-|a| limit for {v.value}")
    return 1.0 / denom


def lambda_for(spec: FilterSpec) -> float:
    """Magnitude of the normalization constant lambda.

    Barrier variants: sqrt(L/2) * Gamma / delta. Proposals: fixed by
    ``|a| F(a) -> 1`` as ``|a| -> inf``. Diverges at delta = 0, where only
    :func:`lambda_times_delta` is finite.
    """
    if spec.variant is Variant.EXACT:
        return 1.0
    lam_delta = lambda_times_delta(spec)
    if spec.delta == 0:
        raise ZeroDivisionError("lambda diverges at delta = 0; use lambda_times_delta")
    return lam_delta / spec.delta


def _ratio(x, delta: float):
    c2 = (1.0 + delta * delta) ** 2
    return (x * x - 1.0 + delta**4) / (x * x + c2)


def _fock_sum(m: np.ndarray, c: np.ndarray, k: np.ndarray, x, delta: float):
    """sum_m c_m k_m r(x)^m, with r the rational factor shared by h_m and g_m."""
    r = np.asarray(_ratio(x, delta), dtype=float)
    out = np.zeros_like(r)
    # Horner on consecutive powers; m are sorted and may have gaps
    dense = np.zeros(int(m.max()) + 1 if m.size else 1)
    dense[m] = c * k
    for coef in dense[::-1]:
        out = out * r + coef
    return out


def eval_filter(spec: FilterSpec, a):
    """F(a) for the given variant; vectorized over ``a``."""
    a_arr = np.asarray(a, dtype=float)
    v = spec.variant
    D = spec.delta
    c2 = (1.0 + D * D) ** 2

    if v is Variant.EXACT:
        if np.any(a_arr == 0):
            raise SingularEigenvalueError("exact inverse is singular at a = 0")
        out = 1.0 / a_arr

    elif v is Variant.ARRAZOLA_INFINITE:
        one_d2 = 1.0 + D * D
        damp = -np.expm1(-(a_arr * a_arr / one_d2 + D * D) * spec.L**2 / 2.0)
        denom = a_arr * a_arr + D * D * one_d2
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(denom > 0, a_arr / np.where(denom > 0, denom, 1.0), 0.0)
        out = damp / math.sqrt(one_d2) * frac

    elif v is Variant.ARRAZOLA_TRUNCATED:
        m, c = spec.ancilla.subset("odd")
        q = lambda_times_delta(spec) * 4.0 * PI_14 * a_arr / (a_arr * a_arr + c2) ** 1.5
        out = q * _fock_sum(m, c, odd_fock_prefactor(m), a_arr, D)

    elif v is Variant.PROPOSAL1:
        m, c = spec.ancilla.subset("odd")
        x = a_arr * spec.t
        lam_delta = lambda_times_delta(spec)
        out = lam_delta * spec.t * 4.0 * PI_14 * x * x / (x * x + c2) ** 1.5 * _fock_sum(m, c, odd_fock_prefactor(m), x, D)

    elif v is Variant.PROPOSAL2:
        m, c = spec.ancilla.subset("even")
        x = a_arr * spec.t
        lam_delta = lambda_times_delta(spec)
        out = lam_delta * spec.t * (2.0 / math.pi) / np.sqrt(x * x + c2) * _fock_sum(m, c, even_fock_prefactor(m), x, D)

    else:  # pragma: no cover
        raise ValueError(f"unknown variant {v}")

    return float(out) if np.ndim(out) == 0 else out


def _proposal_deviation(spec: FilterSpec, a: np.ndarray) -> np.ndarray:
    """|a| F(a) - 1 for the proposals, free of the final cancellation.

    With x = a t the product |a| F(a) equals P(x) S(x) / S(inf), where
    P = (1 + c/x^2)^(-3/2) (Proposal 1) or ^(-1/2) (Proposal 2) and
    S = sum_m c_m k_m r^m. Each factor is written as 1 + small and the
    small parts are formed with log1p/expm1, so deviations down to 1e-30
    survive. Where r <= 1/2 the direct product is accurate enough.
    """
    D = spec.delta
    c2 = (1.0 + D * D) ** 2
    odd = spec.variant is Variant.PROPOSAL1
    m, c = spec.ancilla.subset("odd" if odd else "even")
    k = odd_fock_prefactor(m) if odd else even_fock_prefactor(m)
    ck = c * k
    s0 = ck.sum()
    power = -1.5 if odd else -0.5

    x = np.abs(a) * spec.t
    direct = np.abs(a) * eval_filter(spec, a) - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        u = 1.0 / (x * x)
        r = _ratio(x, D)
        r_m1 = (D**4 - 1.0 - c2) * u / (1.0 + c2 * u)
        log_r = np.log1p(r_m1)
        dp = np.expm1(power * np.log1p(c2 * u))
        ds = sum(w * np.expm1(mm * log_r) for w, mm in zip(ck, m)) / s0
        stable = dp + ds + dp * ds
    return np.where((r > 0.5) & np.isfinite(stable), stable, direct)


def relative_error(spec: FilterSpec, a):
    """|1 - a F(a)|; proposals use |a| since they target 1/|a|."""
    a_arr = np.asarray(a, dtype=float)
    if np.any(a_arr == 0):
        raise ValueError("relative error is undefined at a = 0")
    if spec.variant is Variant.EXACT:
        out = np.zeros_like(a_arr)
    elif spec.is_proposal:
        out = np.abs(_proposal_deviation(spec, a_arr))
    else:
        out = np.abs(1.0 - a_arr * eval_filter(spec, a_arr))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Independent oracle: direct 2-D quadrature of the projected evolution.
# ---------------------------------------------------------------------------

_TAIL = math.sqrt(2.0 * math.log(1.0 / np.finfo(float).eps))


def _ancilla_wavefunction(anc: AncillaState, parity: str):
    m, c = anc.subset(parity)
    n = 2 * m + (1 if parity == "odd" else 0)
    nmax = int(n.max())

    def chi(z):
        return np.tensordot(c, hermite_functions(nmax, z)[n], axes=1)

    return chi, nmax


def _projected_amplitude(spec: FilterSpec, b: float, parity: str, tol: float) -> float:
    """Projection of the evolved ancillas on the Gaussian momentum windows.

    Returns int int w(y) chi(z) exp(-(y^2+z^2) delta^2/2) K(b y z) dy dz
    with w(y) = y exp(-y^2/2), K = sin for odd ancillas (the -i is absorbed)
    and w(y) = exp(-y^2/2), K = cos for even ones. Both integrands are even
    under (y, z) -> (-y, -z) and under separate reflection, so only the
    quarter plane y, z > 0 is integrated. The overlap factor delta / sqrt(pi)
    of the two window states is left to the caller.
    """
    D = spec.delta
    chi, nmax = _ancilla_wavefunction(spec.ancilla, parity)
    y_max = _TAIL / math.sqrt(1.0 + D * D)
    z_max = math.sqrt(2.0 * nmax + 1.0) + _TAIL
    odd = parity == "odd"

    def fz(z):
        bz = b * z
        if odd:
            def fy(y, j):
                return y * np.exp(-0.5 * (1.0 + D * D) * y * y) * np.sin(bz[j] * y)
        else:
            def fy(y, j):
                return np.exp(-0.5 * (1.0 + D * D) * y * y) * np.cos(bz[j] * y)
        # initial panel count tracks the number of oscillations on [0, y_max]
        panels = np.maximum(2, (np.abs(bz) * y_max / (6.0 * math.pi)).astype(int) + 1)
        inner = integrate_batch(fy, 0.0, y_max, z.size, tol * 1e-2, initial_panels=panels)
        return inner * chi(z) * np.exp(-0.5 * D * D * z * z)

    quarter = integrate(fz, 0.0, z_max, tol * 1e-1, initial_panels=16)
    return 4.0 * quarter


def oracle_filter(spec: FilterSpec, a: float, tol: float = 1e-10) -> float:
    """F(a) from direct quadrature of the projected ancilla amplitude.

    The barrier variant uses lambda = sqrt(L/2) * Gamma / delta against the
    raw amplitude. For the proposals the normalization is derived here from
    the ancilla wavefunction at the origin: as b -> inf the amplitude tends to
    2 sqrt(pi) delta chi(0) / b (even) or 2 sqrt(pi) delta chi'(0) / b^2 (odd),
    which fixes lambda through |a| F(a) -> 1 without reusing the closed forms.
    For the barrier the delta of the window overlap is cancelled against
    lambda before multiplying, so delta = 0 is allowed.
    """
    a = float(a)
    v = spec.variant
    if v is Variant.ARRAZOLA_TRUNCATED:
        # lambda * delta / sqrt(pi), finite at delta = 0
        return math.sqrt(spec.L / 2.0) * spec.ancilla.norm / math.sqrt(math.pi) * _projected_amplitude(spec, a, "odd", tol)
    if v is Variant.PROPOSAL1:
        m, c = spec.ancilla.subset("odd")
        n = 2 * m + 1
        # phi_n'(0) from the ladder relation phi_n' = sqrt(n/2) phi_{n-1} - sqrt((n+1)/2) phi_{n+1}
        h = hermite_functions(int(n.max()) + 1, 0.0)
        dchi0 = float(np.sum(c * (np.sqrt(n / 2.0) * h[n - 1] - np.sqrt((n + 1) / 2.0) * h[n + 1])))
        # lambda * delta / sqrt(pi); the input A|f> contributes a factor |a|
        lam = 1.0 / (2.0 * math.pi * dchi0)
        if a == 0:
            return 0.0
        return lam * spec.t**2 * abs(a) * _projected_amplitude(spec, abs(a) * spec.t, "odd", tol)
    if v is Variant.PROPOSAL2:
        chi, _ = _ancilla_wavefunction(spec.ancilla, "even")
        chi0 = float(chi(np.array([0.0]))[0])
        lam = 1.0 / (2.0 * math.pi * chi0)
        return lam * spec.t * _projected_amplitude(spec, abs(a) * spec.t, "even", tol)
    raise ValueError(f"no oracle for variant {v.value}")
