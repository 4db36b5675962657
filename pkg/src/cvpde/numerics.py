"""Special functions and quadrature used throughout the package.

Hermite functions are evaluated with the normalized three-term recurrence
and a running logarithmic scale, so that high orders and large arguments
neither overflow nor lose the Gaussian envelope to premature underflow.

Quadrature is a bisection-adaptive composite Gauss-Legendre rule. Panels are
refined level by level and every level is evaluated in one vectorized call,
so integrands must accept and return numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import erf  # noqa: F401  (re-exported)

__all__ = [
    "QuadratureError",
    "QuadratureRule",
    "gauss_legendre",
    "hermite_function",
    "hermite_functions",
    "integrate",
    "integrate_batch",
    "integrate_semi_infinite",
    "erf",
]

PI_M14 = math.pi ** -0.25
BASE_ORDER = 32

# rescale threshold for the unnormalized recurrence; keeps products of two
# consecutive values far from overflow
_RESCALE = 1e150


def hermite_functions(nmax: int, z) -> np.ndarray:
    """Return phi_0(z) .. phi_nmax(z) stacked along a new leading axis.

    phi_n(z) = (2^n n! sqrt(pi))^(-1/2) H_n(z) exp(-z^2/2) is the normalized
    oscillator eigenfunction. Output shape is ``(nmax + 1,) + shape(z)``.
    """
    if nmax < 0:
        raise ValueError(f"order must be nonnegative, got {nmax}")
    z = np.asarray(z, dtype=float)
    out = np.empty((nmax + 1,) + z.shape)
    half_z2 = 0.5 * z * z

    prev = np.zeros_like(z)
    cur = np.full_like(z, PI_M14)
    logscale = np.zeros_like(z)
    out[0] = cur * np.exp(-half_z2)
    for n in range(nmax):
        nxt = math.sqrt(2.0 / (n + 1)) * z * cur - math.sqrt(n / (n + 1.0)) * prev
        big = np.abs(nxt) > _RESCALE
        if np.any(big):
            s = np.where(big, np.abs(nxt), 1.0)
            nxt = nxt / s
            cur = cur / s
            logscale = logscale + np.log(s)
        prev, cur = cur, nxt
        out[n + 1] = cur * np.exp(logscale - half_z2)
    return out


def hermite_function(n: int, z):
    """Normalized Hermite function phi_n(z)."""
    val = hermite_functions(n, z)[n]
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.interval
        if not lo < hi:
            raise ValueError(f"empty interval {self.interval}")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if self.nodes[0] <= lo or self.nodes[-1] >= hi:
            raise ValueError("quadrature nodes must lie inside the interval")

    def __call__(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def gauss_legendre(n: int, lo: float = -1.0, hi: float = 1.0) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return QuadratureRule(half * x + (lo + hi) * 0.5, half * w, (float(lo), float(hi)))


_X, _W = np.polynomial.legendre.leggauss(BASE_ORDER)


class QuadratureError(RuntimeError):
    """Adaptive quadrature ran out of panels before meeting its tolerance."""

    def __init__(self, estimate: float, error: float, message: str = ""):
        self.estimate = estimate
        self.error = error
        super().__init__(message or f"quadrature did not converge: estimate={estimate!r}, error bound={error!r}")


def _panel_sums(f, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid[:, None] + half[:, None] * _X[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return half * (vals @ _W)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    *,
    initial_panels: int = 4,
    max_panels: int = 200_000,
) -> float:
    """Integrate ``f`` over ``[lo, hi]`` with adaptive 32-point Gauss-Legendre panels.

    Each panel is compared against the sum over its two halves. Panels whose
    discrepancy exceeds their width-proportional share of
    ``tol * max(1, |result|)`` are bisected; the rest are accepted with the
    refined (two-half) value. ``f`` is called with 1-D arrays of nodes.

    Raises QuadratureError when ``max_panels`` panel evaluations are spent.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"need finite lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError("tol must be positive")

    length = hi - lo
    min_width = length * 1e-13
    edges = np.linspace(lo, hi, initial_panels + 1)
    a, b = edges[:-1], edges[1:]
    coarse = _panel_sums(f, a, b)
    used = initial_panels

    accepted = 0.0
    accepted_err = 0.0
    while a.size:
        mid = 0.5 * (a + b)
        left = _panel_sums(f, a, mid)
        right = _panel_sums(f, mid, b)
        used += 2 * a.size
        fine = left + right
        err = np.abs(coarse - fine)

        estimate = accepted + fine.sum()
        scale = tol * max(1.0, abs(estimate))
        if accepted_err + err.sum() <= scale:
            return float(estimate)

        ok = (err <= scale * (b - a) / length) | ((b - a) < min_width)
        accepted += fine[ok].sum()
        accepted_err += err[ok].sum()
        keep = ~ok
        if used > max_panels:
            raise QuadratureError(float(estimate), float(accepted_err + err.sum()))
        a, mid_k, b = a[keep], mid[keep], b[keep]
        a = np.concatenate([a, mid_k])
        b = np.concatenate([mid_k, b])
        coarse = np.concatenate([left[keep], right[keep]])
    return float(accepted)


def integrate_batch(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    count: int,
    tol: float = 1e-12,
    *,
    initial_panels=4,
    max_panels: int = 2_000_000,
) -> np.ndarray:
    """Integrate ``count`` related integrands over the same interval at once.

    ``f(x, j)`` evaluates integrand ``j[i]`` at ``x[i]``. Every integrand is
    refined independently with the same local rule as :func:`integrate`, but
    all active panels of all integrands share one vectorized call per level.
    ``initial_panels`` may be a per-integrand array.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    length = hi - lo
    min_width = length * 1e-13
    p = np.broadcast_to(np.asarray(initial_panels, dtype=int), (count,))
    owner = np.repeat(np.arange(count), p)
    # panel i of owner j spans [lo + i h_j, lo + (i + 1) h_j]
    start = np.concatenate([[0], np.cumsum(p)[:-1]])
    local = np.arange(owner.size) - start[owner]
    h = length / p[owner]
    a = lo + local * h
    b = np.where(local + 1 == p[owner], hi, a + h)

    def sums(a, b, owner):
        half = 0.5 * (b - a)
        nodes = 0.5 * (a + b)[:, None] + half[:, None] * _X[None, :]
        vals = np.asarray(f(nodes.ravel(), np.repeat(owner, BASE_ORDER)), dtype=float)
        return half * (vals.reshape(nodes.shape) @ _W)

    coarse = sums(a, b, owner)
    used = owner.size
    accepted = np.zeros(count)
    while a.size:
        mid = 0.5 * (a + b)
        left = sums(a, mid, owner)
        right = sums(mid, b, owner)
        used += 2 * a.size
        fine = left + right
        err = np.abs(coarse - fine)
        estimate = accepted + np.bincount(owner, fine, minlength=count)
        scale = tol * np.maximum(1.0, np.abs(estimate))
        ok = (err <= scale[owner] * (b - a) / length) | ((b - a) < min_width)
        accepted += np.bincount(owner[ok], fine[ok], minlength=count)
        keep = ~ok
        if used > max_panels and keep.any():
            raise QuadratureError(float(np.abs(estimate).max()), float(err[keep].sum()))
        a, mid, b, owner = a[keep], mid[keep], b[keep], owner[keep]
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        owner = np.concatenate([owner, owner])
        coarse = np.concatenate([left[keep], right[keep]])
    return accepted


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    decay_scale: float,
    tol: float = 1e-12,
    *,
    lo: float = 0.0,
    **kwargs,
) -> float:
    """Integrate ``f`` over ``[lo, inf)`` for a Gaussian-damped integrand.

    ``f`` must fall off at least like ``exp(-(k/decay_scale)^2 / 2)``; the
    range is cut at ``decay_scale * sqrt(2 ln(1/eps))`` (about 8.5 scales),
    where the neglected tail is below 1e-15 of the Gaussian mass.
    """
    if decay_scale <= 0:
        raise ValueError("decay_scale must be positive")
    k_max = lo + decay_scale * math.sqrt(2.0 * math.log(1.0 / np.finfo(float).eps))
    return integrate(f, lo, k_max, tol, **kwargs)
