"""Post-selection success probability of the ancilla measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ancilla import even_fock_prefactor, odd_fock_prefactor
from .filters import FilterSpec, Variant, _fock_sum

__all__ = ["DegenerateInputError", "SpectralDecomposition", "success_probability"]

TAIL_WEIGHT = 1e-14


class DegenerateInputError(ValueError):
    """The input lies in the kernel of the operator (Omega = 0)."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Input state as (eigenvalue, amplitude) pairs in the operator eigenbasis."""

    eigenvalues: np.ndarray
    amplitudes: np.ndarray
    norm_kind: str = "unit"

    def __post_init__(self):
        a = np.asarray(self.eigenvalues, dtype=float)
        f = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "eigenvalues", a)
        object.__setattr__(self, "amplitudes", f)
        if a.shape != f.shape or a.ndim != 1:
            raise ValueError("eigenvalues and amplitudes must be 1-D and the same length")
        if np.unique(a).size != a.size:
            raise ValueError("duplicate eigenvalues; merge degenerate components first")
        if self.norm_kind not in ("unit", "unnormalized"):
            raise ValueError(f"unknown norm_kind {self.norm_kind!r}")
        if self.norm_kind == "unit" and abs(math.fsum(f * f) - 1.0) > 1e-10:
            raise ValueError("amplitudes declared unit-norm but sum of squares is not 1")

    def normalized(self) -> "SpectralDecomposition":
        norm = math.sqrt(math.fsum(self.amplitudes**2))
        return SpectralDecomposition(self.eigenvalues, self.amplitudes / norm, "unit")

    def truncated(self, tail: float = TAIL_WEIGHT) -> "SpectralDecomposition":
        """Keep the heaviest components until all but ``tail`` of the weight is in."""
        w = self.amplitudes**2
        total = w.sum()
        order = np.argsort(-w, kind="stable")
        cum = np.cumsum(w[order])
        n_keep = int(np.searchsorted(cum, (1.0 - tail) * total)) + 1
        keep = np.sort(order[:n_keep])
        return SpectralDecomposition(self.eigenvalues[keep], self.amplitudes[keep], "unnormalized")


def success_probability(spec: FilterSpec, f: SpectralDecomposition) -> float:
    """Probability of post-selecting both ancillas on their momentum windows.

    Inputs for the barrier and vacuum-ancilla variants are normalized first.
    The A|f> variant normalizes by Omega = ||A f|| over the same truncated
    entry list.

    The single-photon variants use the conventional 8 delta^2 prefactor. That
    is a quarter of the squared norm of the window projection when the
    y-ancilla is a unit-norm |1>; the vacuum variant has no such factor.
    """
    v = spec.variant
    D = spec.delta
    c2 = (1.0 + D * D) ** 2
    unit = f if f.norm_kind == "unit" else f.normalized()
    g = unit.truncated()
    a, amp = g.eigenvalues, g.amplitudes

    if v is Variant.ARRAZOLA_TRUNCATED:
        m, c = spec.ancilla.subset("odd")
        s = _fock_sum(m, c, odd_fock_prefactor(m), a, D)
        terms = a * amp * s / (a * a + c2) ** 1.5
        return 8.0 * D * D * math.fsum(terms**2)

    if v is Variant.PROPOSAL1:
        omega2 = math.fsum((a * amp) ** 2)
        if omega2 == 0.0:
            raise DegenerateInputError("input is annihilated by the operator")
        x = a * spec.t
        m, c = spec.ancilla.subset("odd")
        s = _fock_sum(m, c, odd_fock_prefactor(m), x, D)
        terms = spec.t * a * a * amp * s / (x * x + c2) ** 1.5
        return 8.0 * D * D / omega2 * math.fsum(terms**2)

    if v is Variant.PROPOSAL2:
        x = a * spec.t
        m, c = spec.ancilla.subset("even")
        s = _fock_sum(m, c, even_fock_prefactor(m), x, D)
        return 4.0 * D * D * math.fsum(amp**2 * s**2 / (x * x + c2))

    raise ValueError(f"success probability is not defined for {v.value}")
