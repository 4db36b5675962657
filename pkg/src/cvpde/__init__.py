"""Spectral-filter model of the continuous-variable PDE-inversion algorithm and
its single-ancilla variants."""

from .ancilla import (
    AncillaState,
    BarrierParams,
    barrier_coefficients,
    proposal1_coefficients,
    proposal2_coefficients,
)
from .filters import FilterSpec, Variant, eval_filter, lambda_for, oracle_filter, relative_error
from .probability import SpectralDecomposition, success_probability
from .problems import (
    PoissonGaussianInstance,
    QhoCoherentInstance,
    poisson_approx,
    poisson_exact,
    qho_approx,
    qho_exact,
    qho_spectral,
)
from .tables import CurveTable

__version__ = "0.1.0"
