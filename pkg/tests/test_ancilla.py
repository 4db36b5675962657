import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from cvpde.ancilla import (
    AncillaState,
    BarrierParams,
    barrier_coefficients,
    proposal1_coefficients,
    proposal2_coefficients,
    raw_barrier_overlaps,
)
from cvpde.filters import FilterSpec, relative_error
from cvpde.numerics import erf, hermite_function

C1 = (2.0 * math.sqrt(math.pi)) ** -0.5


def test_gamma1_closed_form():
    L = 20.0
    closed = 2.0 * (1.0 - math.exp(-L * L / 2)) / (math.sqrt(L) * math.sqrt(2.0 * math.sqrt(math.pi)))
    # independent check of the closed form itself
    by_quad = quad(lambda z: 2 * C1 * z * math.exp(-z * z / 2), 0, L, epsabs=1e-14)[0] / math.sqrt(L)
    assert closed == pytest.approx(by_quad, abs=1e-13)
    assert closed == pytest.approx(0.23752, abs=1e-5)
    assert raw_barrier_overlaps(BarrierParams(L, 1))[1] == pytest.approx(closed, abs=1e-12)


def test_gamma0_erf_closed_form():
    L = 20.0
    closed = math.pi**-0.25 * math.sqrt(math.pi / 2) * erf(L / math.sqrt(2)) / math.sqrt(L)
    by_quad = quad(lambda z: math.pi**-0.25 * math.exp(-z * z / 2), 0, L, epsabs=1e-14)[0] / math.sqrt(L)
    assert closed == pytest.approx(by_quad, abs=1e-13)
    assert raw_barrier_overlaps(BarrierParams(L, 0))[0] == pytest.approx(closed, abs=1e-12)


@pytest.mark.parametrize("L, d", [(20.0, 1), (20.0, 140), (7.0, 20), (3.0, 9)])
def test_barrier_is_unit_norm_and_mixed_parity(L, d):
    state = barrier_coefficients(BarrierParams(L, d))
    assert math.fsum(c * c for c in state.coefficients) == pytest.approx(1.0, abs=1e-12)
    assert state.indices == tuple(range(d + 1))
    assert state.parity == "mixed"
    if d >= 2:
        # the barrier is not parity-pure
        assert abs(state.coefficients[2]) > 1e-6


def test_barrier_gammas_against_scipy_quad():
    L, d = 7.0, 12
    raw = raw_barrier_overlaps(BarrierParams(L, d))
    for n in range(d + 1):
        ref = quad(lambda z: hermite_function(n, z), 0, L, epsabs=1e-14, limit=200)[0] / math.sqrt(L)
        assert raw[n] == pytest.approx(ref, abs=1e-12)


def test_barrier_params_validation():
    with pytest.raises(ValueError):
        BarrierParams(0.0, 3)
    with pytest.raises(ValueError):
        BarrierParams(1.0, -1)


@pytest.mark.parametrize("make, index", [(proposal1_coefficients, 1), (proposal2_coefficients, 0)])
def test_m0_is_single_state(make, index):
    for delta in (0.0, 0.3, 1.0):
        state = make(0, delta)
        assert state.indices == (index,)
        assert state.coefficients == (1.0,)


@pytest.mark.parametrize("delta", [0.0, 0.01, 0.1, 1.0])
def test_proposal1_m1_ratio(delta):
    state = proposal1_coefficients(1, delta)
    ratio = state.coefficients[0] / state.coefficients[1]
    assert ratio == pytest.approx((3.0 + 4.0 / (1.0 + delta**2)) / math.sqrt(6.0), rel=1e-10)


@pytest.mark.parametrize("delta", [0.0, 0.01, 0.1, 1.0])
def test_proposal2_m1_ratio(delta):
    state = proposal2_coefficients(1, delta)
    ratio = state.coefficients[0] / state.coefficients[1]
    assert ratio == pytest.approx((1.0 + 4.0 / (1.0 + delta**2)) / math.sqrt(2.0), rel=1e-10)


def test_delta_zero_ratios():
    p1 = proposal1_coefficients(1, 0.0)
    p2 = proposal2_coefficients(1, 0.0)
    assert p1.coefficients[0] / p1.coefficients[1] == pytest.approx(7 / math.sqrt(6), rel=1e-12)
    assert p2.coefficients[0] / p2.coefficients[1] == pytest.approx(5 / math.sqrt(2), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=5), st.floats(min_value=0.0, max_value=2.0))
def test_proposal_states_are_normalized_and_parity_pure(M, delta):
    for make, parity in [(proposal1_coefficients, "odd"), (proposal2_coefficients, "even")]:
        state = make(M, delta)
        assert state.parity == parity
        assert len(state.indices) == M + 1
        assert all(n % 2 == (1 if parity == "odd" else 0) for n in state.indices)
        assert math.fsum(c * c for c in state.coefficients) == pytest.approx(1.0, abs=1e-12)
        assert state.coefficients[0] > 0


@pytest.mark.parametrize("M", [0, 1])
@pytest.mark.parametrize("delta", [0.0, 0.01, 0.1, 1.0])
@pytest.mark.parametrize("make", [FilterSpec.proposal1, FilterSpec.proposal2])
def test_cancellation_slope(make, M, delta):
    a = np.logspace(2, 4, 25)
    eps = relative_error(make(M, delta, 1.0), a)
    slope = np.polyfit(np.log(a), np.log(eps), 1)[0]
    assert slope == pytest.approx(-(2 * M + 2), abs=0.1)


@pytest.mark.parametrize("M", [2, 3])
@pytest.mark.parametrize("make", [FilterSpec.proposal1, FilterSpec.proposal2])
def test_cancellation_slope_higher_orders(make, M):
    # 1/a^(2M+2) drops under double rounding of the coefficients past a ~ 1e2,
    # so the higher orders are checked on a lower window
    a = np.logspace(1.3, 2, 15)
    eps = relative_error(make(M, 0.1, 1.0), a)
    slope = np.polyfit(np.log(a), np.log(eps), 1)[0]
    assert slope == pytest.approx(-(2 * M + 2), abs=0.1 * (M + 1))


def test_ancilla_state_rejects_bad_input():
    with pytest.raises(ValueError):
        AncillaState("odd", (0,), (1.0,))
    with pytest.raises(ValueError):
        AncillaState("even", (0, 2), (1.0, 1.0))
    with pytest.raises(ValueError):
        proposal1_coefficients(-1, 0.1)
    with pytest.raises(ValueError):
        proposal2_coefficients(1, -0.1)


def test_dense_and_subset_views():
    state = barrier_coefficients(BarrierParams(20.0, 5))
    dense = state.dense()
    m, c = state.subset("odd")
    np.testing.assert_array_equal(m, [0, 1, 2])
    np.testing.assert_allclose(c, dense[[1, 3, 5]])
