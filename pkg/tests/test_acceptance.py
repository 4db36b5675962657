"""Acceptance criteria, one test each. Every test prints an ``ACnn PASS/FAIL`` line."""

import math

import numpy as np
import pytest

from cvpde.ancilla import proposal1_coefficients, proposal2_coefficients
from cvpde.filters import FilterSpec, eval_filter, oracle_filter, relative_error
from cvpde.probability import success_probability
from cvpde.problems import (
    PoissonGaussianInstance,
    QhoCoherentInstance,
    poisson_approx,
    poisson_exact,
    qho_approx,
    qho_exact,
    qho_spectral,
)

PROPOSALS = {"prop1": FilterSpec.proposal1, "prop2": FilterSpec.proposal2}
R_WINDOW = np.linspace(0.1, 10.0, 100)
X_WINDOW = np.linspace(-1.0, 5.0, 121)


def test_ac01_barrier_fixed_point(acceptance_report):
    dev = {d: abs(eval_filter(FilterSpec.arrazola(20.0, d, 0.0), 1.0) - 1.0) for d in (1, 20, 60, 140)}
    worst = max(dev.values())
    acceptance_report(1, worst <= 1e-12, f"max |F(1) - 1| over d in (1, 20, 60, 140) = {worst:.2e} (tol 1e-12)")


def test_ac02_barrier_asymptotics(acceptance_report):
    a = np.geomspace(1e2, 1e4, 41)
    drift = {}
    for d in (1, 20, 60, 140):
        scaled = a * a * eval_filter(FilterSpec.arrazola(20.0, d, 0.0), a)
        drift[d] = np.ptp(scaled) / np.min(np.abs(scaled)) if np.all(scaled != 0) else math.inf
    worst = max(drift.values())
    acceptance_report(2, worst < 0.01, f"max relative drift of a^2 F(a) on [1e2, 1e4] = {worst:.4f} (tol 0.01)")


def test_ac03_proposal_normalization(acceptance_report):
    worst = 0.0
    for make in PROPOSALS.values():
        for M in (0, 1):
            for delta in (0.01, 0.1, 1.0):
                for t in (1.0, 10.0):
                    worst = max(worst, abs(1e6 * eval_filter(make(M, delta, t), 1e6) - 1.0))
    acceptance_report(3, worst <= 1e-6, f"max ||a|F(a) - 1| at a = 1e6 = {worst:.2e} (tol 1e-6)")


def test_ac04_cancellation_order(acceptance_report):
    a = np.geomspace(1e2, 1e4, 21)
    slopes = {}
    for name, make in PROPOSALS.items():
        for delta in (0.01, 0.1, 1.0):
            for t in (1.0, 10.0):
                eps = relative_error(make(1, delta, t), a)
                slopes[(name, delta, t)] = np.polyfit(np.log(a), np.log(eps), 1)[0]
    worst = max(abs(s + 4.0) for s in slopes.values())
    acceptance_report(4, worst <= 0.1, f"M=1 log-log slopes in [{min(slopes.values()):.4f}, {max(slopes.values()):.4f}] (target -4 +- 0.1)")


def test_ac05_closed_form_ratios(acceptance_report):
    worst = 0.0
    for delta in (0.0, 0.01, 1.0):
        s1 = proposal1_coefficients(1, delta).coefficients
        s2 = proposal2_coefficients(1, delta).coefficients
        r1 = (3.0 + 4.0 / (1.0 + delta**2)) / math.sqrt(6.0)
        r2 = (1.0 + 4.0 / (1.0 + delta**2)) / math.sqrt(2.0)
        worst = max(worst, abs(s1[0] / s1[1] / r1 - 1.0), abs(s2[0] / s2[1] / r2 - 1.0))
    acceptance_report(5, worst <= 1e-10, f"max relative deviation of M=1 ratios = {worst:.2e} (tol 1e-10)")


@pytest.mark.slow
def test_ac06_oracle_equivalence(acceptance_report):
    specs = {
        "arrazola L=20 d=7 delta=0.1": FilterSpec.arrazola(20.0, 7, 0.1),
        "prop1 M=1 delta=0.01 t=1": FilterSpec.proposal1(1, 0.01, 1.0),
        "prop2 M=1 delta=0.1 t=1": FilterSpec.proposal2(1, 0.1, 1.0),
    }
    a = np.geomspace(1e-2, 1e2, 20)
    worst = {}
    for name, spec in specs.items():
        direct = eval_filter(spec, a)
        oracle = np.array([oracle_filter(spec, ai) for ai in a])
        worst[name] = float(np.max(np.abs(direct - oracle)))
    detail = "; ".join(f"{k}: {v:.1e}" for k, v in worst.items())
    acceptance_report(6, max(worst.values()) <= 1e-8, f"max |eval - oracle| ({detail}) (tol 1e-8)")


def test_ac07_reference_probabilities(acceptance_report):
    f = qho_spectral(QhoCoherentInstance(2.5))
    rel = lambda got, want: abs(got / want - 1.0)  # noqa: E731
    orig = [
        rel(success_probability(FilterSpec.arrazola(20.0, 140, 0.01), f), 3.25e-8),
        rel(success_probability(FilterSpec.arrazola(20.0, 140, 1.0), f), 1.36e-4),
    ]
    matches = []
    for t in (5.0, 10.0):
        p1 = rel(success_probability(FilterSpec.proposal1(0, 1.0, t), f), 3.31e-7)
        p2 = rel(success_probability(FilterSpec.proposal2(0, 1.0, t), f), 1.79e-3)
        if p1 <= 0.03 and p2 <= 0.03:
            matches.append(t)
    ok = max(orig) <= 0.03 and bool(matches)
    acceptance_report(
        7, ok, f"original max rel dev {max(orig):.3f}; proposals match at t in {matches} (t=5 and t=10 tried, tol 0.03)"
    )


@pytest.mark.slow
def test_ac08_exact_collapse(acceptance_report):
    poisson = PoissonGaussianInstance(4.0)
    qho = QhoCoherentInstance(2.5)
    ep = np.max(np.abs(poisson_approx(poisson, FilterSpec.exact(), R_WINDOW) - poisson_exact(poisson, R_WINDOW)))
    eq = np.max(np.abs(qho_approx(qho, FilterSpec.exact(), X_WINDOW) - qho_exact(qho, X_WINDOW)))
    acceptance_report(8, max(ep, eq) <= 1e-8, f"sup error poisson {ep:.1e}, qho {eq:.1e} (tol 1e-8)")


@pytest.mark.slow
def test_ac09_time_improvement(acceptance_report):
    poisson = PoissonGaussianInstance(4.0)
    qho = QhoCoherentInstance(2.5)
    pe, qe = poisson_exact(poisson, R_WINDOW), qho_exact(qho, X_WINDOW)
    seqs = {}
    for name, make in PROPOSALS.items():
        seqs[f"poisson {name}"] = [
            float(np.max(np.abs(poisson_approx(poisson, make(0, 1.0, t), R_WINDOW) - pe))) for t in (1.0, 10.0, 100.0)
        ]
        seqs[f"qho {name}"] = [float(np.max(np.abs(qho_approx(qho, make(0, 1.0, t), X_WINDOW) - qe))) for t in (1.0, 10.0)]
    ok = all(all(b < a for a, b in zip(s, s[1:])) for s in seqs.values())
    detail = "; ".join(f"{k}: " + " > ".join(f"{e:.2e}" for e in s) for k, s in seqs.items())
    acceptance_report(9, ok, f"sup errors {detail}")


def test_ac10_small_delta_scaling(acceptance_report):
    f = qho_spectral(QhoCoherentInstance(2.5))
    makers = {
        "arrazola": lambda D: FilterSpec.arrazola(20.0, 140, D),
        "prop1": lambda D: FilterSpec.proposal1(0, D, 10.0),
        "prop2": lambda D: FilterSpec.proposal2(0, D, 10.0),
    }
    spread = {}
    for name, make in makers.items():
        r = [success_probability(make(D), f) / D**2 for D in (1e-3, 1e-4)]
        spread[name] = abs(r[0] / r[1] - 1.0)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in spread.items())
    acceptance_report(10, max(spread.values()) < 0.01, f"P/delta^2 variation over (1e-3, 1e-4): {detail} (tol 0.01)")
