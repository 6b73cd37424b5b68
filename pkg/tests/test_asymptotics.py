import math

import numpy as np
import pytest

from frogmodel import asymptotics as asym
from frogmodel import distributions as dist


# ---------------------------------------------------------------------------
# Slowly varying families


def test_sv_eval_families():
    assert asym.sv_eval(asym.Constant(3.0), 10.0) == 3.0
    L = asym.LogPower(1.0)
    assert asym.sv_eval(L, 1.0) == pytest.approx(1.0)
    assert asym.sv_eval(L, math.e) == pytest.approx(0.25)
    P = asym.PowerOfLog(2.0, -1.0)
    assert asym.sv_eval(P, math.e) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        asym.sv_eval(L, 0.5)


def test_sv_limits():
    assert asym.sv_limits(asym.Constant(2.0)) == (2.0, 2.0)
    assert asym.sv_limits(asym.LogPower(0.5)) == (0.0, 0.0)
    assert asym.sv_limits(asym.PowerOfLog(1.0, -2.0)) == (0.0, 0.0)
    assert asym.sv_limits(asym.PowerOfLog(1.0, 2.0)) == (math.inf, math.inf)
    assert asym.sv_limits(asym.PowerOfLog(1.5, 0.0)) == (1.5, 1.5)


def test_sv_validation():
    with pytest.raises(ValueError):
        asym.Constant(0.0)
    with pytest.raises(ValueError):
        asym.LogPower(-1.0)
    with pytest.raises(ValueError):
        asym.PowerOfLog(0.0, 1.0)


def test_edge_scaling():
    beta, L, flag = asym.edge_scaling(dist.BetaFamily(1.0, 0.5))
    assert beta == 0.5 and flag is None
    # L = 1/B(1, 0.5) = 0.5
    assert asym.sv_eval(L, 10.0) == pytest.approx(0.5, rel=1e-12)

    beta, L, flag = asym.edge_scaling(dist.LogCorrected(0.7))
    assert beta == 0.0 and flag == "log_corrected"
    assert isinstance(L, asym.LogPower)

    beta, _, flag = asym.edge_scaling(
        dist.TruncatedSupport(dist.BetaFamily(1.0, 1.0), 0.5))
    assert beta == math.inf and flag == "truncated"
    beta, _, flag = asym.edge_scaling(dist.PointMass(0.3))
    assert beta == math.inf and flag == "point_mass"

    with pytest.raises(ValueError):
        asym.edge_scaling(dist.Tabulated(us=(0.0, 1.0), densities=(1.0, 1.0)))


# ---------------------------------------------------------------------------
# Critical constants


def test_beta_c():
    assert asym.beta_c(1.0) == 0.5
    assert asym.beta_c(2.0) == 0.25
    assert asym.beta_c(0.5) == 1.0
    with pytest.raises(ValueError):
        asym.beta_c(0.0)


def test_theta_values_and_monotonicity():
    assert asym.theta(1.0) == pytest.approx(0.07932762696572854, rel=1e-12)
    cs = np.linspace(0.1, 10.0, 50)
    vals = [asym.theta(c) for c in cs]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert all(0.0 < v < 0.5 for v in vals)
    with pytest.raises(ValueError):
        asym.theta(0.0)


def test_K_up_geometric_benchmark():
    # gamma=1, beta=0.5: 2 G(1) 2^0 (G(1/2)/sqrt(pi))^-1 = 2
    assert asym.K_up(1.0, 0.5) == pytest.approx(2.0, rel=1e-12)


def test_K_up_branch_continuity_at_gamma_one():
    # branch (A) is used at gamma=1; approaching from below, branch (B)
    # differs by exactly 2^-beta
    for beta in (0.25, 0.5, 1.0):
        a_val = asym.K_up(1.0, beta)
        below = asym.K_up(1.0 - 1e-9, beta)
        above = asym.K_up(1.0 + 1e-9, beta)
        assert above == pytest.approx(a_val, rel=1e-6)
        assert below == pytest.approx(a_val * 2.0 ** (-beta), rel=1e-6)


def test_K_down_requires_c0_iff_gamma_ge_one():
    with pytest.raises(ValueError):
        asym.K_down(1.0, 0.5)
    with pytest.raises(ValueError):
        asym.K_down(0.5, 0.5, c0=1.0)
    assert asym.K_down(1.0, 0.5, 1.0) > 0
    assert asym.K_down(0.5, 0.5) > 0


def test_K_down_small_gamma_ratio():
    # gamma < 1: K_down / K_up = 2^-beta exactly
    for gamma in (0.3, 0.5, 0.9):
        for beta in (0.2, 0.8, 1.6):
            assert asym.K_down(gamma, beta) / asym.K_up(gamma, beta) == \
                pytest.approx(2.0 ** (-beta), rel=1e-12)


def test_K_down_quad_cross_check():
    for gamma, beta, c0 in ((1.0, 0.5, 1.0), (1.0, 0.5, 1.77),
                            (2.0, 0.25, 0.5), (1.5, 0.4, 2.0)):
        assert asym.K_down_quad(gamma, beta, c0) == \
            pytest.approx(asym.K_down(gamma, beta, c0), rel=1e-8)


def test_K_down_sup_geometric_benchmark():
    c0_star, val = asym.K_down_sup(1.0, 0.5)
    assert c0_star == pytest.approx(1.769314968112063, rel=1e-5)
    assert val == pytest.approx(0.15063306062040785, rel=1e-8)
    # sup dominates any point evaluation
    assert val >= asym.K_down(1.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        asym.K_down_sup(0.5, 0.5)


def test_K_down_sup_unimodal_on_grid():
    c0s = np.logspace(-3, 3, 121)
    vals = np.array([asym.K_down(1.0, 0.5, c) for c in c0s])
    peaks = np.flatnonzero((vals[1:-1] > vals[:-2]) & (vals[1:-1] > vals[2:]))
    assert peaks.size == 1


def test_sandwich_nondegenerate_on_grid():
    # K_down < K_up throughout a (gamma, beta, c0) grid
    for gamma in np.linspace(1.0, 3.0, 20):
        for beta in np.linspace(0.05, 2.0, 20):
            ku = asym.K_up(gamma, beta)
            for c0 in (0.1, 0.5, 1.0, 2.0, 10.0):
                assert asym.K_down(gamma, beta, c0) < ku
    for gamma in np.linspace(0.1, 0.95, 10):
        for beta in np.linspace(0.05, 2.0, 10):
            assert asym.K_down(gamma, beta) < asym.K_up(gamma, beta)


# ---------------------------------------------------------------------------
# Phase classifier


def test_classifier_dichotomy_examples():
    det1 = dist.Deterministic(1)
    v = asym.classify_phase(1.0, dist.BetaFamily(1.0, 2.0), None, det1)
    assert v.verdict == "ExtinctAS"
    v = asym.classify_phase(1.0, dist.BetaFamily(1.0, 0.2), None, det1)
    assert v.verdict == "SurvivesWP"


def test_classifier_special_families():
    det1 = dist.Deterministic(1)
    for gamma in (0.3, 1.0, 5.0):
        v = asym.classify_phase(gamma, dist.LogCorrected(0.7), None, det1)
        assert v.verdict == "SurvivesWP"
        trunc = dist.TruncatedSupport(dist.BetaFamily(1.0, 1.0), 0.5)
        v = asym.classify_phase(gamma, trunc, None, det1)
        assert v.verdict == "ExtinctAS"
        v = asym.classify_phase(gamma, dist.PointMass(0.9), None, det1)
        assert v.verdict == "ExtinctAS"


def test_classifier_outside_hypotheses():
    det0 = dist.Deterministic(0)
    v = asym.classify_phase(1.0, dist.BetaFamily(1.0, 0.2), None, det0)
    assert v.verdict == "OutsideHypotheses"
    v = asym.classify_phase(1.0, dist.LogCorrected(0.7), None, det0)
    assert v.verdict == "OutsideHypotheses"


def test_classifier_boundary_inequalities():
    det1 = dist.Deterministic(1)
    # gamma=1, beta = beta_c = 0.5: thresholds 2 K_up c < 1 and K_down_sup c > 1
    small = asym.classify_phase(1.0, 0.5, asym.Constant(0.2), det1)
    assert small.verdict == "ExtinctAS"
    big = asym.classify_phase(1.0, 0.5, asym.Constant(10.0), det1)
    assert big.verdict == "SurvivesWP"
    mid = asym.classify_phase(1.0, 0.5, asym.Constant(1.0), det1)
    assert mid.verdict == "BoundaryInconclusive"
    # gamma < 1 boundary uses the closed-form K_down
    low = asym.classify_phase(0.5, 1.0, asym.Constant(1e-3), det1)
    assert low.verdict == "ExtinctAS"


def test_classifier_scale_coherence():
    det1 = dist.Deterministic(1)
    base = asym.classify_phase(1.0, 0.5, asym.Constant(1.0), det1)
    scaled = asym.classify_phase(1.0, 0.5, asym.Constant(3.0), det1)
    assert scaled.numbers["boundary_lhs_ext"] == \
        pytest.approx(3.0 * base.numbers["boundary_lhs_ext"], rel=1e-12)
    assert scaled.numbers["boundary_lhs_surv"] == \
        pytest.approx(3.0 * base.numbers["boundary_lhs_surv"], rel=1e-12)
    # off-boundary verdicts ignore L entirely
    for c in (0.01, 1.0, 100.0):
        v = asym.classify_phase(1.0, 2.0, asym.Constant(c), det1)
        assert v.verdict == "ExtinctAS"


def test_classifier_input_validation():
    det1 = dist.Deterministic(1)
    with pytest.raises(ValueError):
        asym.classify_phase(0.0, 0.5, asym.Constant(1.0), det1)
    with pytest.raises(ValueError):
        asym.classify_phase(1.0, 0.5, None, det1)


def test_classifier_numbers_payload():
    det1 = dist.Deterministic(1)
    v = asym.classify_phase(1.0, 0.5, asym.Constant(1.0), det1)
    assert v.numbers["beta_c"] == 0.5
    assert v.numbers["K_up"] == pytest.approx(2.0)
    assert v.numbers["K_down_sup"] == pytest.approx(0.150633, rel=1e-4)
    assert v.numbers["boundary_rhs"] == 1.0
