import math

import numpy as np
import pytest
from scipy import integrate

from frogmodel import distributions as dist
from frogmodel.rng import stream


# ---------------------------------------------------------------------------
# Lifetimes


def test_dw_survival_values():
    law = dist.LifetimeLaw(gamma=2.0)
    assert dist.dw_survival(law, 0.5, 0) == 1.0
    assert dist.dw_survival(law, 0.5, 1) == pytest.approx(0.5)
    assert dist.dw_survival(law, 0.5, 2) == pytest.approx(0.5 ** 4)
    geo = dist.LifetimeLaw(gamma=1.0)
    assert dist.dw_survival(geo, 0.3, 5) == pytest.approx(0.3 ** 5)


def test_dw_survival_domain():
    law = dist.LifetimeLaw(gamma=1.0)
    with pytest.raises(ValueError):
        dist.dw_survival(law, 1.0, 1)
    with pytest.raises(ValueError):
        dist.dw_survival(law, 0.5, -1)
    with pytest.raises(ValueError):
        dist.LifetimeLaw(gamma=0.0)


def test_lifetime_inverse_transform_exact():
    # Xi >= k iff u <= p^(k^gamma): check on both sides of each boundary
    law = dist.LifetimeLaw(gamma=1.5)
    p = 0.7
    for k in (1, 2, 5, 10):
        boundary = p ** (k ** 1.5)
        assert dist.lifetime_raw(law, p, boundary * (1 - 1e-12)) >= k
        assert dist.lifetime_raw(law, p, boundary * (1 + 1e-12)) <= k - 1


def test_sample_lifetime_cap_and_censoring():
    law = dist.LifetimeLaw(gamma=1.0)
    xi, censored = dist.sample_lifetime(law, 0.5, 0.9, cap=100)
    assert xi == 0 and not censored
    xi, censored = dist.sample_lifetime(law, 0.999999, 1e-12, cap=100)
    assert xi == 100 and censored


def test_lifetime_empirical_distribution():
    law = dist.LifetimeLaw(gamma=1.0)
    g = stream(4)
    u = g.random(200000)
    xi = np.array([dist.lifetime_raw(law, 0.6, x) for x in u[:20000]])
    # geometric: P(Xi >= k) = 0.6^k
    for k in (1, 3):
        emp = np.mean(xi >= k)
        assert emp == pytest.approx(0.6 ** k, abs=0.01)


# ---------------------------------------------------------------------------
# Edge laws


EDGES = [dist.BetaFamily(1.0, 0.5), dist.BetaFamily(2.0, 3.0),
         dist.LogCorrected(0.7),
         dist.TruncatedSupport(dist.BetaFamily(1.0, 1.0), 0.5),
         dist.Tabulated(us=(0.0, 0.25, 0.5, 0.75, 1.0),
                        densities=(0.4, 1.6, 1.2, 0.8, 0.4))]


@pytest.mark.parametrize("edge", EDGES)
def test_density_integrates_to_one(edge):
    if isinstance(edge, dist.LogCorrected):
        # the mass piles against u = 1 too steeply for direct quadrature;
        # integrate the density to a cutoff and add the exact tail cdf mass
        cut = 1.0 - 1e-8
        val, _ = integrate.quad(lambda u: float(dist.edge_density(edge, u)),
                                0.0, cut, limit=200,
                                points=[1.0 - 10.0 ** -k for k in range(1, 8)])
        val += 1.0 - float(dist.edge_cdf(edge, cut))
    else:
        val, _ = integrate.quad(lambda u: float(dist.edge_density(edge, u)),
                                0.0, 1.0, limit=200)
    assert val == pytest.approx(1.0, abs=5e-3)
    assert dist.density_norm_error(edge) <= 5e-3


@pytest.mark.parametrize("edge", EDGES)
def test_cdf_matches_density(edge):
    for v in (0.2, 0.45, 0.8):
        num, _ = integrate.quad(lambda u: float(dist.edge_density(edge, u)),
                                0.0, v, limit=200)
        assert float(dist.edge_cdf(edge, v)) == pytest.approx(num, abs=5e-3)


@pytest.mark.parametrize("edge", EDGES + [dist.PointMass(0.3)])
def test_sampler_inverts_cdf(edge):
    us = np.linspace(0.05, 0.95, 19)
    samples = dist.sample_edge_batch(edge, us)
    # double rounding can land exactly on 1.0 deep in a heavy right tail
    assert np.all((samples > 0) & (samples <= 1))
    if not isinstance(edge, dist.PointMass):
        ok = samples < 1.0
        back = dist.edge_cdf(edge, samples[ok])
        np.testing.assert_allclose(back, us[ok], atol=2e-2)
    assert dist.sample_edge(edge, 0.5) == pytest.approx(float(samples[9]), abs=0.05)


def test_beta_fractional_moment_closed_form():
    edge = dist.BetaFamily(1.0, 1.0)
    # E[u^s] = 1/(s+1) for the uniform
    for s in (0.5, 1.0, 7.0):
        assert dist.fractional_moment(edge, s) == pytest.approx(1.0 / (s + 1.0),
                                                                rel=1e-12)
    assert dist.fractional_moment(edge, 0.0) == 1.0


@pytest.mark.parametrize("edge", EDGES)
def test_fractional_moment_vs_quadrature(edge):
    for s in (0.5, 3.0, 20.0):
        m = dist.fractional_moment(edge, s)
        q = dist.fractional_moment_quad(edge, s)
        assert m == pytest.approx(q, rel=1e-6, abs=1e-9)


def test_fractional_moment_decreasing_in_s():
    for edge in EDGES:
        vals = [dist.fractional_moment(edge, s) for s in (0.0, 1.0, 5.0, 50.0)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_truncated_support_renormalized():
    edge = dist.TruncatedSupport(dist.BetaFamily(1.0, 1.0), 0.5)
    assert float(dist.edge_density(edge, 0.3)) == pytest.approx(2.0)
    assert float(dist.edge_density(edge, 0.7)) == 0.0
    assert float(dist.edge_cdf(edge, 0.5)) == pytest.approx(1.0)


def test_log_corrected_closed_forms():
    edge = dist.LogCorrected(1.0)
    # F(v) = 1 - (1 - log(1-v))^-1
    for v in (0.1, 0.5, 0.9):
        expect = 1.0 - 1.0 / (1.0 - math.log1p(-v))
        assert float(dist.edge_cdf(edge, v)) == pytest.approx(expect, rel=1e-12)


# ---------------------------------------------------------------------------
# Occupation laws


def test_eta_laws_moments():
    assert dist.Deterministic(3).mean() == 3.0
    assert dist.Deterministic(3).prob_zero() == 0.0
    assert dist.Deterministic(0).prob_zero() == 1.0
    assert dist.Poisson(2.0).mean() == 2.0
    assert dist.Poisson(2.0).prob_zero() == pytest.approx(math.exp(-2.0))
    assert dist.Geometric(0.25).mean() == pytest.approx(3.0)
    assert dist.Geometric(0.25).prob_zero() == 0.25


@pytest.mark.parametrize("law", [dist.Deterministic(2), dist.Poisson(1.5),
                                 dist.Geometric(0.4)])
def test_eta_sampling_matches_moments(law):
    g = stream(77)
    x = np.array([law.sample(g) for _ in range(20000)])
    assert np.all(x >= 0)
    assert x.mean() == pytest.approx(law.mean(), abs=0.05)
    assert np.mean(x == 0) == pytest.approx(law.prob_zero(), abs=0.02)


# ---------------------------------------------------------------------------
# Stable subordinator


def test_stable_laplace_transform():
    g = stream(3)
    n = 200000
    s = dist.sample_stable_subordinator_batch(0.5, g.random(n),
                                              g.standard_exponential(n))
    assert np.all(s > 0)
    for lam in (0.5, 1.0, 2.0):
        obs = np.exp(-lam * s).mean()
        assert obs == pytest.approx(math.exp(-lam ** 0.5), abs=3e-3)


def test_stable_negative_moment():
    from scipy.special import gamma as G
    g = stream(5)
    n = 200000
    for gam in (0.4, 0.7):
        s = dist.sample_stable_subordinator_batch(gam, g.random(n),
                                                  g.standard_exponential(n))
        obs = (s ** -0.5).mean()
        assert obs == pytest.approx(G(0.5 / gam) / (gam * G(0.5)), rel=0.02)


def test_stable_gamma_domain():
    with pytest.raises(ValueError):
        dist.sample_stable_subordinator(1.5, 0.5, 1.0)


# ---------------------------------------------------------------------------
# Serialization


@pytest.mark.parametrize("law", EDGES + [
    dist.PointMass(0.3), dist.LifetimeLaw(2.0), dist.Deterministic(1),
    dist.Poisson(0.5), dist.Geometric(0.9)])
def test_json_roundtrip(law):
    assert dist.law_from_json(dist.law_to_json(law)) == law


def test_json_unknown_family():
    with pytest.raises(ValueError):
        dist.law_from_json({"family": "cauchy"})
