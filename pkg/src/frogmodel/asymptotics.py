"""Critical constants, slowly varying families, and the phase classifier.

The extinction/survival threshold is beta_c = 1/(2 gamma). The band
constants K_up / K_down come in two branches: gamma >= 1 uses the Gaussian
first-passage route (with the free parameter c0 on the lower side), gamma < 1
uses the stable-subordinator route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from scipy import integrate
from scipy.special import gammaln

from .distributions import (BetaFamily, EdgeLaw, EtaLaw, LogCorrected,
                            PointMass, Tabulated, TruncatedSupport)


# ---------------------------------------------------------------------------
# Slowly varying families


@dataclass(frozen=True)
class Constant:
    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")


@dataclass(frozen=True)
class LogPower:
    """L(x) = delta (1 + log x)^-(1+delta); tends to 0 at infinity."""

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")


@dataclass(frozen=True)
class PowerOfLog:
    """L(x) = c (1 + log x)^rho."""

    c: float
    rho: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")


SlowlyVarying = Union[Constant, LogPower, PowerOfLog]


def sv_eval(L: SlowlyVarying, x: float) -> float:
    if x < 1.0:
        raise ValueError("L is certified on x >= 1 only")
    if isinstance(L, Constant):
        return L.c
    if isinstance(L, LogPower):
        return L.delta * (1.0 + math.log(x)) ** (-(1.0 + L.delta))
    if isinstance(L, PowerOfLog):
        return L.c * (1.0 + math.log(x)) ** L.rho
    raise TypeError(f"unknown slowly varying family {L!r}")


def sv_limits(L: SlowlyVarying) -> tuple[float, float]:
    """(liminf, limsup) of L(x) as x -> infinity, in closed form per family."""
    if isinstance(L, Constant):
        return L.c, L.c
    if isinstance(L, LogPower):
        return 0.0, 0.0
    if isinstance(L, PowerOfLog):
        if L.rho < 0:
            return 0.0, 0.0
        if L.rho > 0:
            return math.inf, math.inf
        return L.c, L.c
    raise TypeError(f"unknown slowly varying family {L!r}")


def edge_scaling(edge: EdgeLaw):
    """Declared (beta, L, flag) of an edge law's right-edge profile.

    flag is None for laws inside the power/slowly-varying template,
    otherwise a string naming the special regime ("log_corrected" behaves
    like beta -> 0; "truncated" and "point_mass" have no mass near 1).
    """
    if isinstance(edge, BetaFamily):
        lb = gammaln(edge.a) + gammaln(edge.b) - gammaln(edge.a + edge.b)
        return edge.b, Constant(math.exp(-lb)), None
    if isinstance(edge, LogCorrected):
        return 0.0, LogPower(edge.delta), "log_corrected"
    if isinstance(edge, TruncatedSupport):
        return math.inf, Constant(1.0), "truncated"
    if isinstance(edge, PointMass):
        return math.inf, Constant(1.0), "point_mass"
    if isinstance(edge, Tabulated):
        raise ValueError("tabulated edge laws must declare beta and L explicitly")
    raise TypeError(f"unknown edge law {edge!r}")


# ---------------------------------------------------------------------------
# Critical constants


def beta_c(gamma: float) -> float:
    """Critical edge exponent 1/(2 gamma)."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return 1.0 / (2.0 * gamma)


def _phi(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def theta(c0: float) -> float:
    """theta(c0) = (1 - Phi(1/sqrt(c0))) / 2, in (0, 1/2)."""
    if not c0 > 0:
        raise ValueError(f"c0 must be positive, got {c0}")
    return 0.5 * (1.0 - _phi(1.0 / math.sqrt(c0)))


def _check_gamma_beta(gamma: float, beta: float) -> None:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")


def K_up(gamma: float, beta: float) -> float:
    """Upper band constant.

    gamma >= 1: 2g G(2bg) 2^(b(1-g)) (G(1 - 1/(2g))/sqrt(pi))^(-2gb)
    gamma <  1: 2g G(2bg) 2^(-bg) G(b)/(g G(bg))
    """
    _check_gamma_beta(gamma, beta)
    if gamma >= 1.0:
        if not gamma > 0.5:
            raise ValueError("branch requires gamma > 1/2")
        lg = (math.log(2.0 * gamma) + gammaln(2.0 * beta * gamma)
              + beta * (1.0 - gamma) * math.log(2.0)
              - 2.0 * gamma * beta * (gammaln(1.0 - 1.0 / (2.0 * gamma))
                                      - 0.5 * math.log(math.pi)))
        return math.exp(lg)
    lg = (math.log(2.0 * gamma) + gammaln(2.0 * beta * gamma)
          - beta * gamma * math.log(2.0)
          + gammaln(beta) - math.log(gamma) - gammaln(beta * gamma))
    return math.exp(lg)


def K_down(gamma: float, beta: float, c0: float | None = None) -> float:
    """Lower band constant; c0 is required exactly when gamma >= 1.

    gamma >= 1: 2g theta(c0) int_0^inf y^(2gb-1) exp(-c0^g y^(2g)) dy,
                which evaluates to theta(c0) Gamma(b) c0^(-g b).
    gamma <  1: K_up(gamma, beta) 2^(-beta).
    """
    _check_gamma_beta(gamma, beta)
    if gamma >= 1.0:
        if c0 is None:
            raise ValueError("c0 is required for gamma >= 1")
        if not c0 > 0:
            raise ValueError(f"c0 must be positive, got {c0}")
        return theta(c0) * math.exp(gammaln(beta) - gamma * beta * math.log(c0))
    if c0 is not None:
        raise ValueError("c0 applies only to the gamma >= 1 branch")
    lg = (math.log(2.0 * gamma) + gammaln(2.0 * beta * gamma)
          - beta * (1.0 + gamma) * math.log(2.0)
          + gammaln(beta) - math.log(gamma) - gammaln(beta * gamma))
    return math.exp(lg)


def K_down_quad(gamma: float, beta: float, c0: float) -> float:
    """Direct quadrature of the K_down integral (gamma >= 1 branch)."""
    def integrand(y):
        return y ** (2.0 * gamma * beta - 1.0) * math.exp(-c0 ** gamma * y ** (2.0 * gamma))

    val, err = integrate.quad(integrand, 0.0, math.inf, epsabs=1e-12, limit=400)
    if err > 1e-7:
        raise ArithmeticError(f"quadrature error {err:.2e}")
    return 2.0 * gamma * theta(c0) * val


def K_down_sup(gamma: float, beta: float) -> tuple[float, float]:
    """(argmax c0*, sup value) of c0 -> K_down(gamma, beta, c0), gamma >= 1.

    Golden-section search on log c0 over [1e-4, 1e4]; reports a boundary hit
    via ValueError if the optimum sits at the search edge.
    """
    if gamma < 1.0:
        raise ValueError("the c0 optimization applies to gamma >= 1 only")
    lo, hi = math.log(1e-4), math.log(1e4)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0

    def f(x):
        return K_down(gamma, beta, math.exp(x))

    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while abs(f(a) - f(b)) > 1e-10 or (b - a) > 1e-8:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
        if (b - a) < 1e-12:
            break
    x_star = (a + b) / 2.0
    if x_star - lo < 1e-3 or hi - x_star < 1e-3:
        raise ValueError("K_down optimum hit the c0 search boundary")
    return math.exp(x_star), f(x_star)


# ---------------------------------------------------------------------------
# Phase classifier


@dataclass(frozen=True)
class PhaseVerdict:
    verdict: str          # ExtinctAS | SurvivesWP | BoundaryInconclusive | OutsideHypotheses
    reason: str
    numbers: dict


def classify_phase(gamma: float, edge_or_beta, L: SlowlyVarying | None,
                   eta: EtaLaw) -> PhaseVerdict:
    """Extinction/survival verdict from the dichotomy and its boundary tests.

    Accepts either an edge law (scaling derived) or an explicit beta with L.
    Special families short-circuit: a log-corrected edge survives for every
    gamma; support truncated away from 1 dies out for every gamma (finite
    mean occupation).
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    mean_eta = eta.mean()
    p0 = eta.prob_zero()
    bc = beta_c(gamma)
    numbers: dict = {"beta_c": bc}

    if isinstance(edge_or_beta, (LogCorrected, TruncatedSupport, PointMass)):
        flag = edge_scaling(edge_or_beta)[2]
        if flag == "log_corrected":
            if p0 < 1.0:
                return PhaseVerdict("SurvivesWP",
                                    "log-corrected edge: survival for every gamma",
                                    numbers)
            return PhaseVerdict("OutsideHypotheses",
                                "log-corrected edge but P(eta=0)=1", numbers)
        # truncated / point mass below 1
        if math.isfinite(mean_eta):
            return PhaseVerdict("ExtinctAS",
                                "support bounded away from 1: extinction for every gamma",
                                numbers)
        return PhaseVerdict("OutsideHypotheses",
                            "support bounded away from 1 but E(eta)=inf", numbers)

    if isinstance(edge_or_beta, (int, float)):
        beta = float(edge_or_beta)
        if L is None:
            raise ValueError("explicit beta requires an explicit L")
    else:
        beta, L_derived, flag = edge_scaling(edge_or_beta)
        if L is None:
            L = L_derived
    numbers["beta"] = beta

    if beta > bc:
        if math.isfinite(mean_eta):
            return PhaseVerdict("ExtinctAS", "beta > beta_c with E(eta) < inf", numbers)
        return PhaseVerdict("OutsideHypotheses", "beta > beta_c but E(eta) = inf", numbers)
    if beta < bc:
        if p0 < 1.0:
            return PhaseVerdict("SurvivesWP", "beta < beta_c with P(eta=0) < 1", numbers)
        return PhaseVerdict("OutsideHypotheses", "beta < beta_c but P(eta=0) = 1", numbers)

    # boundary beta = beta_c
    liminf_L, limsup_L = sv_limits(L)
    ku = K_up(gamma, beta)
    inv_mean = 0.0 if math.isinf(mean_eta) else 1.0 / mean_eta
    if gamma >= 1.0:
        c0_star, kd = K_down_sup(gamma, beta)
        numbers.update(K_up=ku, K_down_sup=kd, c0_star=c0_star)
    else:
        kd = K_down(gamma, beta)
        numbers.update(K_up=ku, K_down=kd)
    numbers.update(boundary_lhs_ext=2.0 * ku * limsup_L,
                   boundary_lhs_surv=kd * liminf_L,
                   boundary_rhs=inv_mean)
    if math.isfinite(mean_eta) and 2.0 * ku * limsup_L < inv_mean:
        return PhaseVerdict("ExtinctAS", "boundary extinction criterion met", numbers)
    if p0 < 1.0 and kd * liminf_L > inv_mean:
        return PhaseVerdict("SurvivesWP", "boundary survival criterion met", numbers)
    return PhaseVerdict("BoundaryInconclusive",
                        "beta = beta_c with neither boundary inequality met", numbers)
