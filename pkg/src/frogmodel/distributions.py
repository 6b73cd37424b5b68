"""Laws and samplers: discrete Weibull lifetimes, survival-parameter edge
densities, initial occupations, and the one-sided stable subordinator.

All samplers consume explicitly passed uniform/exponential variates so that
callers control the random streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate
from scipy.special import betainc, betaincinv, betaln, gammaln


# ---------------------------------------------------------------------------
# Lifetimes


@dataclass(frozen=True)
class LifetimeLaw:
    """Discrete Weibull lifetime: P(Xi >= k | p) = p^(k^gamma)."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def dw_survival(law: LifetimeLaw, p: float, k: int) -> float:
    """Survival function P(Xi >= k | pi = p) = p^(k^gamma)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k == 0:
        return 1.0
    return math.exp(float(k) ** law.gamma * math.log(p))


def lifetime_raw(law: LifetimeLaw, p: float, u: float) -> float:
    """Inverse-transform lifetime as a float, with no cap.

    Xi = floor((ln u / ln p)^(1/gamma)); may be astronomically large (or inf)
    when p is close to 1.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0,1), got {p}")
    if not 0.0 < u < 1.0:
        raise ValueError(f"u must be in (0,1), got {u}")
    with np.errstate(over="ignore", divide="ignore"):
        ratio = math.log(u) / math.log(p)
    return math.floor(ratio ** (1.0 / law.gamma))


def sample_lifetime(law: LifetimeLaw, p: float, u: float,
                    cap: int | None = None) -> tuple[int, bool]:
    """Sample Xi by inverse transform; P(Xi >= k) = p^(k^gamma) exactly.

    Returns (lifetime, censored). When a cap is given (typically the
    simulation horizon + 1) the result is clamped there and flagged, since
    only death-before-horizon matters to the dynamics.
    """
    xi = lifetime_raw(law, p, u)
    if cap is not None and xi > cap:
        return cap, True
    return int(xi), False


# ---------------------------------------------------------------------------
# Survival-parameter edge laws


@dataclass(frozen=True)
class BetaFamily:
    """Beta(a, b) survival parameter; edge exponent b, constant L = 1/B(a,b)."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("Beta parameters must be positive")


@dataclass(frozen=True)
class LogCorrected:
    """Density g(u) = delta (1-u)^-1 (1 + log 1/(1-u))^-(1+delta).

    Distinguished survival-forcing family: the edge exponent degenerates to
    the beta -> 0 regime with L(x) = delta (1 + log x)^-(1+delta).
    """

    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")


@dataclass(frozen=True)
class TruncatedSupport:
    """Base edge law conditioned on [0, cap], cap < 1 (no mass near 1)."""

    base: "EdgeLaw"
    cap: float

    def __post_init__(self):
        if not 0.0 < self.cap < 1.0:
            raise ValueError("cap must be in (0,1)")


@dataclass(frozen=True)
class Tabulated:
    """Density given on a grid of (u, density) pairs, linearly interpolated.

    The caller must declare beta/L for ratio normalization; they are never
    estimated from the table.
    """

    us: tuple
    densities: tuple

    def __post_init__(self):
        us = np.asarray(self.us, dtype=float)
        ds = np.asarray(self.densities, dtype=float)
        if us.ndim != 1 or us.shape != ds.shape or us.size < 2:
            raise ValueError("grid must be two equal-length 1-d sequences")
        if not (np.all(np.diff(us) > 0) and us[0] >= 0.0 and us[-1] <= 1.0):
            raise ValueError("u grid must be increasing within [0,1]")
        if np.any(ds < 0):
            raise ValueError("density must be nonnegative")


@dataclass(frozen=True)
class PointMass:
    """Degenerate edge law with all mass at p0 (a tabulated spike)."""

    p0: float

    def __post_init__(self):
        if not 0.0 < self.p0 < 1.0:
            raise ValueError("p0 must be in (0,1)")


EdgeLaw = Union[BetaFamily, LogCorrected, TruncatedSupport, Tabulated, PointMass]


def edge_density(edge: EdgeLaw, u) -> np.ndarray:
    """Density f_pi(u) of the survival parameter (vectorized in u)."""
    u = np.asarray(u, dtype=float)
    if isinstance(edge, BetaFamily):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            logf = ((edge.a - 1) * np.log(u) + (edge.b - 1) * np.log1p(-u)
                    - betaln(edge.a, edge.b))
            out = np.exp(logf)
        return np.where((u <= 0) | (u >= 1), _edge_endpoint(edge.a, edge.b, u), out)
    if isinstance(edge, LogCorrected):
        h = 1.0 - u
        out = np.zeros_like(u)
        ok = (h > 0) & (u >= 0)
        out[ok] = edge.delta / h[ok] / (1.0 - np.log(h[ok])) ** (1.0 + edge.delta)
        return out
    if isinstance(edge, TruncatedSupport):
        z = _trunc_norm(edge)
        return np.where(u <= edge.cap, edge_density(edge.base, u) / z, 0.0)
    if isinstance(edge, Tabulated):
        return np.interp(u, np.asarray(edge.us), np.asarray(edge.densities),
                         left=0.0, right=0.0)
    if isinstance(edge, PointMass):
        raise ValueError("point mass has no density")
    raise TypeError(f"unknown edge law {edge!r}")


def _edge_endpoint(a: float, b: float, u: np.ndarray) -> np.ndarray:
    left = 0.0 if a > 1 else (1.0 / math.exp(betaln(a, b)) if a == 1 else np.inf)
    right = 0.0 if b > 1 else (1.0 / math.exp(betaln(a, b)) if b == 1 else np.inf)
    return np.where(u <= 0, np.where(u == 0, left, 0.0),
                    np.where(u == 1, right, 0.0))


def _trunc_norm(edge: TruncatedSupport) -> float:
    return float(edge_cdf(edge.base, edge.cap))


def _tab_cum(edge: Tabulated) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    us = np.asarray(edge.us, dtype=float)
    ds = np.asarray(edge.densities, dtype=float)
    cum = np.concatenate(([0.0],
                          np.cumsum(np.diff(us) * (ds[1:] + ds[:-1]) / 2.0)))
    return us, ds, cum


def edge_cdf(edge: EdgeLaw, v) -> np.ndarray:
    """CDF of the survival parameter at v (vectorized)."""
    v = np.asarray(v, dtype=float)
    if isinstance(edge, BetaFamily):
        return betainc(edge.a, edge.b, np.clip(v, 0.0, 1.0))
    if isinstance(edge, LogCorrected):
        out = np.zeros_like(v)
        mid = (v > 0) & (v < 1)
        out[mid] = 1.0 - (1.0 - np.log1p(-v[mid])) ** (-edge.delta)
        out[v >= 1] = 1.0
        return out
    if isinstance(edge, TruncatedSupport):
        z = _trunc_norm(edge)
        return np.clip(edge_cdf(edge.base, np.minimum(v, edge.cap)) / z, 0.0, 1.0)
    if isinstance(edge, Tabulated):
        # exact integral of the piecewise-linear density (quadratic pieces)
        us, ds, cum = _tab_cum(edge)
        idx = np.clip(np.searchsorted(us, v, side="right") - 1, 0, us.size - 2)
        x = np.clip(v, us[0], us[-1]) - us[idx]
        slope = (ds[idx + 1] - ds[idx]) / (us[idx + 1] - us[idx])
        out = cum[idx] + ds[idx] * x + 0.5 * slope * x * x
        return np.clip(np.where(v < us[0], 0.0, out), 0.0, None)
    if isinstance(edge, PointMass):
        return np.where(v >= edge.p0, 1.0, 0.0)
    raise TypeError(f"unknown edge law {edge!r}")


def density_norm_error(edge: EdgeLaw) -> float:
    """|integral of the density - 1|; closed form where available."""
    if isinstance(edge, (BetaFamily, LogCorrected, PointMass)):
        return 0.0
    if isinstance(edge, TruncatedSupport):
        return abs(float(edge_cdf(edge, edge.cap)) - 1.0)
    if isinstance(edge, Tabulated):
        us = np.asarray(edge.us)
        ds = np.asarray(edge.densities)
        return abs(float(np.trapezoid(ds, us)) - 1.0)
    raise TypeError(f"unknown edge law {edge!r}")


def fractional_moment(edge: EdgeLaw, s: float) -> float:
    """M(s) = E[pi^s], the age-filter weight; s >= 0.

    Closed form for the Beta family (log-Gamma), adaptive quadrature with
    endpoint handling otherwise; absolute quadrature error <= 1e-8.
    """
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s}")
    if s == 0:
        return 1.0
    if isinstance(edge, BetaFamily):
        a, b = edge.a, edge.b
        return math.exp(gammaln(a + s) + gammaln(a + b) - gammaln(a + b + s) - gammaln(a))
    if isinstance(edge, PointMass):
        return math.exp(s * math.log(edge.p0))
    if isinstance(edge, LogCorrected):
        # substitute w = t^-delta with t = 1 + log(1/(1-u)): the heavy
        # algebraic tail maps onto a bounded integrand over (0, 1]
        d = edge.delta

        def integrand(w):
            t = w ** (-1.0 / d)
            return (-np.expm1(1.0 - t)) ** s

        val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-12, limit=400)
        if err > 1e-8:
            raise ArithmeticError(f"quadrature error {err:.2e} exceeds 1e-8")
        return float(val)
    if isinstance(edge, TruncatedSupport):
        z = _trunc_norm(edge)

        def integrand(u):
            return u ** s * edge_density(edge.base, u)

        val, err = integrate.quad(integrand, 0.0, edge.cap, epsabs=1e-12, limit=400)
        if err > 1e-8:
            raise ArithmeticError(f"quadrature error {err:.2e} exceeds 1e-8")
        return float(val) / z
    if isinstance(edge, Tabulated):
        us = np.asarray(edge.us, dtype=float)
        ds = np.asarray(edge.densities, dtype=float)
        grid = np.unique(np.concatenate([us, np.linspace(us[0], us[-1], 4097)]))
        f = np.interp(grid, us, ds)
        return float(np.trapezoid(grid ** s * f, grid))
    raise TypeError(f"unknown edge law {edge!r}")


def fractional_moment_quad(edge: EdgeLaw, s: float) -> float:
    """Quadrature evaluation of M(s), as an independent cross-check.

    Endpoint singularity (1-u)^(b-1) for b < 1 is removed by substituting
    h = v^(1/b) before integrating.
    """
    if s == 0:
        return 1.0
    if isinstance(edge, PointMass):
        return fractional_moment(edge, s)
    if isinstance(edge, BetaFamily):
        b = edge.b

        def integrand(v):
            h = v ** (1.0 / b)
            return (1.0 - h) ** s * edge_density(edge, 1.0 - h) * h / (b * v)

        val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-12, limit=400)
        if err > 1e-8:
            raise ArithmeticError(f"quadrature error {err:.2e}")
        return float(val)
    return fractional_moment(edge, s)


def sample_edge(edge: EdgeLaw, u: float) -> float:
    """Inverse-transform sample of the survival parameter from a uniform u."""
    if not 0.0 < u < 1.0:
        raise ValueError(f"u must be in (0,1), got {u}")
    return float(sample_edge_batch(edge, np.asarray([u]))[0])


def sample_edge_batch(edge: EdgeLaw, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if isinstance(edge, BetaFamily):
        return betaincinv(edge.a, edge.b, u)
    if isinstance(edge, LogCorrected):
        # closed inverse of F(v) = 1 - (1 + log 1/(1-v))^-delta
        return 1.0 - np.exp(1.0 - (1.0 - u) ** (-1.0 / edge.delta))
    if isinstance(edge, TruncatedSupport):
        z = _trunc_norm(edge)
        return sample_edge_batch(edge.base, u * z)
    if isinstance(edge, Tabulated):
        # exact inverse of the piecewise-quadratic cdf: solve
        # d x + slope x^2 / 2 = target - cum[i] on the bracketing segment
        us, ds, cum = _tab_cum(edge)
        target = u * cum[-1]
        idx = np.clip(np.searchsorted(cum, target, side="right") - 1, 0, us.size - 2)
        r = target - cum[idx]
        d = ds[idx]
        slope = (ds[idx + 1] - ds[idx]) / (us[idx + 1] - us[idx])
        with np.errstate(divide="ignore", invalid="ignore"):
            quad_root = (np.sqrt(d * d + 2.0 * slope * r) - d) / slope
            lin_root = r / d
        x = np.where(np.abs(slope) > 1e-12 * np.maximum(d, 1.0),
                     quad_root, np.where(d > 0, lin_root, 0.0))
        return np.clip(us[idx] + x, us[0], us[-1])
    if isinstance(edge, PointMass):
        return np.full_like(u, edge.p0)
    raise TypeError(f"unknown edge law {edge!r}")


# ---------------------------------------------------------------------------
# Initial occupations


@dataclass(frozen=True)
class Deterministic:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be nonnegative")

    def mean(self) -> float:
        return float(self.k)

    def prob_zero(self) -> float:
        return 1.0 if self.k == 0 else 0.0

    def sample(self, rng: np.random.Generator) -> int:
        return self.k


@dataclass(frozen=True)
class Poisson:
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")

    def mean(self) -> float:
        return self.lam

    def prob_zero(self) -> float:
        return math.exp(-self.lam)

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.poisson(self.lam))


@dataclass(frozen=True)
class Geometric:
    """Number of failures before the first success: P(eta = k) = q (1-q)^k."""

    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError("q must be in (0,1)")

    def mean(self) -> float:
        return (1.0 - self.q) / self.q

    def prob_zero(self) -> float:
        return self.q

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.geometric(self.q)) - 1


EtaLaw = Union[Deterministic, Poisson, Geometric]


# ---------------------------------------------------------------------------
# One-sided stable subordinator


def sample_stable_subordinator(gamma: float, u: float, e: float) -> float:
    """Sample S_1 with Laplace transform E[exp(-lam S_1)] = exp(-lam^gamma).

    Kanter's construction for the positive gamma-stable law, gamma in (0,1):
    S = (A(u) / e)^((1-gamma)/gamma) with u uniform and e exponential(1).
    """
    return float(sample_stable_subordinator_batch(
        gamma, np.asarray([u]), np.asarray([e]))[0])


def sample_stable_subordinator_batch(gamma: float, u: np.ndarray,
                                     e: np.ndarray) -> np.ndarray:
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must be in (0,1), got {gamma}")
    u = np.asarray(u, dtype=float)
    e = np.asarray(e, dtype=float)
    th = np.pi * u
    a = (np.sin(gamma * th) ** gamma * np.sin((1.0 - gamma) * th) ** (1.0 - gamma)
         / np.sin(th)) ** (1.0 / (1.0 - gamma))
    return (a / e) ** ((1.0 - gamma) / gamma)


# ---------------------------------------------------------------------------
# JSON serialization (documented schema: {"family": ..., params...})


def law_to_json(law) -> dict:
    if isinstance(law, LifetimeLaw):
        return {"family": "discrete_weibull", "gamma": law.gamma}
    if isinstance(law, BetaFamily):
        return {"family": "beta", "a": law.a, "b": law.b}
    if isinstance(law, LogCorrected):
        return {"family": "log_corrected", "delta": law.delta}
    if isinstance(law, TruncatedSupport):
        return {"family": "truncated", "base": law_to_json(law.base), "cap": law.cap}
    if isinstance(law, Tabulated):
        return {"family": "tabulated", "u": list(law.us), "density": list(law.densities)}
    if isinstance(law, PointMass):
        return {"family": "point_mass", "p0": law.p0}
    if isinstance(law, Deterministic):
        return {"family": "deterministic", "k": law.k}
    if isinstance(law, Poisson):
        return {"family": "poisson", "lambda": law.lam}
    if isinstance(law, Geometric):
        return {"family": "geometric", "q": law.q}
    raise TypeError(f"not a serializable law: {law!r}")


def law_from_json(obj: dict):
    fam = obj["family"]
    if fam == "discrete_weibull":
        return LifetimeLaw(gamma=float(obj["gamma"]))
    if fam == "beta":
        return BetaFamily(a=float(obj["a"]), b=float(obj["b"]))
    if fam == "log_corrected":
        return LogCorrected(delta=float(obj["delta"]))
    if fam == "truncated":
        return TruncatedSupport(base=law_from_json(obj["base"]), cap=float(obj["cap"]))
    if fam == "tabulated":
        return Tabulated(us=tuple(obj["u"]), densities=tuple(obj["density"]))
    if fam == "point_mass":
        return PointMass(p0=float(obj["p0"]))
    if fam == "deterministic":
        return Deterministic(k=int(obj["k"]))
    if fam == "poisson":
        return Poisson(lam=float(obj["lambda"]))
    if fam == "geometric":
        return Geometric(q=float(obj["q"]))
    raise ValueError(f"unknown law family {fam!r}")
