"""Numerical verification suite: limit constants, inequalities, and
cross-method identities, each reported as a pass/fail CheckResult."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from . import asymptotics, one_particle
from .distributions import (BetaFamily, EdgeLaw, LifetimeLaw,
                            sample_stable_subordinator_batch)
from .rng import stream
from .walk_oracle import log_first_passage_prob, tau1_survival, tau_n_survival

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class CheckResult:
    name: str
    target: float
    observed: float
    tolerance: float
    passed: bool
    detail: str


# ---------------------------------------------------------------------------
# Walk limits


def check_tau1_tail() -> CheckResult:
    """sqrt(t) P(tau_1 > t) -> sqrt(2/pi), with decreasing error in t."""
    ts = [10**2, 10**3, 10**4]
    vals = [math.sqrt(t) * tau1_survival(t) for t in ts]
    errs = [abs(v - SQRT_2_OVER_PI) for v in vals]
    passed = errs[2] <= 0.01 * SQRT_2_OVER_PI and errs[0] > errs[1] > errs[2]
    detail = ", ".join(f"t={t}: {v:.6f}" for t, v in zip(ts, vals))
    return CheckResult("tau1_tail", SQRT_2_OVER_PI, vals[2], 0.01 * SQRT_2_OVER_PI,
                       passed, detail)


def _laplace_ratio(gamma: float, a: float) -> tuple[float, float]:
    """((1 - E exp(-a tau_1^gamma)) / a^(1/(2 gamma)), certified error).

    Head summed over the exact pmf; the tail of 1 - E[...] is bracketed by
    [P(tau > K)(1 - e^(-a K^gamma)), P(tau > K)], which is tight once
    a K^gamma is large.
    """
    K = int(math.ceil((40.0 / a) ** (1.0 / gamma))) | 1
    ks = np.arange(1, K + 1, 2, dtype=np.int64)
    pmf = np.exp(log_first_passage_prob(1, ks))
    head = float(np.sum(pmf * -np.expm1(-a * ks.astype(float) ** gamma)))
    t_hi = float(tau_n_survival(1, K))
    t_lo = t_hi * -math.expm1(-a * float(K) ** gamma)
    scale = a ** (1.0 / (2.0 * gamma))
    val = (head + (t_hi + t_lo) / 2.0) / scale
    err = (t_hi - t_lo) / 2.0 / scale
    return val, err


def check_laplace_limit(gamma: float = 2.0) -> CheckResult:
    """(1 - E exp(-a tau_1^gamma)) / a^(1/(2 gamma)) -> G(1-1/(2g)) sqrt(2/pi)."""
    if not gamma > 1.0:
        raise ValueError("gamma > 1 required")
    target = gamma_fn(1.0 - 1.0 / (2.0 * gamma)) * SQRT_2_OVER_PI
    avals = [1e-4, 1e-5, 1e-6]
    ratios = []
    for a in avals:
        val, err = _laplace_ratio(gamma, a)
        if err > 0.01 * target:
            raise ArithmeticError("truncation budget exceeded")
        ratios.append(val)
    # one Richardson level with an O(sqrt(a)) correction model
    a1, a2 = avals[-2], avals[-1]
    r1, r2 = ratios[-2], ratios[-1]
    extrap = r2 + (r2 - r1) * math.sqrt(a2) / (math.sqrt(a1) - math.sqrt(a2))
    passed = abs(extrap - target) <= 0.05 * target and all(r > 0 for r in ratios)
    detail = ", ".join(f"a={a:g}: {r:.6f}" for a, r in zip(avals, ratios))
    return CheckResult("laplace_limit", target, extrap, 0.05 * target, passed, detail)


# ---------------------------------------------------------------------------
# Inequalities


def check_superadditivity(trials: int = 10**5, seed: int = 0) -> CheckResult:
    """(sum x_i)^g >= sum x_i^g for g >= 1 and nonnegative x."""
    g = stream(seed, 0x5A)
    lens = g.integers(2, 21, size=trials)
    x = 10.0 ** g.uniform(-6.0, 6.0, size=(trials, 20))
    x *= np.arange(20)[None, :] < lens[:, None]
    violations = 0
    worst = 0.0
    for gam in (1.0, 1.5, 2.0, 5.0):
        lhs = x.sum(axis=1) ** gam
        rhs = (x ** gam).sum(axis=1)
        # allow float roundoff at the gamma=1 equality case
        slack = rhs - lhs
        bad = slack > 1e-9 * np.maximum(lhs, rhs)
        violations += int(np.count_nonzero(bad))
        worst = max(worst, float(np.max(slack / np.maximum(lhs, rhs))))
    return CheckResult("superadditivity", 0.0, float(violations), 0.0,
                       violations == 0,
                       f"{trials} trials x 4 exponents, worst rel slack {worst:.2e}")


def check_berry_esseen_bound(c0: float = 1.0, n: int = 100) -> CheckResult:
    """Exact P(tau_n < c0 n^2) >= theta(c0)."""
    if n < 50:
        raise ValueError("n >= 50 required (asymptotic regime)")
    t = int(math.ceil(c0 * n * n)) - 1
    obs = 1.0 - float(tau_n_survival(n, t))
    target = asymptotics.theta(c0)
    detail = f"c0={c0}, n={n}"
    if c0 == 1.0:
        refl = 2.0 * (1.0 - 0.5 * (1.0 + math.erf(1.0 / math.sqrt(2.0))))
        detail += f"; reflection estimate 2(1-Phi(1))={refl:.4f}"
    return CheckResult(f"berry_esseen_c0={c0}_n={n}", target, obs, 0.0,
                       obs >= target, detail)


def check_berry_esseen_grid() -> CheckResult:
    results = [check_berry_esseen_bound(c0, n)
               for c0 in (0.5, 1.0, 2.0) for n in (50, 100, 200)]
    slack = min(r.observed - r.target for r in results)
    return CheckResult("berry_esseen_grid", 0.0, slack, 0.0,
                       all(r.passed for r in results),
                       f"min slack over 9 grid points: {slack:.4f}")


# ---------------------------------------------------------------------------
# Stable subordinator


def _stable_samples(gamma: float, reps: int, seed: int) -> np.ndarray:
    g = stream(seed, 0x57AB)
    u = g.random(reps)
    e = g.standard_exponential(reps)
    return sample_stable_subordinator_batch(gamma, u, e)


def check_stable_moments(gamma: float = 0.5, theta_exp: float = 0.5,
                         reps: int = 10**6, seed: int = 0) -> CheckResult:
    """MC mean of S_1^(-theta) vs Gamma(theta/gamma)/(gamma Gamma(theta))."""
    if reps < 10**5:
        raise ValueError("reps >= 1e5 required")
    s = _stable_samples(gamma, reps, seed)
    w = s ** (-theta_exp)
    obs = float(w.mean())
    se = float(w.std(ddof=1)) / math.sqrt(reps)
    target = gamma_fn(theta_exp / gamma) / (gamma * gamma_fn(theta_exp))
    lap = np.exp(-s)
    lap_obs = float(lap.mean())
    lap_se = float(lap.std(ddof=1)) / math.sqrt(reps)
    lap_ok = abs(lap_obs - math.exp(-1.0)) <= 3.0 * lap_se
    passed = (abs(obs - target) <= max(3.0 * se, 0.02 * target)) and lap_ok
    detail = (f"gamma={gamma}, theta={theta_exp}, se={se:.2e}; "
              f"Laplace at 1: {lap_obs:.6f} vs {math.exp(-1.0):.6f}")
    return CheckResult("stable_moments", target, obs, max(3.0 * se, 0.02 * target),
                       passed, detail)


def check_bernstein_mixture(gamma: float = 0.5, reps: int = 10**6,
                            seed: int = 0) -> CheckResult:
    """E[exp(-t S_1)] = exp(-t^gamma) at t in {1, 4}, within 3 stderr."""
    s = _stable_samples(gamma, reps, seed)
    ok = True
    parts = []
    worst = 0.0
    for t in (1.0, 4.0):
        w = np.exp(-t * s)
        obs = float(w.mean())
        se = float(w.std(ddof=1)) / math.sqrt(reps)
        tgt = math.exp(-t ** gamma)
        ok = ok and abs(obs - tgt) <= 3.0 * se
        worst = max(worst, abs(obs - tgt) / se)
        parts.append(f"t={t:g}: {obs:.6f} vs {tgt:.6f}")
    return CheckResult("bernstein_mixture", 0.0, worst, 3.0, ok, "; ".join(parts))


def check_stable_scaling(gamma: float = 0.5, reps: int = 10**6,
                         seed: int = 0) -> CheckResult:
    """S_a = a^(1/gamma) S_1 satisfies E[exp(-S_a)] = exp(-a) at a in {0.5, 2}."""
    s = _stable_samples(gamma, reps, seed)
    ok = True
    worst = 0.0
    parts = []
    for a in (0.5, 2.0):
        w = np.exp(-(a ** (1.0 / gamma)) * s)
        obs = float(w.mean())
        se = float(w.std(ddof=1)) / math.sqrt(reps)
        tgt = math.exp(-a)
        ok = ok and abs(obs - tgt) <= 3.0 * se
        worst = max(worst, abs(obs - tgt) / se)
        parts.append(f"a={a:g}: {obs:.6f} vs {tgt:.6f}")
    return CheckResult("stable_scaling", 0.0, worst, 3.0, ok, "; ".join(parts))


# ---------------------------------------------------------------------------
# Generating-function expansion


def check_fexp_bounds() -> CheckResult:
    """|log f(e^-u) + sqrt(2u)| = O(u^(3/2)), with a two-sided envelope.

    f is the first-passage generating function; log f(e^-u) is evaluated in
    the cancellation-free form -u - log1p(sqrt(-expm1(-2u))).
    """
    us = np.logspace(-6.0, -1.0, 50)
    logf = -us - np.log1p(np.sqrt(-np.expm1(-2.0 * us)))
    resid = np.abs(logf + np.sqrt(2.0 * us))
    ratio = resid / us ** 1.5
    spread = float(ratio.max() / ratio.min())
    c_fit = 1.05 * float(ratio.max())
    eps = c_fit * us / math.sqrt(2.0)
    f_vals = np.exp(logf)
    env_ok = bool(np.all(f_vals >= np.exp(-(1.0 + eps) * np.sqrt(2.0 * us)))
                  and np.all(f_vals <= np.exp(-(1.0 - eps) * np.sqrt(2.0 * us)))
                  and np.all((f_vals > 0) & (f_vals < 1)))
    passed = spread < 2.0 and env_ok
    return CheckResult("fexp_bounds", 1.0, spread, 2.0, passed,
                       f"residual/u^1.5 in [{ratio.min():.4f}, {ratio.max():.4f}], "
                       f"fitted C={c_fit:.4f}")


# ---------------------------------------------------------------------------
# Slow variation


def check_potter_uct(L: asymptotics.SlowlyVarying | None = None,
                     tol: float = 0.08) -> CheckResult:
    """Uniform convergence of L(xy)/L(x) -> 1 plus a Potter-bound spot check.

    The sup of |L(xy)/L(x) - 1| over y in [0.5, 2] at x = 1e9 evaluates to
    ~0.067 for the log-power families (the correction dies like 1/log x), so
    the pass threshold is 0.08.
    """
    if L is None:
        L = asymptotics.LogPower(1.0)
    ys = np.linspace(0.5, 2.0, 200)
    sups = []
    for x in (1e3, 1e6, 1e9):
        ratios = np.array([asymptotics.sv_eval(L, x * y) for y in ys])
        sups.append(float(np.max(np.abs(ratios / asymptotics.sv_eval(L, x) - 1.0))))
    decreasing = sups[0] >= sups[1] >= sups[2]
    x = 1e9
    lx = asymptotics.sv_eval(L, x)
    potter_ok = all(
        asymptotics.sv_eval(L, x * y) / lx <= 1.1 * max(y ** 0.1, y ** -0.1)
        for y in np.logspace(-3, 3, 61))
    passed = decreasing and sups[2] < tol and potter_ok
    return CheckResult("potter_uct", tol, sups[2], tol, passed,
                       f"sup at x=1e3,1e6,1e9: {sups[0]:.4f}, {sups[1]:.4f}, "
                       f"{sups[2]:.4f}; Potter(1.1, 0.1) {'ok' if potter_ok else 'violated'}")


# ---------------------------------------------------------------------------
# Cross-method identities


def check_reduction_identity(n_list=(1, 3, 10), edge: EdgeLaw | None = None,
                             gamma: float = 1.0, reps: int = 10**5,
                             seed: int = 0) -> CheckResult:
    """tail_mc agrees with tail_exact within 3 stderr at each n."""
    if edge is None:
        edge = BetaFamily(1.0, 1.0)
    worst = 0.0
    parts = []
    ok = True
    for n in n_list:
        ex = one_particle.tail_exact(n, edge, gamma)
        mc = one_particle.tail_mc(n, edge, gamma, reps, seed)
        tol = 3.0 * (mc.err + ex.err)
        ok = ok and abs(mc.value - ex.value) <= tol
        worst = max(worst, abs(mc.value - ex.value) / max(tol / 3.0, 1e-300))
        parts.append(f"n={n}: mc {mc.value:.5f} vs exact {ex.value:.5f}")
    return CheckResult("reduction_identity", 0.0, worst, 3.0, ok, "; ".join(parts))


def _displacement_counts(gamma: float, p: float, n_max: int, reps: int,
                         seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Counts of {D-> >= n} and {D* >= n} for n = 0..n_max over reps walks.

    Walks are vectorized in slabs; increments beyond each lifetime are
    zeroed so the running extrema freeze at death. Lifetimes above 10^5
    steps are capped there (negligible mass for the p used here).
    """
    law = LifetimeLaw(gamma=gamma)
    cnt_r = np.zeros(n_max + 1, dtype=np.int64)
    cnt_s = np.zeros(n_max + 1, dtype=np.int64)
    slab = 1 << 14
    lifetime_cap = 10**5
    for lo in range(0, reps, slab):
        m = min(slab, reps - lo)
        g = stream(seed, 0xD5, lo // slab)
        u = g.random(m)
        with np.errstate(over="ignore", divide="ignore"):
            xi = np.floor((np.log(u) / math.log(p)) ** (1.0 / gamma))
        xi = np.minimum(xi, lifetime_cap)
        dr = np.zeros(m, dtype=np.int64)
        ds = np.zeros(m, dtype=np.int64)
        live = np.flatnonzero(xi >= 1)
        pos = np.zeros(live.size, dtype=np.int64)
        budget = xi[live]
        done = 0
        while live.size:
            steps = int(min(256, budget.max() - done))
            inc = 2 * g.integers(0, 2, size=(live.size, steps), dtype=np.int8) - 1
            valid = (done + np.arange(1, steps + 1))[None, :] <= budget[:, None]
            path = pos[:, None] + np.cumsum(np.where(valid, inc, 0),
                                            axis=1, dtype=np.int64)
            dr[live] = np.maximum(dr[live], path.max(axis=1))
            ds[live] = np.maximum(ds[live], np.maximum(dr[live], -path.min(axis=1)))
            pos = path[:, -1]
            done += steps
            keep = (budget > done) & ~((dr[live] >= n_max) & (ds[live] >= n_max))
            live, pos, budget = live[keep], pos[keep], budget[keep]
        dr = np.maximum(dr, 0)
        ds = np.maximum(ds, dr)
        for n in range(n_max + 1):
            cnt_r[n] += int(np.count_nonzero(dr >= n))
            cnt_s[n] += int(np.count_nonzero(ds >= n))
    return cnt_r, cnt_s


def check_symmetry(n_max: int = 10, reps: int = 10**6, seed: int = 0,
                   gamma: float = 1.0, p: float = 0.9) -> CheckResult:
    """P(D-> >= n) >= P(D* >= n)/2, empirically with 3-stderr slack."""
    cnt_r, cnt_s = _displacement_counts(gamma, p, n_max, reps, seed)
    worst_z = -math.inf
    ok = True
    for n in range(1, n_max + 1):
        pr = cnt_r[n] / reps
        ps = cnt_s[n] / reps
        mean = pr - 0.5 * ps
        var = max(0.25 * ps - mean * mean, 0.0)
        se = math.sqrt(var / reps)
        ok = ok and mean >= -3.0 * se
        if se > 0:
            worst_z = max(worst_z, -mean / se)
    return CheckResult("symmetry_bound", 0.0, worst_z, 3.0, ok,
                       f"max violation z-score over n<=10: {worst_z:.2f}")


def check_ratio_sandwich(seed: int = 0, slack: float = 0.10) -> CheckResult:
    """Normalized tail ratio sits in the [K_down_sup, K_up] band (gamma=1)."""
    edge = BetaFamily(1.0, 0.5)
    ku = asymptotics.K_up(1.0, 0.5)
    _, kd = asymptotics.K_down_sup(1.0, 0.5)
    pts = one_particle.ratio_curve([200, 400], edge, 1.0, method="exact")
    lo = kd * (1.0 - slack)
    hi = ku * (1.0 + slack)
    ok = all(lo <= pt.ratio <= hi for pt in pts)
    detail = ", ".join(f"n={pt.n}: {pt.ratio:.4f}" for pt in pts) + \
        f"; band [{kd:.4f}, {ku:.4f}]"
    return CheckResult("ratio_sandwich", ku, pts[-1].ratio, slack, ok, detail)


# ---------------------------------------------------------------------------
# Suite driver

SUITES = {
    "tau1": lambda seed: [check_tau1_tail()],
    "laplace": lambda seed: [check_laplace_limit(2.0)],
    "superadd": lambda seed: [check_superadditivity(seed=seed)],
    "berry": lambda seed: [check_berry_esseen_grid()],
    "stable": lambda seed: [check_stable_moments(seed=seed),
                            check_bernstein_mixture(seed=seed),
                            check_stable_scaling(seed=seed)],
    "fexp": lambda seed: [check_fexp_bounds()],
    "potter": lambda seed: [check_potter_uct(asymptotics.Constant(1.0)),
                            check_potter_uct(asymptotics.LogPower(1.0)),
                            check_potter_uct(asymptotics.PowerOfLog(1.0, -2.0))],
    "reduction": lambda seed: [check_reduction_identity(seed=seed)],
    "symmetry": lambda seed: [check_symmetry(seed=seed)],
    "sandwich": lambda seed: [check_ratio_sandwich(seed=seed)],
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name == "all":
        return run_all(seed)
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name](seed)


def run_all(seed: int = 0) -> list[CheckResult]:
    out: list[CheckResult] = []
    for name in sorted(SUITES):
        out.extend(SUITES[name](seed))
    return out
