"""Command-line front end: estimators, constants, classifier, simulation,
sweeps, and the verification suite.

Output contract: CSV files are byte-identical for identical argv + seed
(floats written via repr); timestamps live only in the sidecar manifest.
Exit codes: 0 success, 1 usage/config error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime
import hashlib
import json
import math
import sys

from . import __version__, asymptotics, frog_sim, one_particle, verify
from .distributions import (BetaFamily, Deterministic, Geometric, LogCorrected,
                            PointMass, Poisson, TruncatedSupport,
                            law_from_json, law_to_json)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are exit code 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


class UsageError(ValueError):
    pass


def parse_edge(text: str):
    """Edge-law spec: beta:a,b | logcorr:delta | point:p0 | trunc:cap:<base>
    or inline JSON matching the documented law schema."""
    if text.startswith("{"):
        return law_from_json(json.loads(text))
    kind, _, rest = text.partition(":")
    try:
        if kind == "beta":
            a, b = (float(x) for x in rest.split(","))
            return BetaFamily(a=a, b=b)
        if kind == "logcorr":
            return LogCorrected(delta=float(rest))
        if kind == "point":
            return PointMass(p0=float(rest))
        if kind == "trunc":
            cap, _, base = rest.partition(":")
            return TruncatedSupport(base=parse_edge(base), cap=float(cap))
    except (ValueError, TypeError) as e:
        raise UsageError(f"bad edge spec {text!r}: {e}") from e
    raise UsageError(f"unknown edge family in {text!r}")


def parse_eta(text: str):
    """Occupation spec: det:k | poisson:lam | geom:q."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "det":
            return Deterministic(k=int(rest))
        if kind == "poisson":
            return Poisson(lam=float(rest))
        if kind == "geom":
            return Geometric(q=float(rest))
    except (ValueError, TypeError) as e:
        raise UsageError(f"bad eta spec {text!r}: {e}") from e
    raise UsageError(f"unknown eta family in {text!r}")


def parse_sv(text: str):
    """Slowly-varying spec: const:c | logpow:delta | powlog:c,rho."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "const":
            return asymptotics.Constant(c=float(rest))
        if kind == "logpow":
            return asymptotics.LogPower(delta=float(rest))
        if kind == "powlog":
            c, rho = (float(x) for x in rest.split(","))
            return asymptotics.PowerOfLog(c=c, rho=rho)
    except (ValueError, TypeError) as e:
        raise UsageError(f"bad L spec {text!r}: {e}") from e
    raise UsageError(f"unknown L family in {text!r}")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",")]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",")]


@dataclasses.dataclass
class RunManifest:
    subcommand: str
    config_digest: str
    seed: int
    tool_version: str
    started: str
    finished: str


def _digest(args: argparse.Namespace) -> str:
    payload = {k: repr(v) for k, v in sorted(vars(args).items()) if k != "func"}
    return hashlib.sha256(json.dumps(payload).encode()).hexdigest()[:16]


def _write_manifest(out_path: str, manifest: RunManifest) -> None:
    with open(out_path + ".manifest.json", "w") as fh:
        json.dump(dataclasses.asdict(manifest), fh, indent=2)
        fh.write("\n")


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])


def _emit(args, header, rows, payload) -> None:
    if args.out:
        _write_csv(args.out, header, rows)
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    if not args.out and not getattr(args, "json", None):
        print(json.dumps(payload, indent=2))


# ---------------------------------------------------------------------------
# Subcommands

_TAIL_HEADER = ["n", "value", "err", "method", "beta", "gamma",
                "L_at_n2gamma", "ratio"]


def _tail_rows(points: list, gamma: float, edge) -> list[list]:
    beta, L, flag = (math.nan, None, "n/a")
    try:
        beta, L, flag = asymptotics.edge_scaling(edge)
    except (ValueError, TypeError):
        pass
    rows = []
    for pt in points:
        if flag is None and pt.n > 0:
            l_val = asymptotics.sv_eval(L, float(pt.n) ** (2.0 * gamma))
            ratio = pt.n * pt.value / (pt.n ** (1.0 - 2.0 * beta * gamma) * l_val)
        else:
            l_val, ratio = math.nan, math.nan
        rows.append([pt.n, float(pt.value), float(pt.err), pt.method,
                     float(beta), float(gamma), float(l_val), float(ratio)])
    return rows


def cmd_tail(args) -> int:
    edge = parse_edge(args.edge)
    points = []
    for n in args.n:
        if args.method == "exact":
            points.append(one_particle.tail_exact(n, edge, args.gamma,
                                                  eps=args.eps))
        elif args.method == "mc":
            points.append(one_particle.tail_mc(n, edge, args.gamma, args.reps,
                                               args.seed))
        else:
            points.append(one_particle.tail_rb(n, edge, args.gamma, args.reps,
                                               args.seed))
    rows = _tail_rows(points, args.gamma, edge)
    payload = [dict(zip(_TAIL_HEADER, r)) for r in rows]
    _emit(args, _TAIL_HEADER, rows, payload)
    return 0


def cmd_ratio(args) -> int:
    edge = parse_edge(args.edge)
    eps_or_reps = args.reps if args.method in ("mc", "rb") else args.eps
    pts = one_particle.ratio_curve(args.n, edge, args.gamma, method=args.method,
                                   eps_or_reps=eps_or_reps, seed=args.seed)
    ests = [one_particle.TailEstimate(n=p.n, value=p.value, err=p.value_err,
                                      method=p.method) for p in pts]
    rows = _tail_rows(ests, args.gamma, edge)
    payload = [dict(zip(_TAIL_HEADER, r)) for r in rows]
    _emit(args, _TAIL_HEADER, rows, payload)
    return 0


def cmd_constants(args) -> int:
    gamma, beta = args.gamma, args.beta
    out: dict = {"beta_c": asymptotics.beta_c(gamma)}
    if beta is not None:
        out["K_up"] = asymptotics.K_up(gamma, beta)
        if gamma >= 1.0:
            if args.c0 is not None:
                out["K_down"] = asymptotics.K_down(gamma, beta, args.c0)
            c0_star, kds = asymptotics.K_down_sup(gamma, beta)
            out["K_down_sup"] = kds
            out["c0_star"] = c0_star
        else:
            out["K_down"] = asymptotics.K_down(gamma, beta)
    if args.c0 is not None:
        out["theta"] = asymptotics.theta(args.c0)
    _emit(args, list(out), [list(out.values())], out)
    return 0


def cmd_classify(args) -> int:
    eta = parse_eta(args.eta)
    if args.edge is not None:
        target = parse_edge(args.edge)
        L = parse_sv(args.L) if args.L else None
    else:
        if args.beta is None:
            raise UsageError("classify needs --edge or --beta")
        target = args.beta
        L = parse_sv(args.L) if args.L else asymptotics.Constant(1.0)
    v = asymptotics.classify_phase(args.gamma, target, L, eta)
    payload = {"verdict": v.verdict, "reason": v.reason, "numbers": v.numbers}
    _emit(args, ["verdict", "reason"], [[v.verdict, v.reason]], payload)
    return 0


_SWEEP_HEADER = ["beta", "gamma", "reps", "horizon", "survived", "estimate",
                 "ci_low", "ci_high", "verdict"]


def _frog_row(cfg: frog_sim.FrogConfig, threads: int) -> list:
    est, lo, hi, _ = frog_sim.survival_prob(cfg, threads=threads)
    try:
        beta = asymptotics.edge_scaling(cfg.edge)[0]
    except (ValueError, TypeError):
        beta = math.nan
    verdict = asymptotics.classify_phase(cfg.gamma, cfg.edge, None, cfg.eta).verdict
    return [float(beta), float(cfg.gamma), cfg.reps, cfg.horizon,
            int(round(est * cfg.reps)), float(est), float(lo), float(hi), verdict]


def cmd_frog(args) -> int:
    cfg = frog_sim.FrogConfig(gamma=args.gamma, edge=parse_edge(args.edge),
                              eta=parse_eta(args.eta), horizon=args.horizon,
                              reps=args.reps, seed=args.seed)
    row = _frog_row(cfg, args.threads)
    payload = dict(zip(_SWEEP_HEADER, row))
    payload["edge"] = law_to_json(cfg.edge)
    _emit(args, _SWEEP_HEADER, [row], payload)
    return 0


def cmd_sweep(args) -> int:
    base = frog_sim.FrogConfig(gamma=1.0, edge=BetaFamily(1.0, 1.0),
                               eta=parse_eta(args.eta), horizon=args.horizon,
                               reps=args.reps, seed=args.seed)
    rows_dicts = frog_sim.phase_sweep(args.betas, args.gammas, base,
                                      threads=args.threads)
    rows = [[r[k] for k in _SWEEP_HEADER] for r in rows_dicts]
    _emit(args, _SWEEP_HEADER, rows, rows_dicts)
    return 0


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, seed=args.seed)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: observed={r.observed:.6g} "
              f"target={r.target:.6g} tol={r.tolerance:.3g} ({r.detail})")
    payload = [dataclasses.asdict(r) for r in results]
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    if args.out:
        _write_csv(args.out,
                   ["name", "target", "observed", "tolerance", "passed"],
                   [[r.name, r.target, r.observed, r.tolerance, r.passed]
                    for r in results])
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    return 2 if n_fail else 0


# ---------------------------------------------------------------------------
# Argument wiring


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--json", help="JSON output path")
    p.add_argument("--config", help="JSON file supplying defaults for flags")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="frogmodel",
                 description="Frog-model simulation and numerics toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("tail", help="one-particle displacement tail")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--edge", required=True)
    p.add_argument("--method", choices=["exact", "mc", "rb"], default="exact")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--reps", type=int, default=10**5)
    _add_common(p)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("ratio", help="normalized ratio curve")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--edge", required=True)
    p.add_argument("--method", choices=["exact", "mc", "rb"], default="exact")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--reps", type=int, default=10**5)
    _add_common(p)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("constants", help="critical constants")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--c0", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("classify", help="phase classification")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--edge")
    p.add_argument("--L", help="slowly varying spec (const:c|logpow:d|powlog:c,r)")
    p.add_argument("--eta", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("frog", help="interacting-system survival estimate")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--edge", required=True)
    p.add_argument("--eta", default="det:1")
    p.add_argument("--horizon", type=int, default=4000)
    p.add_argument("--reps", type=int, default=400)
    _add_common(p)
    p.set_defaults(func=cmd_frog)

    p = sub.add_parser("sweep", help="phase-diagram sweep")
    p.add_argument("--betas", type=_float_list, required=True)
    p.add_argument("--gammas", type=_float_list, required=True)
    p.add_argument("--eta", default="det:1")
    p.add_argument("--horizon", type=int, default=4000)
    p.add_argument("--reps", type=int, default=400)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="numerical verification suite")
    p.add_argument("--suite", default="all",
                   choices=["all"] + sorted(verify.SUITES))
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return ap


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config) as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {args.config!r}: {e}") from e
    if not isinstance(conf, dict):
        raise UsageError("config file must contain a JSON object")
    # config supplies values only where the command line left the default
    defaults = {}
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            sp = action.choices.get(args.subcommand)
            if sp is not None:
                defaults = {a.dest: a.default for a in sp._actions}
    for key, val in conf.items():
        if not hasattr(args, key):
            raise UsageError(f"config key {key!r} does not match any flag")
        if getattr(args, key) == defaults.get(key):
            setattr(args, key, val)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()
    try:
        _apply_config(args, parser)
        code = args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    finished = datetime.datetime.now(datetime.timezone.utc).isoformat()
    if getattr(args, "out", None):
        manifest = RunManifest(subcommand=args.subcommand,
                               config_digest=_digest(args),
                               seed=getattr(args, "seed", 0),
                               tool_version=__version__,
                               started=started, finished=finished)
        _write_manifest(args.out, manifest)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
