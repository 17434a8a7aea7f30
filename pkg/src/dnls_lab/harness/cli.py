"""Command-line entry point.

Every subcommand prints a single summary line on stdout. Exit status is 0 on
success, 1 when the integrator diverges and 2 on a usage error (bad flags,
unreadable config, or inputs outside an operation's domain).
"""

from __future__ import annotations

import argparse
import configparser
import sys

import numpy as np

from ..errors import DivergenceError, DNLSError
from ..evolution import SimConfig, evolve
from ..gauge import dnls_residual
from ..multipliers import BoundCase, bound_ratio_scan, dmvt_ratio_scan, identity_scan
from ..nonlinearity import MuMode
from ..spectral import NormSpec, SpectralProfile, norm, random_state
from .experiments import conservation_experiment, convergence_experiment, tail_experiment
from .io import SCHEMAS, write_csv

__all__ = ["run_cli", "build_parser", "main"]

SUBCOMMANDS = ("simulate", "converge", "tail", "identities", "multiplier", "gauge-check", "conserve")


class UsageError(Exception):
    pass


def _float_list(text):
    return [float(v) for v in str(text).replace(",", " ").split()]


def _int_list(text):
    return [int(v) for v in str(text).replace(",", " ").split()]


def _common(p, nmax=64, tend=0.5, dt=1e-3):
    p.add_argument("--config", help="key = value file; command-line flags override it")
    p.add_argument("--nmax", type=int, default=nmax)
    p.add_argument("--dt", type=float, default=dt)
    p.add_argument("--tend", type=float, default=tend)
    p.add_argument("--amp", type=float, default=0.1)
    p.add_argument("--sigma", type=float, default=1.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu-mode", choices=("constant", "instant"), default="constant")
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--stride", type=int, default=10, help="record every STRIDE steps")
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--svg", default=None, help="SVG plot path")
    p.add_argument("--s", type=float, default=0.45, help="Sobolev index for H^s norms")


def build_parser():
    parser = argparse.ArgumentParser(prog="dnls-lab", description="Derivative NLS desk lab")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True

    for name in ("simulate", "conserve"):
        p = sub.add_parser(name)
        _common(p)
        p.add_argument("--s1", type=float, default=0.6)
        p.add_argument("--p", type=float, default=3.0)
        p.add_argument("--run-id", default="run")
        if name == "conserve":
            p.add_argument("--tail-ns", type=_int_list, default=[])

    p = sub.add_parser("converge")
    _common(p, nmax=1024, tend=0.1)
    p.set_defaults(sigma=1.15, s=0.6)
    p.add_argument("--sprime", type=float, default=0.45)
    p.add_argument("--s1", type=float, default=None, help="default: sigma - 1/p - 0.05")
    p.add_argument("--s1prime", type=float, default=None, help="default: s1 - (s - sprime)")
    p.add_argument("--p", type=float, default=3.0)
    p.add_argument("--levels", type=_int_list, default=[32, 64, 128, 256])
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("tail")
    _common(p, nmax=1024, tend=0.5)
    p.set_defaults(sigma=1.0)
    p.add_argument("--ns", type=_int_list, default=[64, 128, 256, 512])
    p.add_argument("--cgrid", type=_float_list, default=[1.0, 1.5, 2.0, 3.0, 4.0, 8.0])

    p = sub.add_parser("identities")
    p.add_argument("--config")
    p.add_argument("--radius", type=int, default=20)
    p.add_argument("--random", type=int, default=0, help="extra random triples")
    p.add_argument("--random-radius", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("multiplier")
    p.add_argument("--config")
    p.add_argument("--radius", type=int, default=32)
    p.add_argument("--s", type=float, default=0.45)
    p.add_argument("--factor", type=int, default=8)
    p.add_argument("--xi-max", type=int, default=0, help="also run the mean-value scan")

    p = sub.add_parser("gauge-check")
    _common(p, nmax=32, tend=0.01, dt=2.5e-4)
    p.set_defaults(sigma=2.0, stride=1)
    return parser


def _load_config(path):
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[config]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    return {k.replace("-", "_"): v for k, v in cp["config"].items()}


def _parse(parser, argv):
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        values = {}
        for key, raw in _load_config(args.config).items():
            action = known.get(key)
            if action is None or key == "config":
                raise UsageError(f"unknown config key {key!r}")
            conv = action.type or str
            try:
                values[key] = conv(raw)
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {raw!r}") from exc
            if action.choices and values[key] not in action.choices:
                raise UsageError(f"bad value for {key}: {raw!r}")
        sub.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def _mu_mode(args):
    return MuMode.instantaneous() if args.mu_mode == "instant" else MuMode.constant()


def _initial(args):
    return random_state(SpectralProfile(args.sigma, args.amp, args.seed), args.nmax)


def _sim_config(args, stride=None):
    return SimConfig(
        args.nmax, args.dt, args.tend, stride or args.stride, _mu_mode(args), args.trunc
    )


def _svg(path, x, ys, xlabel, ylabel, loglog=False):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for label, y in ys.items():
        ax.plot(x, y, marker="o", ms=3, label=label)
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _cmd_simulate(args):
    u0 = _initial(args)
    rows = conservation_experiment(
        u0, _sim_config(args), s=args.s, s1=args.s1, p=args.p,
        tail_ns=getattr(args, "tail_ns", ()), run_id=args.run_id,
    )
    header = list(SCHEMAS["simulate"])
    if args.command == "conserve":
        header += [f"tail_{n}" for n in args.tail_ns]
    if args.out:
        write_csv(args.out, header, rows)
    if args.svg:
        t = [r["t"] for r in rows]
        _svg(args.svg, t, {"hs_norm": [r["hs_norm"] for r in rows]}, "t", "norm")
    drift = {}
    for key in ("mass", "energy", "momentum"):
        vals = np.array([r[key] for r in rows])
        drift[key] = float(np.max(np.abs(vals - vals[0])) / max(abs(vals[0]), 1e-300))
    last = rows[-1]
    return (
        f"{args.command}: frames={len(rows)} t_end={last['t']:.6g} "
        f"hs_norm={last['hs_norm']:.6g} drift_mass={drift['mass']:.3e} "
        f"drift_energy={drift['energy']:.3e} drift_momentum={drift['momentum']:.3e}"
    )


def _cmd_converge(args):
    s1 = args.s1 if args.s1 is not None else args.sigma - 1.0 / args.p - 0.05
    s1p = args.s1prime if args.s1prime is not None else s1 - (args.s - args.sprime)
    profile = SpectralProfile(args.sigma, args.amp, args.seed)
    rep = convergence_experiment(
        profile, args.s, args.sprime, s1, s1p, args.p, args.levels, args.nmax,
        args.tend, args.dt, mu_mode=_mu_mode(args), record_stride=args.stride,
        workers=args.workers,
    )
    if args.out:
        write_csv(args.out, SCHEMAS["converge"], rep.levels)
    if args.svg:
        n = [r[0] for r in rep.levels]
        _svg(args.svg, n, {"err_hs": [r[1] for r in rep.levels],
                           "err_fl": [r[2] for r in rep.levels]}, "N", "error", loglog=True)
    if rep.degenerate:
        return "converge: degenerate (all errors at the integrator floor)"
    return (
        f"converge: slope={rep.fitted_slope:.4f} predicted={rep.predicted_exponent:.4f} "
        f"r2={rep.fit_r2:.4f} floor={rep.floor:.3e}"
    )


def _cmd_tail(args):
    rep = tail_experiment(
        SpectralProfile(args.sigma, args.amp, args.seed), args.s, args.ns, args.tend,
        args.dt, c_grid=args.cgrid, n_max=args.nmax, mu_mode=_mu_mode(args),
        record_stride=args.stride,
    )
    if args.out:
        write_csv(args.out, SCHEMAS["tail"], rep.rows)
    if args.svg:
        n = [r[0] for r in rep.rows]
        _svg(args.svg, n, {"sup_tail_hs": [r[1] for r in rep.rows],
                           "data_tail_hs": [r[2] for r in rep.rows]}, "N", "tail", loglog=True)
    return f"tail: C={rep.fitted_c:.4g} eps={rep.fitted_eps:.4g} rows={len(rep.rows)}"


def _cmd_identities(args):
    t = identity_scan(args.radius, args.random, args.random_radius, args.seed)
    return (
        f"identities: checked={t.checked} dispersive_pass={t.dispersive_pass} "
        f"factorization_pass={t.factorization_pass}"
    )


def _cmd_multiplier(args):
    rep = bound_ratio_scan(args.radius, args.s, args.factor)
    parts = [f"multiplier: radius={args.radius} s={args.s} factor={args.factor}"]
    for case in (BoundCase.CASE_I, BoundCase.CASE_II, BoundCase.CASE_III):
        st = rep.cases[case.value]
        parts.append(f"{case.value}={st.max_ratio:.4g}(n={st.count})")
    if args.xi_max:
        d = dmvt_ratio_scan(args.s, args.xi_max, args.factor)
        parts.append(f"dmvt={d.cases['dmvt'].max_ratio:.4g}")
    return " ".join(parts)


def _cmd_gauge(args):
    traj = evolve(_initial(args), _sim_config(args))
    res = dnls_residual(traj)
    if args.svg:
        _svg(args.svg, traj.times[1:-1], {"residual": res}, "t", "residual")
    hs = max(norm(f, NormSpec.sobolev(args.s)) for f in traj.frames)
    return f"gauge-check: max_residual={float(res.max()):.3e} frames={len(traj.frames)} hs_max={hs:.4g}"


_DISPATCH = {
    "simulate": _cmd_simulate,
    "conserve": _cmd_simulate,
    "converge": _cmd_converge,
    "tail": _cmd_tail,
    "identities": _cmd_identities,
    "multiplier": _cmd_multiplier,
    "gauge-check": _cmd_gauge,
}


def run_cli(argv=None, stdout=None, stderr=None):
    """Run one subcommand and return its exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = _parse(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"error: {exc}", file=stderr)
        return 2
    try:
        line = _DISPATCH[args.command](args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (DNLSError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    print(line, file=stdout)
    return 0


def main():
    sys.exit(run_cli())
