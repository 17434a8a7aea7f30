"""Experiment drivers: Galerkin convergence, high-frequency tails, conservation."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, PreconditionError
from ..evolution import SimConfig, default_dt, evolve
from ..invariants import conserved
from ..nonlinearity import MuMode, mu
from ..spectral import NormSpec, SpectralState, norm, project, random_state
from .fitting import fit_loglog_slope

__all__ = [
    "ConvergenceReport",
    "TailReport",
    "convergence_experiment",
    "tail_experiment",
    "conservation_experiment",
    "DEGENERATE_FLOOR",
]

DEGENERATE_FLOOR = 1e-9


@dataclass(frozen=True)
class ConvergenceReport:
    levels: list
    fitted_slope: float
    predicted_exponent: float
    fit_r2: float
    fl_slope: float = float("nan")
    degenerate: bool = False
    floor: float = float("nan")
    config: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TailReport:
    """``rows`` are ``(N, sup_t ||P_{>=N} u||_{H^s}, ||P_{>=N} u0||_{H^s})``.

    ``envelope`` holds the fitted ``(C, eps)``: the smallest ``C`` in the grid
    for which ``sup_tail(N) <= C ||P_{>=CN} u0|| + C N^-eps`` holds for every
    row with some ``eps > 0``, and the largest such ``eps`` (capped).
    """

    rows: list
    fitted_c: float
    fitted_eps: float
    data_tails: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def sup_tails(self):
        return [r[1] for r in self.rows]


def _run(args):
    u0, cfg = args
    return evolve(u0, cfg)


def _map(jobs, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run, jobs))
    return [_run(j) for j in jobs]


def _max_frame_error(ref, approx, spec):
    return max(norm(a - b, spec) for a, b in zip(ref.frames, approx.frames))


def convergence_experiment(
    profile,
    s,
    s_prime,
    s1,
    s1_prime,
    p,
    levels,
    n_ref,
    t_end,
    dt,
    mu_mode=None,
    record_stride=10,
    workers=1,
    u0=None,
):
    """Compare Galerkin truncations ``u^N`` against a high-resolution reference.

    Each ``u^N`` starts from ``P_{<=N} u0`` and uses its own constant
    ``mu_N = mass(P_{<=N} u0) / 2pi`` unless ``mu_mode`` says otherwise. Errors
    are maxima over recorded frames (``t = 0`` included) in ``H^{s'}`` and
    ``FL^{s1', p}``.
    """
    levels = [int(n) for n in levels]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise PreconditionError("levels must be strictly increasing")
    if not (s_prime < s and s1_prime < s1):
        raise PreconditionError("need s' < s and s1' < s1")
    if not 2 < p < 4:
        raise PreconditionError("need 2 < p < 4")
    if max(levels) > n_ref // 4:
        raise PreconditionError("max(levels) must be <= n_ref / 4")
    mu_mode = mu_mode or MuMode.constant()
    if u0 is None:
        u0 = random_state(profile, n_ref)
    stride = max(1, min(record_stride, int(round(t_end / dt))))
    base = dict(n_max=n_ref, dt=dt, t_end=t_end, record_stride=stride, mu_mode=mu_mode)
    floor_level = n_ref // 2
    jobs = [(u0, SimConfig(**base))]
    for n in levels + [floor_level]:
        jobs.append((project(u0, "le", n), SimConfig(truncation=n, **base)))
    runs = _map(jobs, workers)
    ref, trunc, floor_run = runs[0], runs[1:-1], runs[-1]

    hs = NormSpec.sobolev(s_prime)
    fl = NormSpec.fourier_lebesgue(s1_prime, p)
    rows = []
    for n, run in zip(levels, trunc):
        rows.append((n, _max_frame_error(ref, run, hs), _max_frame_error(ref, run, fl)))
    floor = _max_frame_error(ref, floor_run, hs)

    delta = profile.sigma - s - 0.5 if profile is not None else 0.0
    predicted = max(s_prime - s - delta, s1_prime - s1 - delta)
    degenerate = all(r[1] <= DEGENERATE_FLOOR for r in rows)
    if degenerate:
        slope = r2 = fl_slope = float("nan")
    else:
        slope, r2 = fit_loglog_slope([(n, e) for n, e, _ in rows])
        fl_slope, _ = fit_loglog_slope([(n, e) for n, _, e in rows])
    config = dict(
        s=s, s_prime=s_prime, s1=s1, s1_prime=s1_prime, p=p, levels=levels,
        n_ref=n_ref, t_end=t_end, dt=dt, record_stride=stride,
        profile=None if profile is None else vars(profile).copy(),
        mu_mode=mu_mode.mode,
    )
    return ConvergenceReport(rows, slope, predicted, r2, fl_slope, degenerate, floor, config)


def _envelope(rows, data_tail_at, c_grid, eps_cap):
    for c in sorted(c_grid):
        eps = eps_cap
        ok = True
        for n, sup, _ in rows:
            excess = sup - c * data_tail_at(c * n)
            if excess <= 0:
                continue
            if c <= excess:
                ok = False
                break
            eps = min(eps, np.log(c / excess) / np.log(n))
        if ok and eps > 0:
            return float(c), float(eps)
    return float("nan"), float("nan")


def tail_experiment(
    profile,
    s,
    ns,
    t_end,
    dt,
    c_grid=(1.0, 1.5, 2.0, 3.0, 4.0, 8.0),
    n_max=None,
    mu_mode=None,
    record_stride=10,
    eps_cap=1.0,
    u0=None,
    max_l2=0.5,
):
    """Track ``sup_t ||P_{>=N} u(t)||_{H^s}`` and fit the tail envelope."""
    ns = sorted(int(n) for n in ns)
    n_max = int(n_max or 2 * max(ns))
    if u0 is None:
        u0 = random_state(profile, n_max)
    elif u0.n_max != n_max:
        from ..spectral import pad

        u0 = pad(u0, n_max)
    l2 = float(np.sqrt(2 * np.pi * mu(u0)))
    if l2 > max_l2:
        raise PreconditionError(f"||u0||_L2 = {l2:.4g} exceeds the small-data bound {max_l2}")
    stride = max(1, min(record_stride, int(round(t_end / dt))))
    traj = evolve(u0, SimConfig(n_max, dt, t_end, stride, mu_mode or MuMode.constant()))
    spec = NormSpec.sobolev(s)

    def data_tail_at(cut):
        return norm(project(u0, "ge", int(np.ceil(cut - 1e-9))), spec)

    rows = []
    for n in ns:
        sup = max(norm(project(f, "ge", n), spec) for f in traj.frames)
        rows.append((n, sup, data_tail_at(n)))
    c, eps = _envelope(rows, data_tail_at, c_grid, eps_cap)
    data_tails = {float(cc): [data_tail_at(cc * n) for n in ns] for cc in c_grid}
    config = dict(s=s, ns=ns, t_end=t_end, dt=dt, n_max=n_max, c_grid=list(c_grid),
                  record_stride=stride,
                  profile=None if profile is None else vars(profile).copy())
    return TailReport(rows, c, eps, data_tails, config)


def conservation_experiment(u0, cfg, s=0.45, s1=0.6, p=3.0, tail_ns=(), run_id="run"):
    """One row per recorded frame: time, conserved quantities, norms and tails."""
    if not isinstance(u0, SpectralState):
        u0 = random_state(u0, cfg.n_max)
    traj = evolve(u0, cfg)
    muv = traj.config.mu_mode.value(u0)
    hs = NormSpec.sobolev(s)
    fl = NormSpec.fourier_lebesgue(s1, p)
    rows = []
    for f in traj.frames:
        q = conserved(f, muv)
        row = dict(
            run_id=run_id, t=f.time, mass=q.mass, energy=q.energy, momentum=q.momentum,
            hs_norm=norm(f, hs), fl_norm=norm(f, fl),
        )
        for n in tail_ns:
            row[f"tail_{n}"] = norm(project(f, "ge", n), hs)
        rows.append(row)
    return rows


def default_config(n_max, t_end, u0, dt=None, **kw):
    """SimConfig with the package's default step for this state."""
    if dt is None:
        dt = default_dt(n_max, mu(u0))
    if t_end > 0:
        dt = min(dt, t_end)
    if dt <= 0:
        raise DomainError("dt must be positive")
    return SimConfig(n_max, dt, t_end, **kw)
