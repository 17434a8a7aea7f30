"""Integrating-factor RK4 time stepping and interaction-picture helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DivergenceError, DomainError, PreconditionError
from .nonlinearity import MuMode, nonlinearity_coeffs
from .spectral import SpectralState, pad

__all__ = [
    "SimConfig",
    "Trajectory",
    "default_dt",
    "step",
    "evolve",
    "to_interaction",
    "from_interaction",
    "quad_phase_check",
]


def default_dt(n_max, mu_value=0.0):
    """Desk-scale step: the derivative term limits dt roughly like a transport CFL."""
    return min(1e-3, 0.1 / (n_max * (1.0 + mu_value) + 1.0))


@dataclass(frozen=True)
class SimConfig:
    n_max: int
    dt: float
    t_end: float
    record_stride: int = 1
    mu_mode: MuMode = field(default_factory=MuMode.constant)
    truncation: int | None = None
    scheme: str = "ifrk4"

    def __post_init__(self):
        if self.dt <= 0:
            raise DomainError("dt must be positive")
        if self.t_end < 0:
            raise DomainError("t_end must be non-negative")
        if self.t_end > 0 and self.dt > self.t_end:
            raise DomainError("dt must not exceed t_end")
        if self.record_stride < 1:
            raise DomainError("record_stride must be >= 1")
        if self.truncation is not None and not 0 <= self.truncation <= self.n_max:
            raise DomainError("truncation must lie in [0, n_max]")
        if self.scheme != "ifrk4":
            raise DomainError(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True)
class Trajectory:
    """Recorded frames of one run.

    ``frames[k]`` is the state at ``k * record_stride * dt``; the final frame
    sits exactly at ``t_end`` and may follow a shorter interval.
    """

    frames: tuple
    config: SimConfig
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise DomainError("a trajectory needs at least one frame")
        times = np.array([f.time for f in frames])
        if np.any(np.diff(times) <= 0):
            raise DomainError("frame times must be strictly increasing")
        if len({f.n_max for f in frames}) != 1:
            raise DomainError("all frames must share n_max")
        object.__setattr__(self, "frames", frames)

    @property
    def times(self):
        return np.array([f.time for f in self.frames])

    def coeff_matrix(self):
        """``(n_frames, 2 n_max + 1)`` array of coefficients."""
        return np.stack([f.coeffs for f in self.frames])

    def __len__(self):
        return len(self.frames)


def _nonlinear(c, n_max, mu_mode, t):
    if not np.all(np.isfinite(c)):
        return np.full_like(c, np.nan)
    state = SpectralState(n_max, c, t)
    return -1j * nonlinearity_coeffs(state, mu_mode)


def _ifrk4(c, n_max, h, mu_mode, t):
    # blow-up is reported as DivergenceError by the callers, not as warnings
    with np.errstate(over="ignore", invalid="ignore"):
        return _ifrk4_stages(c, n_max, h, mu_mode, t)


def _ifrk4_stages(c, n_max, h, mu_mode, t):
    k = np.arange(-n_max, n_max + 1)
    e_half = np.exp(-1j * k * k * (h / 2))
    e_full = e_half * e_half
    k1 = _nonlinear(c, n_max, mu_mode, t)
    k2 = _nonlinear(e_half * (c + 0.5 * h * k1), n_max, mu_mode, t + h / 2)
    k3 = _nonlinear(e_half * c + 0.5 * h * k2, n_max, mu_mode, t + h / 2)
    k4 = _nonlinear(e_full * c + h * e_half * k3, n_max, mu_mode, t + h)
    return e_full * c + (h / 6.0) * (e_full * k1 + 2.0 * e_half * (k2 + k3) + k4)


def step(state, dt, cfg):
    """Advance one IFRK4 step: exact linear phase, RK4 on the nonlinearity."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    mu_mode = cfg.mu_mode.resolve(state)
    c = _ifrk4(state.coeffs, state.n_max, dt, mu_mode, state.time)
    t_new = state.time + dt
    if not np.all(np.isfinite(c)):
        raise DivergenceError(t_new)
    return SpectralState(state.n_max, c, t_new)


def evolve(u0, cfg, provenance=None):
    """Integrate from ``u0`` to ``cfg.t_end`` recording every ``record_stride`` steps.

    With ``cfg.truncation = N`` the Galerkin system on ``|xi| <= N`` is
    integrated; frames are reported at ``cfg.n_max``.
    """
    if u0.n_max != cfg.n_max:
        u0 = pad(u0, cfg.n_max)
    work_n = cfg.n_max
    if cfg.truncation is not None:
        work_n = cfg.truncation
        if u0.support() > work_n:
            raise PreconditionError(
                f"initial data not supported in |xi| <= {work_n}; apply project first"
            )
    mu_mode = cfg.mu_mode.resolve(u0)
    t0 = u0.time
    c = pad(u0, work_n).coeffs
    frames = [u0]

    n_full = int(math.floor(cfg.t_end / cfg.dt + 1e-9))
    remainder = cfg.t_end - n_full * cfg.dt
    steps = [cfg.dt] * n_full
    if remainder > 1e-12 * max(cfg.t_end, 1.0):
        steps.append(remainder)

    t = t0
    for i, h in enumerate(steps, start=1):
        c = _ifrk4(c, work_n, h, mu_mode, t)
        t = t0 + (i * cfg.dt if i <= n_full else cfg.t_end)
        if not np.all(np.isfinite(c)):
            raise DivergenceError(t)
        if i % cfg.record_stride == 0 or i == len(steps):
            frames.append(pad(SpectralState(work_n, c, t), cfg.n_max))

    prov = dict(provenance or {})
    prov.setdefault("mu", mu_mode.mu0 if mu_mode.mode == "constant" else None)
    return Trajectory(tuple(frames), replace(cfg, mu_mode=mu_mode), prov)


def to_interaction(state):
    """``w_hat(xi) = exp(i xi^2 t) c_xi`` so that free evolution maps to a constant."""
    k = state.modes
    return state.with_coeffs(np.exp(1j * k * k * state.time) * state.coeffs)


def from_interaction(state):
    k = state.modes
    return state.with_coeffs(np.exp(-1j * k * k * state.time) * state.coeffs)


def _quad_product(c, n, quad):
    x1, x2, x3, x4 = quad
    return (
        c[x1 + n]
        * np.conj(c[-x2 + n])
        * c[x3 + n]
        * np.conj(c[-x4 + n])
    )


def quad_phase_check(state, quad):
    """Residual of the interaction-picture phase identity on one quadruple.

    With ``c = exp(-i xi^2 t) w`` the product
    ``c_{xi1} conj(c_{-xi2}) c_{xi3} conj(c_{-xi4})`` picks up
    ``exp(-i t (xi1^2 - xi2^2 + xi3^2 - xi4^2)) = exp(2 i xi14 xi34 t)``.
    """
    from .multipliers import FrequencyQuad

    quad = FrequencyQuad.coerce(quad)
    n = state.n_max
    if max(abs(x) for x in quad.xi) > n:
        raise PreconditionError("quad modes must lie within n_max")
    w = to_interaction(state)
    x1, x2, x3, x4 = quad.xi
    lhs = _quad_product(state.coeffs, n, quad.xi)
    rhs = _quad_product(w.coeffs, n, quad.xi)
    phase = np.exp(2j * (x1 + x4) * (x3 + x4) * state.time)
    return float(abs(lhs - phase * rhs))
