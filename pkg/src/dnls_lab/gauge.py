"""Gauge transformation to the conservative form ``i v_t + v_xx = i (|v|^2 v)_x``.

For a solution ``u`` of the full equation with constant ``mu = mean |u|^2``,

    v(t, x) = exp(i [G(t, x + 2 mu t) + mu^2 t]) u(t, x + 2 mu t),

where ``G`` is the mean-zero primitive of ``|u|^2 - mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import InconsistentMuError, PreconditionError
from .nonlinearity import mu as mu_of
from .spectral import (
    GridFunction,
    SpectralState,
    coeffs_to_samples,
    samples_to_coeffs,
)

__all__ = [
    "GaugeResult",
    "gauge_grid_size",
    "gauge_primitive",
    "gauge_forward",
    "dnls_residual",
    "MU_TOLERANCE",
]

MU_TOLERANCE = 1e-8
# v is reported up to this multiple of the input cutoff
REPORT_FACTOR = 3


@dataclass(frozen=True)
class GaugeResult:
    v_state: SpectralState
    phase_grid: GridFunction = field(repr=False)
    tail: float = 0.0


def gauge_grid_size(n_max):
    # e^{iG} is not band-limited; oversample well past the reported cutoff
    return scipy.fft.next_fast_len(max(4 * (2 * REPORT_FACTOR * n_max + 1), 64))


def _check_mu(state, mu):
    actual = mu_of(state)
    if abs(mu - actual) > MU_TOLERANCE:
        raise InconsistentMuError(f"mu={mu!r} but mean |u|^2 = {actual!r}")


def _primitive_samples(c, n_max, mu, grid_size):
    u = coeffs_to_samples(c, n_max, grid_size)
    f_hat = scipy.fft.fft(np.abs(u) ** 2 - mu, norm="forward")
    k = scipy.fft.fftfreq(grid_size, 1.0 / grid_size)
    safe = np.where(k == 0, 1.0, k)
    g_hat = np.where(k == 0, 0.0, f_hat / (1j * safe))
    # mean of G is zero: the theta-average of the inner primitive cancels it
    return scipy.fft.ifft(g_hat, norm="forward").real, u


def gauge_primitive(state, mu, grid_size=None):
    """Samples of ``G(x) = (1/2pi) int_0^{2pi} int_theta^x (|u|^2 - mu) dy dtheta``."""
    _check_mu(state, mu)
    m = grid_size or gauge_grid_size(state.n_max)
    g, _ = _primitive_samples(state.coeffs, state.n_max, mu, m)
    return GridFunction(g.astype(complex))


def gauge_forward(state, mu, grid_size=None):
    """Transform ``u`` at time ``state.time`` to ``v``.

    ``v`` is analysed at cutoff ``3 * n_max``; the l^2 mass of the discarded
    modes present on the oversampled grid is returned as ``tail``.
    """
    _check_mu(state, mu)
    n = state.n_max
    m = grid_size or gauge_grid_size(n)
    t = state.time
    shifted = state.coeffs * np.exp(1j * state.modes * (2.0 * mu * t))
    g, u = _primitive_samples(shifted, n, mu, m)
    phase = g + mu * mu * t
    v = np.exp(1j * phase) * u
    k_out = min(REPORT_FACTOR * n, (m - 1) // 2)
    full = scipy.fft.fft(v, norm="forward")
    kept = samples_to_coeffs(v, k_out)
    tail = float(np.sqrt(max(np.sum(np.abs(full) ** 2) - np.sum(np.abs(kept) ** 2), 0.0)))
    return GaugeResult(
        SpectralState(k_out, kept, t), GridFunction(phase.astype(complex)), tail
    )


def _cubic_coeffs(c, n):
    m = scipy.fft.next_fast_len(4 * n + 1)
    v = coeffs_to_samples(c, n, m)
    return samples_to_coeffs(np.abs(v) ** 2 * v, n)


def dnls_residual(traj, mu_mode=None):
    """``||i v_t + v_xx - i (|v|^2 v)_x||`` at each interior frame of ``traj``.

    ``v_t`` uses centred differences between neighbouring frames, so the
    frame spacing must be uniform.
    """
    frames = traj.frames
    if len(frames) < 3:
        raise PreconditionError("need at least 3 frames")
    times = traj.times
    gaps = np.diff(times)
    if not np.allclose(gaps, gaps[0], rtol=1e-9, atol=1e-14):
        raise PreconditionError("frames must be uniformly spaced")
    h = gaps[0]
    mode = mu_mode if mu_mode is not None else traj.config.mu_mode
    mu = mode.resolve(frames[0]).value(frames[0])
    vs = [gauge_forward(f, mu).v_state for f in frames]
    k = vs[0].modes
    out = []
    for j in range(1, len(vs) - 1):
        v = vs[j].coeffs
        v_t = (vs[j + 1].coeffs - vs[j - 1].coeffs) / (2.0 * h)
        flux = 1j * k * _cubic_coeffs(v, vs[j].n_max)
        r = 1j * v_t - k * k * v - 1j * flux
        out.append(np.sqrt(np.sum(np.abs(r) ** 2)))
    return np.array(out)
