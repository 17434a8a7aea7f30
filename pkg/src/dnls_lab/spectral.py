"""Fourier-coefficient states on the torus R/2piZ.

A state stores the coefficients ``c_xi`` of

    u(x) = sum_{|xi| <= n_max} c_xi exp(i xi x),

with no ``1/sqrt(2 pi)`` normalisation. ``coeffs[xi + n_max]`` holds
``c_xi``. All functions here are pure; states are never mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.fft

from .errors import CutoffError, DomainError

__all__ = [
    "SpectralState",
    "GridFunction",
    "NormSpec",
    "SpectralProfile",
    "japanese",
    "wavenumbers",
    "zero_state",
    "single_mode",
    "synthesize",
    "analyze",
    "norm",
    "project",
    "derivative",
    "mass",
    "random_state",
    "pad",
    "grid_size_for",
    "phase_order",
]


def japanese(xi):
    """Return ``<xi> = (1 + xi^2)^(1/2)``."""
    xi = np.asarray(xi, dtype=float)
    return np.sqrt(1.0 + xi * xi)


@lru_cache(maxsize=64)
def _wavenumbers(n_max):
    k = np.arange(-n_max, n_max + 1, dtype=np.int64)
    k.setflags(write=False)
    return k


def wavenumbers(n_max):
    """Integer modes ``-n_max..n_max`` in storage order (read-only)."""
    return _wavenumbers(int(n_max))


def grid_size_for(n_max, degree):
    """Alias-free transform size for a product of ``degree`` band-``n_max`` factors.

    A product of ``degree`` factors has band ``degree * n_max``; its modes with
    ``|xi| <= n_max`` are exact on any grid with ``M >= (degree + 1) * n_max + 1``.
    """
    return scipy.fft.next_fast_len((degree + 1) * int(n_max) + 1)


def _freeze(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpectralState:
    """Fourier coefficients of a complex field at one time instant."""

    n_max: int
    coeffs: np.ndarray = field(repr=False)
    time: float = 0.0

    def __post_init__(self):
        n_max = int(self.n_max)
        if n_max < 0:
            raise DomainError("n_max must be non-negative")
        coeffs = _freeze(self.coeffs)
        if coeffs.ndim != 1 or coeffs.shape[0] != 2 * n_max + 1:
            raise DomainError(
                f"coeffs must have length 2*n_max+1={2 * n_max + 1}, got {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "n_max", n_max)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "time", float(self.time))

    @property
    def modes(self):
        return wavenumbers(self.n_max)

    def coefficient(self, xi):
        """``c_xi``, zero outside the stored band."""
        if abs(xi) > self.n_max:
            return 0j
        return complex(self.coeffs[xi + self.n_max])

    def with_coeffs(self, coeffs, time=None):
        return SpectralState(self.n_max, coeffs, self.time if time is None else time)

    def at_time(self, time):
        return SpectralState(self.n_max, self.coeffs, time)

    def support(self):
        """Largest ``|xi|`` carrying a non-zero coefficient (``-1`` for zero)."""
        nz = np.nonzero(self.coeffs)[0]
        if nz.size == 0:
            return -1
        return int(np.max(np.abs(self.modes[nz])))

    def __add__(self, other):
        _check_compatible(self, other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_compatible(self, other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_coeffs(-self.coeffs)


def _check_compatible(a, b):
    if a.n_max != b.n_max:
        raise DomainError(f"n_max mismatch: {a.n_max} vs {b.n_max}")


@dataclass(frozen=True)
class GridFunction:
    """Samples of a field at ``x_j = 2 pi j / grid_size``."""

    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        samples = _freeze(self.samples)
        if samples.ndim != 1:
            raise DomainError("samples must be one-dimensional")
        if not np.all(np.isfinite(samples)):
            raise DomainError("samples must be finite")
        object.__setattr__(self, "samples", samples)

    @property
    def grid_size(self):
        return self.samples.shape[0]

    @property
    def points(self):
        return 2.0 * np.pi * np.arange(self.grid_size) / self.grid_size


@dataclass(frozen=True)
class NormSpec:
    """Which norm to evaluate.

    ``kind`` is ``"sobolev"`` (weighted l^2 with weight <xi>^s) or
    ``"fourier_lebesgue"`` (weighted l^p). ``p`` may be ``np.inf``.
    """

    kind: str
    s: float
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in ("sobolev", "fourier_lebesgue"):
            raise DomainError(f"unknown norm kind {self.kind!r}")
        if not self.p >= 1:
            raise DomainError(f"p must be >= 1, got {self.p}")

    @classmethod
    def sobolev(cls, s):
        return cls("sobolev", s, 2.0)

    @classmethod
    def fourier_lebesgue(cls, s, p):
        return cls("fourier_lebesgue", s, p)


@dataclass(frozen=True)
class SpectralProfile:
    """Random data with ``|c_xi| = amplitude * <xi>^(-sigma)`` and seeded phases."""

    sigma: float
    amplitude: float
    seed: int = 0

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("amplitude must be non-negative")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must fit in an unsigned 64-bit integer")


def zero_state(n_max, time=0.0):
    return SpectralState(n_max, np.zeros(2 * n_max + 1, dtype=complex), time)


def single_mode(n_max, xi, amplitude=1.0, time=0.0):
    """State with one non-zero coefficient ``c_xi = amplitude``."""
    if abs(xi) > n_max:
        raise CutoffError(f"mode {xi} outside |xi| <= {n_max}")
    c = np.zeros(2 * n_max + 1, dtype=complex)
    c[xi + n_max] = amplitude
    return SpectralState(n_max, c, time)


def _to_fft_layout(coeffs, n_max, grid_size):
    full = np.zeros(grid_size, dtype=complex)
    full[: n_max + 1] = coeffs[n_max:]
    if n_max:
        full[-n_max:] = coeffs[:n_max]
    return full


def _from_fft_layout(full, n_max):
    return np.concatenate((full[-n_max:] if n_max else full[:0], full[: n_max + 1]))


def coeffs_to_samples(coeffs, n_max, grid_size):
    """Array-level ``synthesize``; no validation."""
    return scipy.fft.ifft(_to_fft_layout(coeffs, n_max, grid_size), norm="forward")


def samples_to_coeffs(samples, n_max):
    """Array-level ``analyze``; no validation."""
    return _from_fft_layout(scipy.fft.fft(samples, norm="forward"), n_max)


def synthesize(state, grid_size):
    """Evaluate ``u`` on the uniform grid of ``grid_size`` points."""
    grid_size = int(grid_size)
    if grid_size < 2 * state.n_max + 1:
        raise CutoffError(
            f"grid_size={grid_size} cannot represent n_max={state.n_max} "
            f"(need >= {2 * state.n_max + 1})"
        )
    return GridFunction(coeffs_to_samples(state.coeffs, state.n_max, grid_size))


def analyze(grid, n_max, time=0.0):
    """Discrete Fourier coefficients ``(1/M) sum_j u_j exp(-i xi x_j)``, ``|xi| <= n_max``."""
    n_max = int(n_max)
    if grid.grid_size < 2 * n_max + 1:
        raise CutoffError(
            f"grid of size {grid.grid_size} cannot resolve n_max={n_max}"
        )
    return SpectralState(n_max, samples_to_coeffs(grid.samples, n_max), time)


def pad(state, n_max):
    """Embed ``state`` into a larger (or equal) band, or truncate to a smaller one."""
    n_max = int(n_max)
    if n_max >= state.n_max:
        c = np.zeros(2 * n_max + 1, dtype=complex)
        c[n_max - state.n_max : n_max + state.n_max + 1] = state.coeffs
    else:
        c = state.coeffs[state.n_max - n_max : state.n_max + n_max + 1]
    return SpectralState(n_max, c, state.time)


def norm(state, spec):
    """Sobolev or Fourier-Lebesgue norm of the coefficient sequence."""
    weight = japanese(state.modes) ** spec.s
    a = np.abs(state.coeffs)
    if spec.kind == "sobolev" or spec.p == 2:
        return float(np.sqrt(np.sum((weight * a) ** 2)))
    if np.isinf(spec.p):
        return float(np.max(weight * a)) if a.size else 0.0
    wa = weight * a
    scale = np.max(wa)
    if scale == 0:
        return 0.0
    return float(scale * np.sum((wa / scale) ** spec.p) ** (1.0 / spec.p))


def project(state, band, N):
    """Zero every coefficient outside the band.

    ``band`` is one of ``"le"`` (keep ``|xi| <= N``), ``"ge"`` (``|xi| >= N``)
    or ``"gt"`` (``|xi| > N``).
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    k = np.abs(state.modes)
    if band == "le":
        keep = k <= N
    elif band == "ge":
        keep = k >= N
    elif band == "gt":
        keep = k > N
    else:
        raise DomainError(f"unknown band {band!r}")
    return state.with_coeffs(np.where(keep, state.coeffs, 0))


def derivative(state):
    return state.with_coeffs(1j * state.modes * state.coeffs)


def mass(state):
    """``M = int_0^{2pi} |u|^2 dx = 2 pi sum |c_xi|^2``."""
    return float(2.0 * np.pi * np.sum(np.abs(state.coeffs) ** 2))


def phase_order(n_max):
    """Modes in the order phases are drawn: 0, 1, -1, 2, -2, ...

    Drawing in this order makes ``c_xi`` independent of ``n_max``, so a state at
    a small cutoff is exactly the projection of the same profile at a larger one.
    """
    order = [0]
    for k in range(1, n_max + 1):
        order.extend((k, -k))
    return np.array(order, dtype=np.int64)


def _uniform_doubles(seed, count):
    # PCG64 (numpy's SeedSequence seeding), top 53 bits of each raw 64-bit word.
    raw = np.random.PCG64(int(seed)).random_raw(count)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def random_state(profile, n_max, time=0.0):
    """Deterministic state with prescribed modulus decay and pseudo-random phases.

    Phases are ``2 pi U`` with ``U`` the top 53 bits of successive PCG64 outputs
    seeded by ``profile.seed``, assigned to modes in :func:`phase_order`.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    order = phase_order(n_max)
    phases = 2.0 * np.pi * _uniform_doubles(profile.seed, order.size)
    c = np.zeros(2 * n_max + 1, dtype=complex)
    moduli = profile.amplitude * japanese(order) ** (-profile.sigma)
    c[order + n_max] = moduli * np.exp(1j * phases)
    return SpectralState(n_max, c, time)
