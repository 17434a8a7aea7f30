"""Conserved functionals and the H^s growth identity.

The energy that the flow actually conserves carries ``+ (mu/2) |u|^4``; see
:func:`conserved`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceGuardError
from .multipliers import FrequencyQuad, m4_kernel
from .nonlinearity import MuMode, terms
from .spectral import coeffs_to_samples, grid_size_for, japanese

__all__ = [
    "ConservedTriple",
    "GrowthReport",
    "conserved",
    "hs_growth_rate",
    "hs_functional",
    "symmetrized_sum",
    "symmetrized_growth",
    "fit_symmetrization_constant",
    "SYMMETRIZATION_CONSTANT",
    "m4_kernel",
    "FrequencyQuad",
]

# Frozen after calibration: n11 contribution to d/dt ||u||_{H^s}^2 equals
# Re(SYMMETRIZATION_CONSTANT * sum m4 c c* c c*). Derivable by hand as -i/2.
SYMMETRIZATION_CONSTANT = -0.5j
SYMMETRIZED_MAX = 64


@dataclass(frozen=True)
class ConservedTriple:
    mass: float
    energy: float
    momentum: float

    def as_array(self):
        return np.array([self.mass, self.energy, self.momentum])


@dataclass(frozen=True)
class GrowthReport:
    """Contributions to ``d/dt ||u||_{H^s}^2`` under ``u_t = i u_xx - i N[u]``.

    ``linear_part``, ``n12_part`` and ``n22_internal_part`` vanish
    identically; ``total`` comes from the full right-hand side, so
    ``total - (n11_part + n2_part)`` measures roundoff. ``scale`` is a
    magnitude against which the vanishing parts are judged.
    """

    linear_part: float
    n12_part: float
    n22_internal_part: float
    n11_part: float
    n2_part: float
    total: float
    scale: float


def conserved(state, mu):
    """Mass, energy and momentum by alias-free quadrature on ``[0, 2pi]``.

    ``E = int |u_x|^2 - 1/2 Im(|u|^2 u conj(u_x)) + (mu/2) |u|^4``,
    ``P = int Im(conj(u) u_x) + 1/2 |u|^4``.
    """
    n = state.n_max
    c = state.coeffs
    m = grid_size_for(n, 3)
    u = coeffs_to_samples(c, n, m)
    ux = coeffs_to_samples(1j * state.modes * c, n, m)
    abs2 = (u * u.conj()).real
    two_pi = 2.0 * np.pi
    mass = two_pi * float(np.sum(np.abs(c) ** 2))
    energy = two_pi * float(
        np.mean(np.abs(ux) ** 2 - 0.5 * np.imag(abs2 * u * ux.conj()) + 0.5 * mu * abs2 * abs2)
    )
    momentum = two_pi * float(np.mean(np.imag(u.conj() * ux) + 0.5 * abs2 * abs2))
    return ConservedTriple(mass, energy, momentum)


def hs_functional(state, s):
    """``L = ||u||_{H^s}^2``."""
    return float(np.sum(japanese(state.modes) ** (2 * s) * np.abs(state.coeffs) ** 2))


def _contribution(weight, c, t_coeffs):
    # 2 Re sum w conj(c) (-i T) = 2 Im sum w conj(c) T
    return float(2.0 * np.sum(weight * np.imag(np.conj(c) * t_coeffs)))


def hs_growth_rate(state, s, mu_mode=None):
    """Split ``d/dt ||u||_{H^s}^2`` into the terms of the nonlinearity."""
    c = state.coeffs
    k = state.modes
    w = japanese(k) ** (2 * s)
    parts = terms(state, mu_mode)
    abs2 = np.abs(c) ** 2
    n = state.n_max
    quartic_mean = float(np.mean(np.abs(coeffs_to_samples(c, n, grid_size_for(n, 3))) ** 4))
    rhs = k * k * c + parts["n1"] + parts["n2"]
    l2 = float(np.sum(abs2))
    scale = float(np.sum(w * (1.0 + k * k) * abs2)) * (1.0 + l2 + l2 * l2)
    return GrowthReport(
        linear_part=_contribution(w, c, k * k * c),
        n12_part=_contribution(w, c, parts["n12"]),
        n22_internal_part=_contribution(w, c, 0.5 * quartic_mean * c),
        n11_part=_contribution(w, c, parts["n11"]),
        n2_part=_contribution(w, c, parts["n2"]),
        total=_contribution(w, c, rhs),
        scale=scale,
    )


def symmetrized_sum(state, s):
    """``sum m4(xi) c_{xi1} conj(c_{-xi2}) c_{xi3} conj(c_{-xi4})`` over quads with ``xi12 xi14 != 0``.

    Brute force over the cube ``|xi_j| <= n_max``; returns a complex number
    (purely imaginary in exact arithmetic).
    """
    n = state.n_max
    if n > SYMMETRIZED_MAX:
        raise ResourceGuardError(f"n_max={n} exceeds cap {SYMMETRIZED_MAX}")
    c = state.coeffs
    cbar_neg = np.conj(c[::-1])
    k = state.modes
    wt = japanese(np.arange(0, n + 1)) ** (2 * s)
    x1, x2, x3 = np.meshgrid(k, k, k, indexing="ij")
    x4 = -(x1 + x2 + x3)
    keep = (np.abs(x4) <= n) & ((x1 + x2) * (x1 + x4) != 0)
    x1, x2, x3, x4 = x1[keep], x2[keep], x3[keep], x4[keep]
    m4 = (
        x1 * wt[np.abs(x3)] + x2 * wt[np.abs(x4)] + x3 * wt[np.abs(x1)] + x4 * wt[np.abs(x2)]
    )
    prod = c[x1 + n] * cbar_neg[x2 + n] * c[x3 + n] * cbar_neg[x4 + n]
    return complex(np.sum(m4 * prod))


def symmetrized_growth(state, s, constant=SYMMETRIZATION_CONSTANT):
    """The symmetrised four-linear form; equals ``hs_growth_rate(...).n11_part``."""
    return float((constant * symmetrized_sum(state, s)).real)


def fit_symmetrization_constant(states, s, mu_mode=None):
    """Least-squares complex ``c`` with ``n11_part ~ Re(c * S)`` over ``states``.

    Since ``S`` is purely imaginary only ``Im(c)`` is identifiable; the real
    part is returned as 0.
    """
    mu_mode = mu_mode or MuMode.constant(0.0)
    target = np.array([hs_growth_rate(st, s, mu_mode).n11_part for st in states])
    sums = np.array([symmetrized_sum(st, s) for st in states])
    # Re(c S) = -Im(c) Im(S) when Re(S) = 0
    x = -sums.imag
    coef = float(np.dot(x, target) / np.dot(x, x))
    return complex(0.0, coef)
