"""The DNLS nonlinearity and its resonant decomposition.

With ``i u_t + u_xx = N[u]`` and the coefficient convention of
:mod:`dnls_lab.spectral`, the pieces are

    N1  = -i u^2 conj(u_x) + 2 (sum_xi xi |c_xi|^2) u
    N12 = xi |c_xi|^2 c_xi                        (resonant)
    N11 = N1 - N12                                (non-resonant)
    N21 = mu |u|^2 u
    N22 = -1/2 |u|^4 u + 1/2 mean(|u|^4) u

so ``N = N11 + N12 + N21 + N22`` and ``du/dt = i u_xx - i N[u]``.
Products are evaluated on alias-free grids and truncated back to ``n_max``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, PreconditionError, ResourceGuardError
from .spectral import (
    SpectralState,
    coeffs_to_samples,
    grid_size_for,
    samples_to_coeffs,
)

__all__ = [
    "TermSelector",
    "MuMode",
    "ResonanceClass",
    "mu",
    "psi",
    "term",
    "terms",
    "nonlinearity_coeffs",
    "rhs_full",
    "rhs_truncated",
    "n11_direct_oracle",
    "resonance_classify",
    "N11_ORACLE_MAX",
]

N11_ORACLE_MAX = 64


class TermSelector(str, Enum):
    N1 = "n1"
    N11 = "n11"
    N12 = "n12"
    N21 = "n21"
    N22 = "n22"
    N2 = "n2"
    FULL = "full"


class ResonanceClass(str, Enum):
    NONRESONANT = "nonresonant"
    RES_PAIR_13 = "res_pair_13"
    RES_PAIR_11 = "res_pair_11"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class MuMode:
    """How the coefficient ``mu`` of ``|u|^2 u`` is chosen.

    ``constant`` uses ``mu0``; if ``mu0`` is None the caller resolves it from
    the initial data (``mass(u0) / 2 pi``) via :meth:`resolve`.
    ``instantaneous`` recomputes ``mu[u]`` from the current state.
    """

    mode: str = "constant"
    mu0: float | None = None

    def __post_init__(self):
        if self.mode not in ("constant", "instantaneous"):
            raise DomainError(f"unknown mu mode {self.mode!r}")

    @classmethod
    def constant(cls, mu0=None):
        return cls("constant", None if mu0 is None else float(mu0))

    @classmethod
    def instantaneous(cls):
        return cls("instantaneous")

    def resolve(self, u0):
        """Pin an unset constant ``mu`` to ``mu(u0)``."""
        if self.mode == "constant" and self.mu0 is None:
            return MuMode.constant(mu(u0))
        return self

    def value(self, state):
        if self.mode == "instantaneous" or self.mu0 is None:
            return mu(state)
        return self.mu0


def mu(state):
    """``(1/2pi) int |u|^2 = sum |c_xi|^2``."""
    return float(np.sum(np.abs(state.coeffs) ** 2))


def _quartic_mean(c, n_max):
    m = grid_size_for(n_max, 3)
    u = coeffs_to_samples(c, n_max, m)
    return float(np.mean(np.abs(u) ** 4))


def psi(state):
    """``(1/2pi) int (2 Im(u conj(u_x)) - |u|^4 / 2)``."""
    c = state.coeffs
    first = -2.0 * float(np.sum(state.modes * np.abs(c) ** 2))
    return first - 0.5 * _quartic_mean(c, state.n_max)


def terms(state, mu_mode=None):
    """All six pieces ``{n11, n12, n1, n21, n22, n2}`` as coefficient arrays.

    One quintic-grid pass serves every term.
    """
    n = state.n_max
    c = state.coeffs
    k = state.modes
    mu_val = (mu_mode or MuMode.constant()).value(state)

    m = grid_size_for(n, 5)
    u = coeffs_to_samples(c, n, m)
    ux = coeffs_to_samples(1j * k * c, n, m)
    abs2 = (u * u.conj()).real

    cubic_deriv = samples_to_coeffs(-1j * u * u * ux.conj(), n)
    cubic = samples_to_coeffs(abs2 * u, n)
    quintic = samples_to_coeffs(abs2 * abs2 * u, n)
    # exact on the quintic grid: |u|^4 has band 4n < m
    quartic_mean = float(np.mean(abs2 * abs2))

    mom = float(np.sum(k * np.abs(c) ** 2))
    n1 = cubic_deriv + 2.0 * mom * c
    n12 = k * np.abs(c) ** 2 * c
    n11 = n1 - n12
    n21 = mu_val * cubic
    n22 = -0.5 * quintic + 0.5 * quartic_mean * c
    return {
        "n1": n1,
        "n11": n11,
        "n12": n12,
        "n21": n21,
        "n22": n22,
        "n2": n21 + n22,
    }


def nonlinearity_coeffs(state, mu_mode=None):
    """Coefficients of the full ``N[u]``."""
    t = terms(state, mu_mode)
    return t["n1"] + t["n2"]


def term(state, sel, mu_mode=None):
    """One named piece of the nonlinearity as a state at the same time."""
    sel = TermSelector(sel)
    if sel is TermSelector.FULL:
        return state.with_coeffs(nonlinearity_coeffs(state, mu_mode))
    return state.with_coeffs(terms(state, mu_mode)[sel.value])


def rhs_full(state, mu_mode=None):
    """``du/dt = -i xi^2 c - i N[u]`` at cutoff ``n_max``."""
    k = state.modes
    c = state.coeffs
    return state.with_coeffs(-1j * k * k * c - 1j * nonlinearity_coeffs(state, mu_mode))


def rhs_truncated(state, N, mu_mode=None):
    """Galerkin right-hand side: the nonlinearity projected onto ``|xi| <= N``."""
    N = int(N)
    if N < 0:
        raise DomainError("N must be non-negative")
    outside = np.abs(state.modes) > N
    if np.any(state.coeffs[outside] != 0):
        raise PreconditionError(f"state has support outside |xi| <= {N}")
    out = rhs_full(state, mu_mode).coeffs
    return state.with_coeffs(np.where(outside, 0, out))


def n11_direct_oracle(state):
    """Brute-force triple sum for the non-resonant term.

    ``(N11)_xi = sum xi2 c_{xi1} conj(c_{-xi2}) c_{xi3}`` over
    ``xi1 + xi2 + xi3 = xi`` with ``(xi1 - xi)(xi3 - xi) != 0``.
    """
    n = state.n_max
    if n > N11_ORACLE_MAX:
        raise ResourceGuardError(f"n_max={n} exceeds oracle cap {N11_ORACLE_MAX}")
    c = state.coeffs
    k = state.modes
    cbar_neg = np.conj(c[::-1])  # entry at xi2 is conj(c_{-xi2})
    x1, x2, x3 = np.meshgrid(k, k, k, indexing="ij")
    xi = x1 + x2 + x3
    keep = (np.abs(xi) <= n) & ((x1 - xi) * (x3 - xi) != 0)
    vals = (
        x2 * c[x1 + n] * cbar_neg[x2 + n] * c[x3 + n]
    )[keep]
    idx = xi[keep] + n
    size = 2 * n + 1
    out = np.bincount(idx, weights=vals.real, minlength=size) + 1j * np.bincount(
        idx, weights=vals.imag, minlength=size
    )
    return state.with_coeffs(out)


def resonance_classify(xi1, xi2, xi3, xi):
    """Which of the resonance cases the index tuple belongs to."""
    if xi1 + xi2 + xi3 != xi:
        raise PreconditionError(f"{xi1}+{xi2}+{xi3} != {xi}")
    if xi1 == xi3 == xi and xi2 == -xi:
        return ResonanceClass.OVERLAP
    if xi3 == xi and xi1 + xi2 == 0:
        return ResonanceClass.RES_PAIR_13
    if xi1 == xi and xi2 + xi3 == 0:
        return ResonanceClass.RES_PAIR_11
    return ResonanceClass.NONRESONANT
