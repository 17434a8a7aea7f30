"""Spectral desk lab for the periodic derivative nonlinear Schrodinger equation

    i u_t + u_xx = N[u]  on the circle,

with Galerkin truncations, a gauge transform, conserved quantities and
four-frequency multiplier scans.
"""

from . import errors, evolution, gauge, invariants, multipliers, nonlinearity, spectral
from .errors import (
    CutoffError,
    DivergenceError,
    DNLSError,
    DomainError,
    InconsistentMuError,
    PreconditionError,
    ResourceGuardError,
)
from .evolution import SimConfig, Trajectory, evolve, step
from .nonlinearity import MuMode, TermSelector
from .spectral import (
    GridFunction,
    NormSpec,
    SpectralProfile,
    SpectralState,
    norm,
    random_state,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "evolution",
    "gauge",
    "invariants",
    "multipliers",
    "nonlinearity",
    "spectral",
    "CutoffError",
    "DivergenceError",
    "DNLSError",
    "DomainError",
    "InconsistentMuError",
    "PreconditionError",
    "ResourceGuardError",
    "SimConfig",
    "Trajectory",
    "evolve",
    "step",
    "MuMode",
    "TermSelector",
    "GridFunction",
    "NormSpec",
    "SpectralProfile",
    "SpectralState",
    "norm",
    "random_state",
]
