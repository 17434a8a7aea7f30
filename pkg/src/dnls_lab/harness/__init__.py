"""Experiment drivers, diagnostics, fitting and CSV/CLI plumbing."""

from .cli import run_cli
from .diagnostics import time_window, windowed_l2_hs, xsb_norm_estimate
from .experiments import (
    ConvergenceReport,
    TailReport,
    conservation_experiment,
    convergence_experiment,
    tail_experiment,
)
from .fitting import fit_loglog_slope
from .io import SCHEMAS, read_csv, write_csv

__all__ = [
    "run_cli",
    "time_window",
    "windowed_l2_hs",
    "xsb_norm_estimate",
    "ConvergenceReport",
    "TailReport",
    "conservation_experiment",
    "convergence_experiment",
    "tail_experiment",
    "fit_loglog_slope",
    "SCHEMAS",
    "read_csv",
    "write_csv",
]
