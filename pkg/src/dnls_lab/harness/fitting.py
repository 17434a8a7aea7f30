"""Least-squares power-law fits."""

import numpy as np

from ..errors import DomainError

__all__ = ["fit_loglog_slope"]


def fit_loglog_slope(points):
    """Ordinary least squares of ``log y`` on ``log x``.

    Returns ``(slope, r2)``. When every ``y`` is equal the slope is 0 and
    ``r2`` is reported as 1.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("points must be (x, y) pairs")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(pts)):
        raise DomainError("log-log fit needs finite positive x and y")
    lx, ly = np.log(x), np.log(y)
    if np.unique(lx).size < 2:
        raise DomainError("need at least two distinct x values")
    design = np.column_stack((lx, np.ones_like(lx)))
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum((ly - (slope * lx + intercept)) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(r2)
