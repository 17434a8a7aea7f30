"""Four-frequency multipliers, their case bounds, and exact integer identities.

All frequency algebra is done in Python/numpy 64-bit integers; the radius caps
keep every product far from overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, PreconditionError, ResourceGuardError
from .spectral import japanese

__all__ = [
    "FrequencyQuad",
    "BoundCase",
    "ScanReport",
    "DEFAULT_FACTOR",
    "m4_kernel",
    "big_m4",
    "classify_case",
    "bound_ratio_scan",
    "dmvt_ratio_scan",
    "dmvt_second_derivative",
    "dispersive_identity_check",
    "factorization_check",
    "identity_scan",
    "IdentityTally",
]

# a << b  <=>  FACTOR * a <= b ;  a <~ b  <=>  a <= FACTOR * b
DEFAULT_FACTOR = 8
MAX_SCAN_RADIUS = 256
MAX_DMVT_XI = 10_000


@dataclass(frozen=True)
class FrequencyQuad:
    xi: tuple

    def __post_init__(self):
        xi = tuple(int(x) for x in self.xi)
        if len(xi) != 4:
            raise PreconditionError("a quad has exactly four frequencies")
        if sum(xi) != 0:
            raise PreconditionError(f"{xi} is not on the hyperplane xi1+xi2+xi3+xi4=0")
        object.__setattr__(self, "xi", xi)

    @classmethod
    def coerce(cls, quad):
        return quad if isinstance(quad, cls) else cls(tuple(quad))

    @property
    def xi14(self):
        return self.xi[0] + self.xi[3]

    @property
    def xi34(self):
        return self.xi[2] + self.xi[3]

    @property
    def xi12(self):
        return self.xi[0] + self.xi[1]


class BoundCase(str, Enum):
    CASE_I = "case_i"
    CASE_II = "case_ii"
    CASE_III = "case_iii"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class CaseStats:
    max_ratio: float
    argmax: FrequencyQuad | None
    count: int


@dataclass(frozen=True)
class ScanReport:
    """Per-case suprema of a bound ratio over an enumerated set.

    ``cases`` maps a case label to :class:`CaseStats`, gathered over every quad
    meeting that case's hypothesis (hypotheses may overlap). ``class_counts``
    holds the exclusive tallies from :func:`classify_case`. ``factor`` records
    the threshold used for the asymptotic comparisons.
    """

    radius: int
    s: float
    cases: dict
    factor: float = DEFAULT_FACTOR
    total: int = 0
    class_counts: dict = field(default_factory=dict)

    def max_ratio(self, case):
        return self.cases[BoundCase(case).value if isinstance(case, BoundCase) else case].max_ratio


def _weight(xi, s):
    return japanese(xi) ** (2.0 * s)


def m4_kernel(quad, s):
    """``xi1 <xi3>^2s + xi2 <xi4>^2s + xi3 <xi1>^2s + xi4 <xi2>^2s``."""
    x1, x2, x3, x4 = FrequencyQuad.coerce(quad).xi
    return float(
        x1 * _weight(x3, s) + x2 * _weight(x4, s) + x3 * _weight(x1, s) + x4 * _weight(x2, s)
    )


def big_m4(quad, s):
    """``m4 / (xi14 xi34)``; undefined on the resonant set."""
    q = FrequencyQuad.coerce(quad)
    den = q.xi14 * q.xi34
    if den == 0:
        raise DomainError(f"M4 undefined for resonant quad {q.xi} (xi14*xi34 = 0)")
    return m4_kernel(q, s) / den


def _case_masks(a, xi14, xi34, factor):
    """Vectorised case hypotheses.

    ``a`` is an ``(..., 4)`` integer array of |xi_j|; returns boolean masks
    ``(case_i, case_ii, case_iii)`` before precedence is applied, plus the
    sorted magnitudes.
    """
    srt = np.sort(a, axis=-1)
    n1, n3, n4 = srt[..., 3], srt[..., 1], srt[..., 0]
    lo = np.minimum(np.abs(xi14), np.abs(xi34))
    hi = np.maximum(np.abs(xi14), np.abs(xi34))
    case_i = (n1 <= factor * lo) | (n1 >= factor * hi)
    case_ii = (factor * hi >= n1) & (n1 >= factor * lo)
    odd_max = np.maximum(a[..., 0], a[..., 2])
    odd_min = np.minimum(a[..., 0], a[..., 2])
    even_max = np.maximum(a[..., 1], a[..., 3])
    even_min = np.minimum(a[..., 1], a[..., 3])
    pair_a = (n1 == odd_max) & (n3 == even_max) & (n4 == even_min)
    pair_b = (n1 == even_max) & (n3 == odd_max) & (n4 == odd_min)
    case_iii = (pair_a | pair_b) & (n1 >= factor * n3)
    return case_i, case_ii, case_iii, srt


def classify_case(quad, factor=DEFAULT_FACTOR):
    """Which of the three M4 case hypotheses the quad meets.

    Hypotheses are tried in the order i, ii, iii; the first that holds wins.
    """
    q = FrequencyQuad.coerce(quad)
    if q.xi14 * q.xi34 == 0:
        raise DomainError(f"resonant quad {q.xi}")
    a = np.abs(np.array(q.xi, dtype=np.int64))
    ci, cii, ciii, _ = _case_masks(a, q.xi14, q.xi34, factor)
    if ci:
        return BoundCase.CASE_I
    if cii:
        return BoundCase.CASE_II
    if ciii:
        return BoundCase.CASE_III
    return BoundCase.EXCLUDED


def case_bound(case, quad, s):
    """Right-hand side of the M4 bound for ``case``."""
    a = sorted(abs(x) for x in FrequencyQuad.coerce(quad).xi)
    n1, n3 = a[3], a[1]
    case = BoundCase(case)
    if case is BoundCase.CASE_I:
        return float(japanese(n1) ** (2 * s - 1))
    if case is BoundCase.CASE_II:
        return float(japanese(n3) ** (2 * s - 1))
    if case is BoundCase.CASE_III:
        return float(japanese(n3) * japanese(n1) ** (2 * s - 2))
    raise DomainError("excluded quads carry no bound")


def _update(best, case, ratio, quads):
    if ratio.size == 0:
        return
    top = ratio.max()
    hits = quads[ratio == top]
    order = np.lexsort(hits.T[::-1])
    witness = tuple(int(v) for v in hits[order[0]])
    cur = best.get(case)
    if cur is None or top > cur[0]:
        best[case] = (float(top), witness)


def bound_ratio_scan(radius, s, factor=DEFAULT_FACTOR):
    """Enumerate all non-resonant quads in the box ``|xi_j| <= radius``.

    For every quad meeting a case hypothesis the ratio ``|M4| / bound(case)``
    is formed; the report holds the per-case maximum, a witness
    (lexicographically smallest among ties) and the number of quads meeting
    each hypothesis. Exclusive classification counts ride along.
    """
    radius = int(radius)
    if radius < 1:
        raise DomainError("radius must be >= 1")
    if radius > MAX_SCAN_RADIUS:
        raise ResourceGuardError(f"radius {radius} exceeds cap {MAX_SCAN_RADIUS}")
    r = np.arange(-radius, radius + 1, dtype=np.int64)
    wtab = _weight(np.arange(0, 3 * radius + 1), s)
    x2, x3 = np.meshgrid(r, r, indexing="ij")
    x2 = x2.ravel()
    x3 = x3.ravel()
    counts = {c: 0 for c in BoundCase}
    classes = {c: 0 for c in BoundCase}
    best = {}
    total = 0
    for x1 in range(-radius, radius + 1):
        x4 = -(x1 + x2 + x3)
        xi14 = x1 + x4
        xi34 = x3 + x4
        keep = (np.abs(x4) <= radius) & (xi14 != 0) & (xi34 != 0)
        if not np.any(keep):
            continue
        q2, q3, q4 = x2[keep], x3[keep], x4[keep]
        q14, q34 = xi14[keep], xi34[keep]
        q1 = np.full(q2.shape, x1, dtype=np.int64)
        quads = np.stack((q1, q2, q3, q4), axis=1)
        a = np.abs(quads)
        m4 = (
            q1 * wtab[a[:, 2]] + q2 * wtab[a[:, 3]] + q3 * wtab[a[:, 0]] + q4 * wtab[a[:, 1]]
        )
        absm = np.abs(m4 / (q14 * q34))
        ci, cii, ciii, srt = _case_masks(a, q14, q34, factor)
        excl = ~(ci | cii | ciii)
        classes[BoundCase.CASE_I] += int(ci.sum())
        classes[BoundCase.CASE_II] += int((cii & ~ci).sum())
        classes[BoundCase.CASE_III] += int((ciii & ~ci & ~cii).sum())
        classes[BoundCase.EXCLUDED] += int(excl.sum())
        n1 = srt[:, 3].astype(float)
        n3 = srt[:, 1].astype(float)
        jn1 = japanese(n1)
        jn3 = japanese(n3)
        bounds = {
            BoundCase.CASE_I: (ci, jn1 ** (2 * s - 1)),
            BoundCase.CASE_II: (cii, jn3 ** (2 * s - 1)),
            BoundCase.CASE_III: (ciii, jn3 * jn1 ** (2 * s - 2)),
        }
        for case, (mask, bnd) in bounds.items():
            counts[case] += int(mask.sum())
            _update(best, case, absm[mask] / bnd[mask], quads[mask])
        counts[BoundCase.EXCLUDED] += int(excl.sum())
        total += quads.shape[0]

    cases = {}
    for case in BoundCase:
        if case is BoundCase.EXCLUDED:
            cases[case.value] = CaseStats(float("nan"), None, counts[case])
            continue
        ratio, witness = best.get(case, (0.0, None))
        cases[case.value] = CaseStats(
            ratio, None if witness is None else FrequencyQuad(witness), counts[case]
        )
    return ScanReport(
        radius, float(s), cases, factor, total, {c.value: n for c, n in classes.items()}
    )


def dmvt_second_derivative(x, s):
    """Closed-form ``f''`` for ``f(x) = x <x>^{2s}``."""
    x = np.asarray(x, dtype=float)
    q = 1.0 + x * x
    return 2.0 * s * x * q ** (s - 2.0) * (3.0 + (2.0 * s + 1.0) * x * x)


def _dmvt_f(x, s):
    x = np.asarray(x, dtype=float)
    return x * (1.0 + x * x) ** s


def dmvt_ratio_scan(s, xi_max, factor=DEFAULT_FACTOR):
    """Largest ratio of the second difference of ``f(x) = x<x>^{2s}`` to ``|f''(xi)||eta||lambda|``.

    Scans ``factor <= xi <= xi_max`` and non-zero ``|eta|, |lambda| <= xi / factor``.
    ``f`` is odd, so negative ``xi`` give the same ratios.
    """
    xi_max = int(xi_max)
    if xi_max > MAX_DMVT_XI:
        raise ResourceGuardError(f"xi_max {xi_max} exceeds cap {MAX_DMVT_XI}")
    if xi_max < factor:
        raise DomainError(f"xi_max must be >= {factor}")
    best = (0.0, None)
    count = 0
    for xi in range(int(factor), xi_max + 1):
        w = xi // int(factor)
        d = np.concatenate((np.arange(-w, 0), np.arange(1, w + 1)))
        eta, lam = np.meshgrid(d, d, indexing="ij")
        lo, hi = np.minimum(eta, lam), np.maximum(eta, lam)
        num = (_dmvt_f(xi + eta + lam, s) + _dmvt_f(xi, s)) - (
            _dmvt_f(xi + lo, s) + _dmvt_f(xi + hi, s)
        )
        ratio = np.abs(num) / (dmvt_second_derivative(xi, s) * np.abs(eta * lam))
        count += ratio.size
        top = ratio.max()
        if top > best[0]:
            i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
            best = (float(top), (xi, int(d[i]), int(d[j])))
    return ScanReport(
        xi_max, float(s), {"dmvt": CaseStats(best[0], best[1], count)}, factor, count
    )


def dmvt_ratio(xi, eta, lam, s):
    """Single ratio ``|f(xi+eta+lam) - f(xi+eta) - f(xi+lam) + f(xi)| / (|f''(xi)| |eta lam|)``."""
    a, b = sorted((eta, lam))
    # grouped so that swapping eta and lambda gives bit-identical results
    num = (_dmvt_f(xi + eta + lam, s) + _dmvt_f(xi, s)) - (_dmvt_f(xi + a, s) + _dmvt_f(xi + b, s))
    return float(abs(num) / (abs(dmvt_second_derivative(xi, s)) * abs(eta * lam)))


def dispersive_identity_check(quad, taus):
    """``sum_j (tau_j + (-1)^(j-1) xi_j^2) == 2 xi12 xi14``.

    The frequency part is checked in exact integers; the tau part must sum to
    zero, which is checked exactly when the taus are integers or Fractions.
    """
    q = FrequencyQuad.coerce(quad)
    taus = list(taus)
    if len(taus) != 4:
        raise PreconditionError("need four taus")
    tau_sum = sum(taus)
    if tau_sum != 0 and abs(tau_sum) > 1e-12 * max(1.0, max(abs(t) for t in taus)):
        raise PreconditionError(f"taus must sum to zero, got {tau_sum}")
    x1, x2, x3, x4 = q.xi
    lhs_xi = x1 * x1 - x2 * x2 + x3 * x3 - x4 * x4
    return lhs_xi == 2 * q.xi12 * q.xi14


def factorization_check(xi1, xi2, xi3):
    """``xi1^2 - xi2^2 + xi3^2 - xi^2 == -2 (xi1 - xi)(xi3 - xi)`` with ``xi = xi1+xi2+xi3``."""
    xi = xi1 + xi2 + xi3
    return xi1 * xi1 - xi2 * xi2 + xi3 * xi3 - xi * xi == -2 * (xi1 - xi) * (xi3 - xi)


@dataclass(frozen=True)
class IdentityTally:
    checked: int
    dispersive_pass: int
    factorization_pass: int

    @property
    def all_pass(self):
        return self.dispersive_pass == self.checked and self.factorization_pass == self.checked


def _tally(x1, x2, x3):
    x4 = -(x1 + x2 + x3)
    disp = x1 * x1 - x2 * x2 + x3 * x3 - x4 * x4 == 2 * (x1 + x2) * (x1 + x4)
    fact = factorization_check(x1, x2, x3)
    return x1.size, int(disp.sum()), int(fact.sum())


def identity_scan(radius, n_random=0, random_radius=100, seed=0):
    """Check both integer identities exhaustively on ``|xi1|, |xi2|, |xi3| <= radius``
    and on ``n_random`` extra triples drawn uniformly from ``[-random_radius, random_radius]``.

    Arithmetic is exact int64; no tolerance is involved.
    """
    radius = int(radius)
    if radius < 0:
        raise DomainError("radius must be >= 0")
    if radius > MAX_SCAN_RADIUS:
        raise ResourceGuardError(f"radius {radius} exceeds cap {MAX_SCAN_RADIUS}")
    r = np.arange(-radius, radius + 1, dtype=np.int64)
    x2, x3 = (a.ravel() for a in np.meshgrid(r, r, indexing="ij"))
    total = [0, 0, 0]
    for x1 in r:
        for i, v in enumerate(_tally(np.full_like(x2, x1), x2, x3)):
            total[i] += v
    if n_random:
        rng = np.random.default_rng(seed)
        x = rng.integers(-random_radius, random_radius + 1, size=(3, int(n_random)), dtype=np.int64)
        for i, v in enumerate(_tally(*x)):
            total[i] += v
    return IdentityTally(*total)
