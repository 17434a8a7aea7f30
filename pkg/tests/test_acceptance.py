"""Acceptance criteria, one test per criterion.

Tolerances are pinned here. Each test records a one-line measurement that is
echoed in the terminal summary next to its pass/fail outcome.
"""

import time

import numpy as np
import pytest

from dnls_lab.evolution import SimConfig, evolve
from dnls_lab.gauge import dnls_residual
from dnls_lab.harness import convergence_experiment, tail_experiment
from dnls_lab.invariants import (
    SYMMETRIZATION_CONSTANT,
    conserved,
    fit_symmetrization_constant,
    hs_functional,
    hs_growth_rate,
    symmetrized_growth,
)
from dnls_lab.multipliers import (
    bound_ratio_scan,
    dispersive_identity_check,
    dmvt_ratio_scan,
    factorization_check,
    identity_scan,
)
from dnls_lab.nonlinearity import MuMode, mu, n11_direct_oracle, terms
from dnls_lab.spectral import SpectralProfile, random_state

from conftest import plane_wave, random_small

# criterion 1
PW_AMP, PW_XI, PW_N, PW_DT, PW_T = 0.1, 1, 32, 1e-3, 1.0
PW_REL_TOL = 1e-9
ORDER_RATIO, ORDER_SLACK = 16.0, 0.2
PW_RUNTIME = 5.0
# criterion 2
DECOMP_TOL, ORACLE_TOL, N_STATES, DECOMP_RUNTIME = 1e-12, 1e-11, 100, 30.0
# criterion 3
ID_RADIUS, ID_RANDOM, ID_RANDOM_RADIUS = 50, 100_000, 100
# criterion 4
MASS_TOL, EP_TOL = 1e-10, 1e-8
CONS_AMP, CONS_DT, CONS_T = 0.2, 1e-3, 1.0
# criterion 5
VANISH_TOL = 1e-13
FD_ORDER_RATIO, FD_SLACK = 4.0, 0.3
# criterion 6
SYM_TOL = 1e-10
# criterion 7
STABILITY_FACTOR, SCAN_RUNTIME = 2.0, 300.0
# criterion 8
RATE_TARGET, RATE_SLACK, RATE_R2, RATE_RUNTIME = -0.2, 0.3, 0.9, 600.0
# criterion 9
TAIL_MAX_L2, TAIL_RUNTIME = 0.5, 600.0
# criterion 10
GAUGE_TOL, GAUGE_ORDER, GAUGE_SLACK = 1e-6, 4.0, 0.3


def _plane_wave_error(dt):
    tr = evolve(plane_wave(PW_N, PW_XI, PW_AMP), SimConfig(PW_N, dt, PW_T, 10**6))
    w = PW_XI**2 + PW_XI * PW_AMP**2 + PW_AMP**4
    exact = plane_wave(PW_N, PW_XI, PW_AMP).coeffs * np.exp(-1j * w * PW_T)
    return np.max(np.abs(tr.frames[-1].coeffs - exact)) / PW_AMP


def test_criterion_01_plane_wave(record_property):
    t0 = time.perf_counter()
    e1 = _plane_wave_error(PW_DT)
    runtime = time.perf_counter() - t0
    e2 = _plane_wave_error(PW_DT / 2)
    ratio = e1 / e2
    record_property(
        "detail", f"rel_err={e1:.3e} rel_err(dt/2)={e2:.3e} ratio={ratio:.2f} runtime={runtime:.2f}s"
    )
    assert e1 <= PW_REL_TOL
    assert runtime < PW_RUNTIME
    assert abs(ratio - ORDER_RATIO) <= ORDER_SLACK * ORDER_RATIO


def _rel(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


def test_criterion_02_decomposition(record_property):
    t0 = time.perf_counter()
    worst = [0.0, 0.0, 0.0]
    for seed in range(N_STATES):
        n = 4 + (seed % 8) * 4
        u = random_small(seed, n_max=n, sigma=0.6, amplitude=0.5)
        t = terms(u, MuMode.constant(0.25))
        worst[0] = max(worst[0], _rel(t["n11"] + t["n12"], t["n1"]))
        total = t["n11"] + t["n12"] + t["n21"] + t["n22"]
        worst[1] = max(worst[1], _rel(total, t["n1"] + t["n2"]))
        worst[2] = max(worst[2], np.max(np.abs(n11_direct_oracle(u).coeffs - t["n11"])))
    runtime = time.perf_counter() - t0
    record_property(
        "detail",
        f"n1_split={worst[0]:.2e} full_split={worst[1]:.2e} oracle={worst[2]:.2e} runtime={runtime:.1f}s",
    )
    assert worst[0] <= DECOMP_TOL and worst[1] <= DECOMP_TOL
    assert worst[2] <= ORACLE_TOL
    assert runtime < DECOMP_RUNTIME


def test_criterion_03_integer_identities(record_property):
    tally = identity_scan(ID_RADIUS, ID_RANDOM, ID_RANDOM_RADIUS, seed=2024)
    rng = np.random.default_rng(7)
    sample = rng.integers(-ID_RANDOM_RADIUS, ID_RANDOM_RADIUS + 1, size=(ID_RANDOM, 3))
    scalar_fail = 0
    for a, b, c in sample.tolist():
        if not factorization_check(a, b, c):
            scalar_fail += 1
        if not dispersive_identity_check((a, b, c, -(a + b + c)), (0, 0, 0, 0)):
            scalar_fail += 1
    record_property(
        "detail",
        f"checked={tally.checked} dispersive={tally.dispersive_pass} "
        f"factorization={tally.factorization_pass} scalar_failures={scalar_fail}",
    )
    assert tally.all_pass
    assert tally.checked == (2 * ID_RADIUS + 1) ** 3 + ID_RANDOM
    assert scalar_fail == 0


def _drifts(u0, n_max, dt):
    tr = evolve(u0, SimConfig(n_max, dt, CONS_T, int(round(0.05 / dt))))
    m = tr.config.mu_mode.mu0
    q = np.array([conserved(f, m).as_array() for f in tr.frames])
    return np.max(np.abs(q - q[0]), axis=0) / np.abs(q[0])


def test_criterion_04_conservation(record_property):
    # spectrally resolved: data on |xi| <= 7, cascade room up to 48
    u0 = random_small(3, n_max=48, sigma=1.0, amplitude=CONS_AMP, band=7)
    d1 = _drifts(u0, 48, CONS_DT)
    d2 = _drifts(u0, 48, CONS_DT / 2)
    ratios = d1 / d2
    record_property(
        "detail",
        "drift(M,E,P)=" + ",".join(f"{v:.2e}" for v in d1)
        + " ratio(dt/2)=" + ",".join(f"{v:.1f}" for v in ratios),
    )
    assert d1[0] <= MASS_TOL
    assert d1[1] <= EP_TOL and d1[2] <= EP_TOL
    # dt^4 scaling: each drift falls at least by 16 (-20%) when dt halves
    assert np.all(ratios >= ORDER_RATIO * (1 - ORDER_SLACK))


def test_criterion_05_growth_identity(record_property):
    worst = 0.0
    for seed in range(50):
        u = random_small(seed, n_max=16 + seed % 3 * 8, sigma=0.5, amplitude=0.8)
        for s in (0.0, 0.3, 0.45, 1.0):
            g = hs_growth_rate(u, s, MuMode.constant(0.3))
            worst = max(worst, abs(g.linear_part) / g.scale, abs(g.n12_part) / g.scale,
                        abs(g.n22_internal_part) / g.scale)
    s = 0.45
    u0 = random_small(3, n_max=32, sigma=1.0, amplitude=0.3, band=6)
    mode = MuMode.constant().resolve(u0)
    t_mid = 0.02
    mid = evolve(u0, SimConfig(32, 2.5e-4, t_mid, 10**6, mode)).frames[-1]
    rate = hs_growth_rate(mid, s, mode).total
    errs = []
    for h in (4e-3, 2e-3):
        fine = h / 16
        after = evolve(mid, SimConfig(32, fine, h, 10**6, mode)).frames[-1]
        before = evolve(u0, SimConfig(32, fine, t_mid - h, 10**6, mode)).frames[-1]
        errs.append(abs((hs_functional(after, s) - hs_functional(before, s)) / (2 * h) - rate))
    ratio = errs[0] / errs[1]
    record_property("detail", f"vanishing/scale={worst:.2e} fd_err={errs[0]:.2e},{errs[1]:.2e} ratio={ratio:.2f}")
    assert worst <= VANISH_TOL
    assert abs(ratio - FD_ORDER_RATIO) <= FD_SLACK * FD_ORDER_RATIO


def _sym_states(seeds):
    return [random_small(s, n_max=6 + s % 4 * 2, sigma=0.5, amplitude=0.6) for s in seeds]


def test_criterion_06_symmetrization(record_property):
    calib = _sym_states(range(20))
    valid = _sym_states(range(1000, 1100))
    fitted = {s: fit_symmetrization_constant(calib, s) for s in (0.3, 0.45)}
    c = fitted[0.3]
    worst = 0.0
    for s in (0.3, 0.45):
        for u in valid:
            target = hs_growth_rate(u, s, MuMode.constant(0.0)).n11_part
            got = symmetrized_growth(u, s, c)
            worst = max(worst, abs(got - target) / abs(target))
    record_property(
        "detail", f"c(0.3)={fitted[0.3]} c(0.45)={fitted[0.45]} worst_rel={worst:.2e}"
    )
    assert abs(fitted[0.45] - c) <= SYM_TOL * abs(c)
    assert abs(c - SYMMETRIZATION_CONSTANT) <= SYM_TOL
    assert worst <= SYM_TOL


def test_criterion_07_multiplier_scans(record_property):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for s in (0.30, 0.45):
        small = bound_ratio_scan(32, s)
        large = bound_ratio_scan(128, s)
        for case in ("case_i", "case_ii", "case_iii"):
            a, b = small.max_ratio(case), large.max_ratio(case)
            ok &= bool(np.isfinite(b) and a > 0 and 1 / STABILITY_FACTOR <= b / a <= STABILITY_FACTOR)
            parts.append(f"{s}:{case}={a:.3f}->{b:.3f}")
        d1 = dmvt_ratio_scan(s, 512).cases["dmvt"].max_ratio
        d2 = dmvt_ratio_scan(s, 1024).cases["dmvt"].max_ratio
        ok &= bool(np.isfinite(d2) and 1 / STABILITY_FACTOR <= d2 / d1 <= STABILITY_FACTOR)
        parts.append(f"{s}:dmvt={d1:.4f}->{d2:.4f}")
    runtime = time.perf_counter() - t0
    record_property("detail", " ".join(parts) + f" runtime={runtime:.0f}s")
    assert ok
    assert runtime < SCAN_RUNTIME


def test_criterion_08_galerkin_rate(record_property):
    s, s_prime, delta, p = 0.6, 0.45, 0.05, 3.0
    profile = SpectralProfile(s + 0.5 + delta, 0.1, 11)
    s1 = profile.sigma - 1 / p - delta
    t0 = time.perf_counter()
    rep = convergence_experiment(
        profile, s, s_prime, s1, s1 - (s - s_prime), p, [32, 64, 128, 256], 1024, 0.1, 1e-3
    )
    runtime = time.perf_counter() - t0
    record_property(
        "detail",
        f"slope={rep.fitted_slope:.3f} predicted={rep.predicted_exponent:.3f} r2={rep.fit_r2:.4f} "
        f"fl_slope={rep.fl_slope:.3f} floor={rep.floor:.2e} runtime={runtime:.1f}s",
    )
    assert rep.predicted_exponent == pytest.approx(RATE_TARGET)
    assert abs(rep.fitted_slope - RATE_TARGET) <= RATE_SLACK
    assert rep.fit_r2 >= RATE_R2
    assert runtime < RATE_RUNTIME


def test_criterion_09_tail_envelope(record_property):
    s = 0.45
    profile = SpectralProfile(s + 0.55, 0.1, 5)
    u0 = random_state(profile, 1024)
    l2 = float(np.sqrt(2 * np.pi * mu(u0)))
    t0 = time.perf_counter()
    rep = tail_experiment(profile, s, [64, 128, 256, 512], 0.5, 1e-3, n_max=1024)
    runtime = time.perf_counter() - t0
    sup = rep.sup_tails
    monotone = all(b <= a for a, b in zip(sup, sup[1:]))
    record_property(
        "detail",
        f"L2={l2:.3f} C={rep.fitted_c} eps={rep.fitted_eps:.3f} monotone={monotone} runtime={runtime:.1f}s",
    )
    assert l2 <= TAIL_MAX_L2
    assert np.isfinite(rep.fitted_c) and rep.fitted_eps > 0
    assert monotone
    assert runtime < TAIL_RUNTIME


def test_criterion_10_gauge_equivalence(record_property):
    u0 = random_small(1, n_max=32, sigma=2.0, amplitude=0.1, band=4)
    res = {}
    for dt in (1e-3, 5e-4, 2.5e-4):
        res[dt] = float(dnls_residual(evolve(u0, SimConfig(32, dt, 20 * dt))).max())
    r1, r2 = res[1e-3] / res[5e-4], res[5e-4] / res[2.5e-4]
    record_property(
        "detail", "residual=" + ",".join(f"{v:.2e}" for v in res.values()) + f" ratios={r1:.2f},{r2:.2f}"
    )
    assert abs(r1 - GAUGE_ORDER) <= GAUGE_SLACK * GAUGE_ORDER
    assert abs(r2 - GAUGE_ORDER) <= GAUGE_SLACK * GAUGE_ORDER
    assert res[2.5e-4] <= GAUGE_TOL
