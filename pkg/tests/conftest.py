import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dnls_lab.spectral import SpectralProfile, SpectralState, pad, random_state, single_mode

settings.register_profile(
    "lab", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("lab")


def plane_wave(n_max, xi0=1, amplitude=0.1, time=0.0):
    return single_mode(n_max, xi0, amplitude, time)


def random_small(seed, n_max=16, sigma=1.0, amplitude=0.3, band=None):
    """Seeded state; with ``band`` it is supported in ``|xi| <= band`` and padded."""
    prof = SpectralProfile(sigma, amplitude, seed)
    if band is None:
        return random_state(prof, n_max)
    return pad(random_state(prof, band), n_max)


def complex_state(rng, n_max, scale=0.3):
    c = rng.standard_normal(2 * n_max + 1) + 1j * rng.standard_normal(2 * n_max + 1)
    return SpectralState(n_max, scale * c / np.sqrt(2 * n_max + 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or report.when != "call":
        return
    detail = dict(report.user_properties).get("detail", "")
    _ACCEPTANCE[report.nodeid.split("::")[-1]] = (report.outcome.upper(), detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcome, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{name}: {outcome}  {detail}")
