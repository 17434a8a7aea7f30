import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dnls_lab.errors import ResourceGuardError
from dnls_lab.evolution import SimConfig, evolve
from dnls_lab.invariants import (
    SYMMETRIZATION_CONSTANT,
    FrequencyQuad,
    conserved,
    fit_symmetrization_constant,
    hs_functional,
    hs_growth_rate,
    m4_kernel,
    symmetrized_growth,
    symmetrized_sum,
)
from dnls_lab.nonlinearity import MuMode, mu
from dnls_lab.spectral import SpectralState, single_mode, zero_state

from _oracles import quadrature_conserved
from conftest import plane_wave, random_small


class TestConserved:
    def test_zero(self):
        assert conserved(zero_state(4), 0.0).as_array().tolist() == [0, 0, 0]

    @pytest.mark.parametrize("xi0,a", [(1, 0.1), (2, 0.5), (-3, 0.8)])
    def test_plane_wave(self, xi0, a):
        q = conserved(plane_wave(6, xi0, a), a * a)
        two_pi = 2 * np.pi
        assert q.mass == pytest.approx(two_pi * a**2, rel=1e-14)
        # the conserved energy carries +|A|^6 / 2 (mu = |A|^2 enters with a plus sign)
        assert q.energy == pytest.approx(two_pi * (xi0**2 * a**2 + 0.5 * xi0 * a**4 + 0.5 * a**6), rel=1e-13)
        assert q.momentum == pytest.approx(two_pi * (xi0 * a**2 + 0.5 * a**4), rel=1e-13)

    @pytest.mark.parametrize("seed", range(4))
    def test_quadrature_oracle(self, seed):
        u = random_small(seed, n_max=12, sigma=0.6, amplitude=0.5)
        m = mu(u)
        got = conserved(u, m).as_array()
        np.testing.assert_allclose(got, quadrature_conserved(u.coeffs, m), rtol=1e-11)

    def test_energy_sign_by_conservation(self):
        u0 = random_small(5, n_max=48, sigma=1.0, amplitude=0.2, band=7)
        tr = evolve(u0, SimConfig(48, 1e-3, 0.5, 500))
        m = tr.config.mu_mode.mu0
        e0, e1 = conserved(tr.frames[0], m).energy, conserved(tr.frames[-1], m).energy
        assert abs(e1 - e0) / abs(e0) <= 1e-8
        # the opposite sign of the quartic term is not conserved

        def flipped(f):
            q = conserved(f, m)
            quart = (q.energy - conserved(f, 0.0).energy) / (0.5 * m)
            return q.energy - m * quart

        assert abs(flipped(tr.frames[-1]) - flipped(tr.frames[0])) > 1e3 * abs(e1 - e0)


class TestGrowth:
    def test_plane_wave_all_zero(self):
        g = hs_growth_rate(plane_wave(6, 2, 0.4), 0.45, MuMode.constant(0.16))
        for v in (g.linear_part, g.n12_part, g.n22_internal_part, g.n11_part, g.n2_part, g.total):
            assert abs(v) <= 1e-16

    @given(st.integers(0, 10**6), st.floats(0, 1.5))
    def test_vanishing_parts(self, seed, s):
        u = random_small(seed, n_max=16, sigma=0.5, amplitude=0.8)
        g = hs_growth_rate(u, s)
        assert abs(g.linear_part) <= 1e-13 * g.scale
        assert abs(g.n12_part) <= 1e-13 * g.scale
        assert abs(g.n22_internal_part) <= 1e-13 * g.scale
        assert abs(g.total - g.n11_part - g.n2_part) <= 1e-12 * g.scale

    def test_finite_difference_second_order(self):
        s = 0.45
        u0 = random_small(3, n_max=32, sigma=1.0, amplitude=0.3, band=6)
        mode = MuMode.constant().resolve(u0)
        t_mid = 0.02
        mid = evolve(u0, SimConfig(32, 2.5e-4, t_mid, 1000, mode)).frames[-1]
        rate = hs_growth_rate(mid, s, mode).total
        errs = []
        for h in (4e-3, 2e-3):
            fine = h / 16
            after = evolve(mid, SimConfig(32, fine, h, 1000, mode)).frames[-1]
            before = evolve(u0, SimConfig(32, fine, t_mid - h, 1000, mode)).frames[-1]
            fd = (hs_functional(after, s) - hs_functional(before, s)) / (2 * h)
            errs.append(abs(fd - rate))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.3)


class TestSymmetrization:
    def test_plane_wave_zero(self):
        assert symmetrized_growth(plane_wave(5, 2, 0.7), 0.3) == 0

    @pytest.mark.parametrize("s", [0.3, 0.45, 1.0])
    def test_two_modes(self, s):
        c = np.zeros(7, complex)
        c[4], c[5] = 0.6, 0.3 - 0.2j
        u = SpectralState(3, c)
        a = symmetrized_growth(u, s)
        b = hs_growth_rate(u, s, MuMode.constant(0.0)).n11_part
        assert a == pytest.approx(b, abs=1e-12)

    def test_sum_is_imaginary(self):
        u = random_small(8, n_max=10, amplitude=0.7)
        assert abs(symmetrized_sum(u, 0.3).real) <= 1e-13

    def test_fitted_constant(self):
        states = [random_small(s, n_max=8, sigma=0.5, amplitude=0.6) for s in range(10)]
        c = fit_symmetrization_constant(states, 0.45)
        assert c == pytest.approx(SYMMETRIZATION_CONSTANT, abs=1e-12)

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            symmetrized_sum(single_mode(65, 0), 0.3)


class TestKernel:
    def test_antisymmetric(self):
        assert m4_kernel((1, -1, 1, -1), 0.3) == 0

    @pytest.mark.parametrize("s", [0.0, 0.3, 0.5, 1.7])
    def test_closed_form(self, s):
        assert m4_kernel((2, -1, 0, -1), s) == pytest.approx(2 - 2 * 2**s, abs=1e-14)

    @given(st.tuples(*[st.integers(-40, 40)] * 3), st.floats(0, 2))
    def test_swaps(self, x, s):
        q = (*x, -sum(x))
        a = m4_kernel(q, s)
        assert m4_kernel((q[2], q[1], q[0], q[3]), s) == pytest.approx(a, rel=1e-12, abs=1e-12)
        assert m4_kernel((q[0], q[3], q[2], q[1]), s) == pytest.approx(a, rel=1e-12, abs=1e-12)

    def test_quad_type_exported(self):
        assert FrequencyQuad((1, 2, -3, 0)).xi14 == 1
