import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evanescent.constants import C
from evanescent.errors import DomainError, OnShell, PoleError, ValidationError, ZeroDetuning, ZeroResponse
from evanescent.temporal_core import (
    MassiveState,
    SpectralResponse,
    formation_path,
    load_response_table,
    massive_formation_kernel,
    massive_formation_leading,
    massive_temporal,
    mixed_formation_time,
    photon_propagator_times,
    renormalized_formation_time,
    temporal_pair,
)


def lorentzian(w0, gamma):
    return SpectralResponse(lambda w: 1 / (w - w0 + 0.5j * gamma))


def lorentzian_tau(w, w0, gamma):
    # (1/i) d/dw ln 1/(w - w0 + i g/2) = i / (w - w0 + i g/2)
    return 1j / (w - w0 + 0.5j * gamma)


class TestTemporalPair:
    def test_pure_phase_delay(self):
        T0 = 3.2e-12
        tau1, tau2 = temporal_pair(SpectralResponse(lambda w: cmath.exp(1j * w * T0)), 2e12)
        assert tau1 == pytest.approx(T0, rel=1e-9)
        assert tau2 == pytest.approx(0, abs=1e-9 * T0)

    def test_pure_log_slope(self):
        Om = 5e11
        tau1, tau2 = temporal_pair(SpectralResponse(lambda w: math.exp(-w / Om)), 1e12)
        assert tau1 == pytest.approx(0, abs=1e-20)
        assert tau2 == pytest.approx(1 / Om, rel=1e-9)

    def test_lorentzian_on_resonance(self):
        w0, g = 1e15, 1e13
        res = temporal_pair(lorentzian(w0, g), w0)
        oracle = lorentzian_tau(w0, w0, g)
        assert oracle.real == pytest.approx(2 / g, rel=1e-14)
        assert res.tau1 == pytest.approx(oracle.real, rel=1e-6)
        assert res.tau2 == pytest.approx(0, abs=1e-6 * 2 / g)

    @pytest.mark.parametrize("offset", [-3.0, -0.7, 0.4, 2.5])
    def test_lorentzian_off_resonance(self, offset):
        w0, g = 1e15, 1e13
        w = w0 + offset * g
        res = temporal_pair(lorentzian(w0, g), w)
        oracle = lorentzian_tau(w, w0, g)
        assert res.complex == pytest.approx(oracle, rel=1e-6)

    def test_combined_response(self):
        T0, Om = 1e-9, 2e9
        s = SpectralResponse(lambda w: cmath.exp(1j * w * T0 - w / Om))
        tau1, tau2 = temporal_pair(s, 7e9, step=1e3)
        assert tau1 == pytest.approx(T0, rel=1e-7)
        assert tau2 == pytest.approx(1 / Om, rel=1e-7)

    def test_second_order_convergence(self):
        w0, g = 1.0, 0.2
        s = lorentzian(w0, g)
        w = 1.13
        exact = lorentzian_tau(w, w0, g)
        err = [abs(temporal_pair(s, w, step=h).complex - exact) for h in (2e-3, 1e-3)]
        assert err[0] / err[1] >= 3.9

    def test_richardson_beats_plain(self):
        s = lorentzian(1.0, 0.2)
        exact = lorentzian_tau(1.13, 1.0, 0.2)
        plain = abs(temporal_pair(s, 1.13, step=1e-2).complex - exact)
        rich = abs(temporal_pair(s, 1.13, step=1e-2, richardson=True).complex - exact)
        assert rich < plain / 100

    def test_phase_unwrapped_across_branch_cut(self):
        T0 = 1.0
        s = SpectralResponse(lambda w: cmath.exp(1j * w * T0))
        # stencil straddles the +-pi cut of the principal argument
        tau1, _ = temporal_pair(s, math.pi, step=0.05)
        assert tau1 == pytest.approx(T0, rel=1e-12)

    def test_k_dependent_response(self):
        s = SpectralResponse(lambda w, k: cmath.exp(1j * w * k), k=2.0)
        assert temporal_pair(s, 1.0).tau1 == pytest.approx(2.0, rel=1e-9)

    def test_zero_response(self):
        s = SpectralResponse(lambda w: w - 1.0)
        with pytest.raises(ZeroResponse):
            temporal_pair(s, 1.0, step=1e-3)

    def test_domain(self):
        s = SpectralResponse(lambda w: cmath.exp(1j * w), domain=(0.0, 1.0))
        with pytest.raises(DomainError):
            temporal_pair(s, 0.99, step=0.05)
        temporal_pair(s, 0.5, step=0.05)

    def test_tabulated_response(self):
        T0 = 0.5
        w = np.linspace(0, 10, 20001)
        s = SpectralResponse.from_table(w, np.exp(1j * w * T0))
        assert s.domain == (0.0, 10.0)
        assert temporal_pair(s, 4.0, step=1e-2).tau1 == pytest.approx(T0, rel=1e-4)

    def test_load_table(self):
        text = "# omega re im\n0, 1, 0\n1 0 1\n2, -1, 0\n"
        s = load_response_table(text.splitlines())
        assert s(0.5) == pytest.approx(0.5 + 0.5j)

    def test_table_rejects_unsorted(self):
        with pytest.raises(ValidationError):
            SpectralResponse.from_table([0, 2, 1], [1, 1, 1])


class TestPhotonPropagator:
    k = 10.0  # rad/m

    def test_retarded(self):
        kc = self.k * C
        res = photon_propagator_times(2 * kc, self.k)
        assert res.tau1 == 0
        assert res.tau2 == pytest.approx(1 / kc, rel=1e-15)
        assert res.delta_weight == -math.pi

    def test_advanced(self):
        kc = self.k * C
        assert photon_propagator_times(kc / 2, self.k).tau2 == pytest.approx(-2 / kc, rel=1e-15)

    def test_on_shell(self):
        with pytest.raises(OnShell) as info:
            photon_propagator_times(self.k * C, self.k)
        assert info.value.delta_weight == -math.pi

    def test_full_form_matches_log_derivative(self):
        kc = self.k * C
        w = 1.7 * kc
        res = photon_propagator_times(w, self.k, form="full")
        numeric = temporal_pair(SpectralResponse(lambda x: 4 * math.pi / (x * x - kc * kc)), w)
        assert numeric.tau1 == pytest.approx(0, abs=1e-12 / kc)
        assert res.tau2 == pytest.approx(numeric.tau2, rel=1e-8)

    def test_pole_form_is_near_shell_limit(self):
        kc = self.k * C
        w = kc * (1 + 1e-6)
        full = photon_propagator_times(w, self.k, form="full").tau2
        pole = photon_propagator_times(w, self.k).tau2
        assert pole == pytest.approx(full, rel=1e-5)


class TestMixedFormation:
    r = 3.0

    def omega(self, x):
        return x * C / self.r

    def test_quarter_pi(self):
        assert mixed_formation_time(self.omega(math.pi / 4), self.r) == pytest.approx(-self.r / C, rel=1e-14)

    def test_half_pi(self):
        assert mixed_formation_time(self.omega(math.pi / 2), self.r) == pytest.approx(0, abs=1e-15 * self.r / C)

    def test_three_quarter_pi(self):
        assert mixed_formation_time(self.omega(3 * math.pi / 4), self.r) == pytest.approx(self.r / C, rel=1e-14)

    def test_sign_from_log_derivative(self):
        w = self.omega(1.1)
        numeric = temporal_pair(SpectralResponse(lambda x: math.sin(x * self.r / C) / (2 * math.pi)), w)
        assert numeric.tau1 == pytest.approx(0, abs=1e-12)
        assert mixed_formation_time(w, self.r) == pytest.approx(numeric.tau2, rel=1e-8)

    @pytest.mark.parametrize("x", [0.0, math.pi, 2 * math.pi, -math.pi])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            mixed_formation_time(self.omega(x), self.r)

    @given(st.floats(1e-6, 1.5))
    def test_odd_about_half_pi(self, d):
        up = mixed_formation_time(self.omega(math.pi / 2 + d), self.r)
        down = mixed_formation_time(self.omega(math.pi / 2 - d), self.r)
        assert up == pytest.approx(-down, rel=1e-9, abs=1e-15 * self.r / C)


def cot_minus_inverse(x):
    return float(mpmath.cot(mpmath.mpf(x)) - 1 / mpmath.mpf(x))


class TestRenormalized:
    r = 2.0

    def omega(self, x):
        return x * C / self.r

    def test_half_pi(self):
        val = renormalized_formation_time(self.omega(math.pi / 2), self.r, 10**6)
        assert val == pytest.approx(self.r / C * 2 / math.pi, rel=1e-12)

    def test_small_x_vanishes(self):
        for x in (1e-3, 1e-6, 1e-9):
            val = renormalized_formation_time(self.omega(x), self.r)
            # cot x - 1/x ~ -x/3
            assert val == pytest.approx(self.r / C * x / 3, rel=1e-5)
        assert renormalized_formation_time(0.0, self.r) == 0.0

    @pytest.mark.parametrize("x", [0.3, 1.0, 2.2, 2.9, 4.0, 7.5])
    def test_identity(self, x):
        val = renormalized_formation_time(self.omega(x), self.r, 10**5)
        assert val == pytest.approx(-self.r / C * cot_minus_inverse(x), rel=1e-10)

    def test_matches_mixed_plus_coulomb_term(self):
        x = 1.3
        w = self.omega(x)
        coulomb = self.r / C / x
        assert renormalized_formation_time(w, self.r) == pytest.approx(mixed_formation_time(w, self.r) + coulomb, rel=1e-10)

    def test_tail_correction(self):
        x, N = 1.0, 1000
        exact = -self.r / C * cot_minus_inverse(x)
        bare = renormalized_formation_time(self.omega(x), self.r, N, tail=False)
        tailed = renormalized_formation_time(self.omega(x), self.r, N)
        # bare truncation error ~ (r/c) 2x / (pi^2 N)
        assert abs(bare - exact) == pytest.approx(self.r / C * 2 * x / (math.pi**2 * N), rel=1e-2)
        assert tailed == pytest.approx(exact, rel=1e-13)

    def test_first_pole_at_pi(self):
        with pytest.raises(PoleError):
            renormalized_formation_time(self.omega(math.pi), self.r)
        below = [abs(renormalized_formation_time(self.omega(math.pi - d), self.r)) for d in (1e-2, 1e-4, 1e-6)]
        assert below[0] < below[1] < below[2]
        # no pole between 0 and pi: the series is smooth there
        xs = np.linspace(0.01, math.pi - 0.01, 200)
        vals = [renormalized_formation_time(self.omega(x), self.r, 2000) for x in xs]
        assert np.all(np.isfinite(vals))
        assert np.all(np.diff(vals) > 0)

    def test_bad_terms(self):
        with pytest.raises(ValidationError):
            renormalized_formation_time(1.0, 1.0, 0)


class TestFormationPath:
    def test_hundred_megahertz(self):
        assert formation_path(2 * math.pi * 1e8) == pytest.approx(1.49896229, rel=1e-8)

    def test_half_wavelength(self):
        lam = 633e-9
        w = 2 * math.pi * C / lam
        assert formation_path(w) == pytest.approx(lam / 2, rel=1e-14)

    def test_inverse_proportional(self):
        assert formation_path(4e9) == pytest.approx(formation_path(2e9) / 2, rel=1e-15)

    def test_zero(self):
        with pytest.raises(ZeroDetuning):
            formation_path(0.0)

    @given(st.floats(1e-3, 1e18) | st.floats(-1e18, -1e-3))
    def test_product_is_pi_c(self, dw):
        assert formation_path(dw) * abs(dw) == pytest.approx(math.pi * C, rel=1e-15)


class TestMassive:
    def test_above_threshold_quarter_pi(self):
        m, E = 1.0, 2.0
        kappa = math.sqrt(E * E - m * m)
        r = math.pi / 4 / kappa
        res = massive_temporal(MassiveState(E, m, r))
        assert res.tau1 == 0
        assert res.tau2 == pytest.approx(-r * E / kappa, rel=1e-14)

    def test_below_threshold_asymptote(self):
        E, m, r = 0.6, 1.0, 50.0
        kb = math.sqrt(m * m - E * E)
        res = massive_temporal(MassiveState(E, m, r))
        assert res.tau2 == 0
        assert res.tau1 == pytest.approx(r * E / kb, rel=1e-15)

    def test_sign_from_log_derivative(self):
        m, r, E = 1.0, 0.7, 1.9
        numeric = temporal_pair(SpectralResponse(lambda e: math.sin(math.sqrt(e * e - m * m) * r) / (2 * r)), E)
        res = massive_temporal(MassiveState(E, m, r))
        assert numeric.tau1 == pytest.approx(0, abs=1e-9)
        assert res.tau2 == pytest.approx(numeric.tau2, rel=1e-8)

    def test_massless_limit_matches_photon_branch(self):
        # c = 1 reading: energy -> omega, distance -> r / c
        for w, r_si in [(1e9, 0.2), (2.5e9, 0.11), (3e8, 2.0)]:
            res = massive_temporal(MassiveState(w, 0.0, r_si / C))
            assert res.tau2 == pytest.approx(mixed_formation_time(w, r_si), rel=1e-12)

    def test_continuation(self):
        for E, m, r in [(0.5, 1.0, 0.3), (0.9, 2.0, 4.0), (1e-3, 1.0, 1.0)]:
            kb = math.sqrt(m * m - E * E)
            continued = massive_formation_kernel(E, 1j * kb, r)
            oracle = r * E / kb * (cmath.cosh(kb * r) / cmath.sinh(kb * r))
            assert continued.imag == pytest.approx(0, abs=1e-15 * abs(oracle))
            assert continued.real == pytest.approx(oracle.real, rel=1e-12)
            assert massive_temporal(MassiveState(E, m, r)).tau1 == pytest.approx(continued.real, rel=1e-12)

    def test_on_shell_and_pole(self):
        with pytest.raises(OnShell):
            massive_temporal(MassiveState(1.0, 1.0, 1.0))
        E, m = 2.0, 1.0
        with pytest.raises(PoleError):
            massive_temporal(MassiveState(E, m, math.pi / math.sqrt(E * E - m * m)))

    def test_state_validation(self):
        with pytest.raises(ValidationError):
            MassiveState(0.0, 1.0, 1.0)
        with pytest.raises(ValidationError):
            MassiveState(1.0, -1.0, 1.0)
        with pytest.raises(ValidationError):
            MassiveState(1.0, 1.0, 0.0)
        assert MassiveState(0.5, 1.0, 1.0).bound


class TestLeading:
    def test_double_mass(self):
        assert massive_formation_leading(2.0, 1.0) == pytest.approx(-2 / 3, rel=1e-15)
        assert massive_formation_leading(6.0, 3.0) == pytest.approx(-2 / 9, rel=1e-15)

    def test_diverges_at_threshold(self):
        vals = [massive_formation_leading(1 + d, 1.0) for d in (1e-2, 1e-4, 1e-6)]
        assert vals[0] > vals[1] > vals[2]
        assert vals[2] < -1e5
        with pytest.raises(OnShell):
            massive_formation_leading(1.0, 1.0)

    @given(st.floats(1e-3, 1e3), st.floats(1e-3, 10.0))
    def test_negative_above_threshold(self, m, excess):
        assert massive_formation_leading(m * (1 + excess), m) < 0

    @settings(max_examples=50)
    @given(st.floats(0.05, 3.0), st.floats(0.1, 5.0))
    def test_is_pole_part_of_full_series(self, m, excess):
        # the full formation time minus its leading term is regular at threshold
        E = m * (1 + excess)
        kappa = math.sqrt(E * E - m * m)
        r = 1e-3 / kappa  # kappa r << 1: the cotangent is dominated by its pole
        full = massive_temporal(MassiveState(E, m, r)).tau2
        lead = massive_formation_leading(E, m)
        # -(rE/kappa) cot(kappa r) = -E/kappa^2 + E r^2 / 3 + ...
        assert full - lead == pytest.approx(E * r * r / 3, rel=1e-4, abs=1e-12 * abs(lead))
