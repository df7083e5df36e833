import numpy as np
import pytest
from numpy.testing import assert_allclose

from stcbeam import (
    Excitation,
    ModulationConfig,
    TargetWeights,
    build_geometry,
    chebyshev_taper,
    compensate_amplitudes,
    first_harmonic,
    planar_taper,
    scan_phases,
    synthesize_schedules,
    uniform_excitation,
)

CFG = ModulationConfig()


def linear_af_db(weights, psi):
    """Brute-force array factor of a line of weights over phase-per-element psi."""
    n = np.arange(len(weights))
    af = np.abs(np.exp(1j * np.outer(psi, n)) @ weights)
    return 20 * np.log10(af / af.max())


def sidelobe_peaks_db(af_db):
    peaks = []
    for i in range(1, len(af_db) - 1):
        if af_db[i] > af_db[i - 1] and af_db[i] > af_db[i + 1] and af_db[i] < -1.0:
            peaks.append(af_db[i])
    return np.array(peaks)


class TestChebyshevTaper:
    def test_two_elements_are_uniform(self):
        assert_allclose(chebyshev_taper(2, -25.0), [1.0, 1.0])

    def test_three_elements_minus20_closed_form(self):
        # T_2 expansion with x0^2 = (R+1)/2 = 5.5 gives weights [2.75, 4.5, 2.75]
        assert_allclose(chebyshev_taper(3, -20.0), np.array([2.75, 4.5, 2.75]) / 4.5, atol=1e-9)

    def test_eight_elements_minus30_equiripple(self):
        w = chebyshev_taper(8, -30.0)
        psi = np.linspace(0, np.pi, 10000)
        peaks = sidelobe_peaks_db(linear_af_db(w, psi))
        assert peaks.size >= 2
        assert np.all(np.abs(peaks - (-30.0)) <= 0.1)

    def test_palindromic_and_normalized(self):
        for n in (4, 7, 10):
            w = chebyshev_taper(n, -27.0)
            assert_allclose(w, w[::-1], atol=1e-12)
            assert w.max() == 1.0
            assert np.all(w > 0)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            chebyshev_taper(1, -30.0)
        with pytest.raises(ValueError):
            chebyshev_taper(8, 3.0)


class TestPlanarTaper:
    def test_2x2_is_uniform(self):
        assert_allclose(planar_taper(2, 2, -40.0), np.ones((2, 2)))

    def test_rank_one_outer_product(self):
        t = planar_taper(8, 8, -30.0)
        assert np.linalg.matrix_rank(t, tol=1e-10) == 1
        assert t.max() == 1.0

    def test_3x3_matches_linear_taper_product(self):
        lin = chebyshev_taper(3, -20.0)
        assert_allclose(planar_taper(3, 3, -20.0), np.outer(lin, lin), atol=1e-12)

    def test_reflection_symmetry(self):
        t = planar_taper(6, 9, -25.0)
        assert_allclose(t, t[::-1, :], atol=1e-12)
        assert_allclose(t, t[:, ::-1], atol=1e-12)


class TestScanPhases:
    def test_broadside_all_zero(self):
        g = build_geometry(8, 8, 0.5)
        assert np.all(scan_phases(g, 0.0) == 0.0)

    def test_30deg_column_increment(self):
        g = build_geometry(8, 8, 0.5)
        ph = scan_phases(g, np.radians(30.0))
        assert_allclose(np.diff(ph[0]), -np.pi / 2, atol=1e-12)

    def test_45deg_column_increment(self):
        g = build_geometry(8, 8, 0.5)
        ph = scan_phases(g, np.radians(45.0))
        assert_allclose(np.diff(ph[0]), -np.pi / np.sqrt(2), atol=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            scan_phases(build_geometry(2, 2, 0.5), np.radians(100.0))


class TestCompensate:
    def test_uniform_case(self):
        g = build_geometry(4, 4, 0.5)
        target = TargetWeights(gamma=np.ones((4, 4)), phi=np.zeros((4, 4)))
        comp = compensate_amplitudes(target, uniform_excitation(g))
        assert_allclose(comp.beta_norm, 2 / np.pi)

    def test_taper_normalization_peaks_at_center(self):
        gamma = planar_taper(8, 8, -30.0)
        target = TargetWeights(gamma=gamma, phi=np.zeros((8, 8)))
        comp = compensate_amplitudes(target, uniform_excitation(build_geometry(8, 8, 0.5)))
        assert abs(comp.beta_norm.max() - 2 / np.pi) < 1e-15
        assert comp.beta_norm[3, 3] == comp.beta_norm.max()

    def test_feed_amplitude_divides(self):
        amp = np.ones((2, 2))
        amp[0, 1] = 2.0
        target = TargetWeights(gamma=np.ones((2, 2)), phi=np.zeros((2, 2)))
        comp = compensate_amplitudes(target, Excitation(amplitude=amp, phase=np.zeros((2, 2))))
        assert comp.beta[0, 1] == 0.5
        assert comp.beta[0, 0] == 1.0

    def test_zero_feed_names_element(self):
        amp = np.ones((3, 3))
        amp[1, 2] = 0.0
        target = TargetWeights(gamma=np.ones((3, 3)), phi=np.zeros((3, 3)))
        with pytest.raises(ValueError, match=r"\(1, 2\)"):
            compensate_amplitudes(target, Excitation(amplitude=amp, phase=np.zeros((3, 3))))


class TestSynthesizeSchedules:
    def setup_method(self):
        self.g = build_geometry(8, 8, 0.5)
        self.exc = uniform_excitation(self.g)

    def ticks(self, s):
        return round(s / CFG.tick_s)

    def test_broadside_phase_only_all_identical(self):
        ss = synthesize_schedules(self.g, self.exc, -30.0, 0.0, 0.0, "phase-only", CFG)
        for r in range(8):
            for c in range(8):
                s = ss.schedule(r, c)
                assert self.ticks(s.tau_on) == 0
                assert self.ticks(s.tau_off) == 32
                assert self.ticks(s.delay) == 0

    def test_30deg_phase_only_column_delays(self):
        ss = synthesize_schedules(self.g, self.exc, -30.0, np.radians(30.0), 0.0, "phase-only", CFG)
        for r in range(8):
            for c in range(8):
                assert self.ticks(ss.schedule(r, c).delay) == (16 * c) % 64

    def test_phase_only_uniform_first_harmonic_magnitudes(self):
        ss = synthesize_schedules(self.g, self.exc, -30.0, np.radians(15.0), 0.0, "phase-only", CFG)
        mags = np.abs(ss.first_harmonics())
        assert_allclose(mags, 2 / np.pi, atol=1e-12)

    def test_realization_fidelity_pre_quantization(self):
        theta0 = np.radians(30.0)
        ss = synthesize_schedules(self.g, self.exc, -30.0, theta0, 0.0, "amp-phase", CFG, quantize=False)
        alpha = ss.first_harmonics()
        gamma = planar_taper(8, 8, -30.0)
        assert_allclose(np.abs(alpha) / np.abs(alpha).max(), gamma / gamma.max(), atol=1e-9)
        phi = scan_phases(self.g, theta0)
        rel = np.angle(alpha * np.exp(-1j * phi))
        # all elements share one global constant modulo 2*pi
        spread = np.angle(np.exp(1j * (rel - rel[0, 0])))
        assert np.max(np.abs(spread)) < 1e-9

    def test_amp_phase_center_runs_half_duty(self):
        ss = synthesize_schedules(self.g, self.exc, -30.0, 0.0, 0.0, "amp-phase", CFG)
        assert self.ticks(ss.schedule(3, 3).tau_off) == 32
        assert self.ticks(ss.schedule(0, 0).tau_off) < 32

    def test_provenance_recorded(self):
        ss = synthesize_schedules(self.g, self.exc, -25.0, np.radians(15.0), 0.0, "amp-phase", CFG)
        assert ss.provenance["mode"] == "amp-phase"
        assert ss.provenance["scan_theta_deg"] == pytest.approx(15.0, abs=1e-9)
        assert ss.provenance["sll_target_db"] == -25.0
        assert ss.provenance["quantized"] is True

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            synthesize_schedules(self.g, self.exc, -30.0, 0.0, 0.0, "chirp", CFG)

    def test_zero_feed_propagates(self):
        amp = np.ones((8, 8))
        amp[2, 5] = 0.0
        exc = Excitation(amplitude=amp, phase=np.zeros((8, 8)))
        with pytest.raises(ValueError, match=r"\(2, 5\)"):
            synthesize_schedules(self.g, exc, -30.0, 0.0, 0.0, "amp-phase", CFG)

    def test_quantized_schedules_are_tick_aligned(self):
        from stcbeam import is_tick_aligned

        ss = synthesize_schedules(self.g, self.exc, -30.0, np.radians(45.0), 0.0, "amp-phase", CFG)
        for r in range(8):
            for c in range(8):
                assert is_tick_aligned(ss.schedule(r, c), CFG, tol=1e-9)

    @pytest.mark.parametrize("mode", ["phase-only", "amp-phase"])
    @pytest.mark.parametrize("theta_deg", [0.0, 15.0, 30.0, 45.0])
    def test_steering_argmax_within_one_grid_cell(self, mode, theta_deg):
        from stcbeam import AngleGrid, ElementPatternModel, harmonic_pattern

        ss = synthesize_schedules(self.g, self.exc, -30.0, np.radians(theta_deg), 0.0, mode, CFG)
        grid = AngleGrid.principal_cut(0.1)
        pat = harmonic_pattern(
            self.g, self.exc, ss.harmonic_spectrum(1), ElementPatternModel.isotropic(), grid, 1
        )
        peak_deg = grid.theta_deg()[int(np.argmax(pat.magnitude()))]
        assert abs(peak_deg - theta_deg) <= 0.1 + 1e-9
