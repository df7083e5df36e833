import numpy as np
import pytest
from numpy.testing import assert_allclose

from stcbeam import (
    AngleGrid,
    ElementPatternModel,
    ModulationConfig,
    Schedule,
    ScheduleSet,
    build_geometry,
    compare_spectra,
    extract_harmonics_dft,
    harmonic_pattern,
    sample_baseband,
    sweep_measurement,
    synthesize_schedules,
    uniform_excitation,
)
from stcbeam.modulation import HarmonicSpectrum

CFG = ModulationConfig()
TP = CFG.period_s
ISO = ElementPatternModel.isotropic()


def tick_schedule(ton, toff, u, ticks=64):
    return Schedule(ton * TP / ticks, toff * TP / ticks, u * TP / ticks, TP)


def single_schedule_set(schedule):
    return ScheduleSet(schedules=((schedule,),), config=CFG, provenance={})


def random_set(rng, count, ticks=64):
    row = []
    for _ in range(count):
        a, b = sorted(rng.integers(0, ticks + 1, size=2).tolist())
        row.append(tick_schedule(a, b, int(rng.integers(0, ticks)), ticks))
    return ScheduleSet(schedules=(tuple(row),), config=CFG, provenance={})


class TestSampleBaseband:
    def test_half_duty_ordering(self):
        rec = sample_baseband(single_schedule_set(tick_schedule(0, 32, 0)), 64)
        s = rec.samples[0, 0]
        assert np.all(s[:32] == 1.0) and np.all(s[32:] == -1.0)

    def test_zero_window_is_all_minus_one(self):
        rec = sample_baseband(single_schedule_set(tick_schedule(0, 0, 0)), 64)
        assert np.all(rec.samples == -1.0)

    def test_delay_is_cyclic_rotation(self):
        base = sample_baseband(single_schedule_set(tick_schedule(0, 32, 0)), 64).samples[0, 0]
        rolled = sample_baseband(single_schedule_set(tick_schedule(0, 32, 10)), 64).samples[0, 0]
        assert_allclose(rolled, np.roll(base, 10))

    def test_unit_magnitude(self):
        rng = np.random.default_rng(3)
        rec = sample_baseband(random_set(rng, 20), 128)
        assert_allclose(np.abs(rec.samples), 1.0)

    def test_non_multiple_sample_count_rejected(self):
        with pytest.raises(ValueError):
            sample_baseband(single_schedule_set(tick_schedule(0, 32, 0)), 96)


class TestExtractHarmonics:
    def test_half_duty_first_harmonic(self):
        rec = sample_baseband(single_schedule_set(tick_schedule(0, 32, 0)), 64)
        spectrum = extract_harmonics_dft(rec, 2)
        expected = (2 / np.pi) * np.exp(-1j * np.pi / 2)
        assert abs(spectrum.coefficient(1)[0, 0] - expected) < 1e-12

    def test_half_duty_second_harmonic_vanishes(self):
        rec = sample_baseband(single_schedule_set(tick_schedule(0, 32, 0)), 64)
        spectrum = extract_harmonics_dft(rec, 2)
        assert abs(spectrum.coefficient(2)[0, 0]) < 1e-12

    def test_constant_waveform(self):
        rec = sample_baseband(single_schedule_set(tick_schedule(0, 64, 0)), 64)
        spectrum = extract_harmonics_dft(rec, 5)
        assert spectrum.coefficient(0)[0, 0] == 1.0
        for k in range(1, 6):
            assert abs(spectrum.coefficient(k)[0, 0]) < 1e-15

    def test_nyquist_guard(self):
        rec = sample_baseband(single_schedule_set(tick_schedule(0, 32, 0)), 64)
        extract_harmonics_dft(rec, 31)  # S/2 - 1 is the last admissible index
        with pytest.raises(ValueError):
            extract_harmonics_dft(rec, 32)

    def test_oracle_equivalence_random_schedules(self):
        rng = np.random.default_rng(5)
        ss = random_set(rng, 300)
        analytic = ss.harmonic_spectrum(10)
        oracle = extract_harmonics_dft(sample_baseband(ss, 64), 10)
        assert compare_spectra(analytic, oracle) <= 1e-12

    def test_oversampling_changes_nothing(self):
        rng = np.random.default_rng(6)
        ss = random_set(rng, 50)
        a = extract_harmonics_dft(sample_baseband(ss, 64), 8)
        b = extract_harmonics_dft(sample_baseband(ss, 256), 8)
        assert compare_spectra(a, b) <= 1e-12


class TestCompareSpectra:
    def test_identical_is_zero(self):
        rng = np.random.default_rng(9)
        ss = random_set(rng, 10)
        spectrum = ss.harmonic_spectrum(5)
        assert compare_spectra(spectrum, spectrum) == 0.0

    def test_reports_injected_perturbation(self):
        rng = np.random.default_rng(9)
        spectrum = random_set(rng, 10).harmonic_spectrum(5)
        bumped = spectrum.coefficients.copy()
        bumped[0, 3, 5 + 1] += 1e-3
        assert abs(compare_spectra(spectrum, HarmonicSpectrum(5, bumped)) - 1e-3) < 1e-15

    def test_shape_mismatch_rejected(self):
        rng = np.random.default_rng(9)
        a = random_set(rng, 10).harmonic_spectrum(5)
        b = random_set(rng, 10).harmonic_spectrum(4)
        with pytest.raises(ValueError):
            compare_spectra(a, b)


class TestSweep:
    def setup_method(self):
        self.g = build_geometry(8, 8, 0.5)
        self.exc = uniform_excitation(self.g)
        self.grid = AngleGrid.principal_cut(0.1)

    def test_broadside_sweep_statistics(self):
        ss = synthesize_schedules(self.g, self.exc, -30.0, 0.0, 0.0, "phase-only", CFG)
        swp = sweep_measurement(ss, self.g, self.exc, ISO, self.grid, 1)
        mag = swp.magnitude()
        td = np.degrees(self.grid.theta)
        assert abs(td[np.argmax(mag)]) < 0.1
        # triangle bound: no angle can exceed the sum of element magnitudes
        assert mag.max() <= 64.0 + 1e-9
        assert swp.harmonic_hz == 5.501e9

    @pytest.mark.parametrize("theta_deg,mode", [(0.0, "phase-only"), (30.0, "amp-phase"), (45.0, "amp-phase")])
    def test_route_equivalence(self, theta_deg, mode):
        ss = synthesize_schedules(self.g, self.exc, -30.0, np.radians(theta_deg), 0.0, mode, CFG)
        spectrum = ss.harmonic_spectrum(1)
        pat = harmonic_pattern(self.g, self.exc, spectrum, ISO, self.grid, 1)
        swp = sweep_measurement(ss, self.g, self.exc, ISO, self.grid, 1)
        err = np.max(np.abs(swp.magnitude() - pat.magnitude())) / pat.peak
        assert err <= 1e-9

    def test_route_equivalence_with_element_model(self):
        model = ElementPatternModel()
        ss = synthesize_schedules(self.g, self.exc, -30.0, np.radians(15.0), 0.0, "amp-phase", CFG)
        pat = harmonic_pattern(self.g, self.exc, ss.harmonic_spectrum(1), model, self.grid, 1)
        swp = sweep_measurement(ss, self.g, self.exc, model, self.grid, 1)
        assert np.max(np.abs(swp.magnitude() - pat.magnitude())) / pat.peak <= 1e-9

    def test_global_delay_shift_conserves_harmonic_powers(self):
        # a common timing shift rotates every harmonic's phase, nothing else
        base = synthesize_schedules(self.g, self.exc, -30.0, 0.0, 0.0, "phase-only", CFG)
        shifted_row = []
        for r in range(8):
            row = []
            for c in range(8):
                s = base.schedule(r, c)
                row.append(Schedule(s.tau_on, s.tau_off, (s.delay + 17 * CFG.tick_s) % TP, TP))
            shifted_row.append(tuple(row))
        shifted = ScheduleSet(schedules=tuple(shifted_row), config=CFG, provenance={})
        for k in range(-5, 6):
            a = harmonic_pattern(self.g, self.exc, base.harmonic_spectrum(5), ISO, self.grid, k)
            b = harmonic_pattern(self.g, self.exc, shifted.harmonic_spectrum(5), ISO, self.grid, k)
            assert abs(abs(a.field[900]) - abs(b.field[900])) < 1e-9

    def test_per_element_parseval_is_delay_invariant(self):
        rng = np.random.default_rng(12)
        ss = random_set(rng, 30)
        ks = np.arange(-2000, 2001)
        from stcbeam import harmonic_coefficients

        for c in range(30):
            s = ss.schedule(0, c)
            moved = Schedule(s.tau_on, s.tau_off, (s.delay + 0.123 * TP) % TP, TP)
            p0 = np.sum(np.abs(harmonic_coefficients(s, ks)) ** 2)
            p1 = np.sum(np.abs(harmonic_coefficients(moved, ks)) ** 2)
            assert abs(p0 - p1) < 1e-12

    def test_sweep_requires_cut(self):
        ss = synthesize_schedules(self.g, self.exc, -30.0, 0.0, 0.0, "phase-only", CFG)
        with pytest.raises(ValueError):
            sweep_measurement(ss, self.g, self.exc, ISO, AngleGrid.hemisphere(), 1)

    def test_sweep_sidelobes_score_like_the_pattern(self):
        from stcbeam import FarFieldPattern, sll

        ss = synthesize_schedules(self.g, self.exc, -30.0, np.radians(30.0), 0.0, "amp-phase", CFG)
        swp = sweep_measurement(ss, self.g, self.exc, ISO, self.grid, 1)
        measured = FarFieldPattern(grid=self.grid, field=swp.values, harmonic=1)
        assert sll(measured) <= -23.0
