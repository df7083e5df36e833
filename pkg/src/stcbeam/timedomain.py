"""Time-domain validation and measurement emulation.

Everything here works from sampled waveforms only: harmonics come out of a
DFT, never the closed-form coefficients, so this module can arbitrate the
analytic route. The receive sweep emulates a turntable measurement where a
spectrum analyzer reads one harmonic bin per angle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .array_model import ArrayGeometry, ElementPatternModel, Excitation, element_factor
from .modulation import HarmonicSpectrum, ModulationConfig, waveform_at
from .patterns import AngleGrid
from .synthesis import ScheduleSet


@dataclass(frozen=True)
class BasebandRecord:
    """Per-element unit-magnitude samples over exactly one modulation period,
    taken at sample midpoints."""

    samples: np.ndarray  # complex, (rows, cols, samples_per_period)
    samples_per_period: int
    config: ModulationConfig


def sample_baseband(schedule_set: ScheduleSet, samples_per_period: int) -> BasebandRecord:
    """Sample every element's switching waveform at midpoints of uniform
    subintervals. The count must be a positive multiple of the clock ticks per
    period so piecewise-constant waveforms are captured exactly."""
    ticks = schedule_set.config.ticks_per_period
    if samples_per_period < 1 or samples_per_period % ticks != 0:
        raise ValueError(
            f"samples_per_period must be a positive multiple of {ticks}, "
            f"got {samples_per_period}"
        )
    period = schedule_set.config.period_s
    t = (np.arange(samples_per_period) + 0.5) * (period / samples_per_period)
    out = np.empty((schedule_set.rows, schedule_set.cols, samples_per_period), dtype=complex)
    for r in range(schedule_set.rows):
        for c in range(schedule_set.cols):
            out[r, c, :] = waveform_at(schedule_set.schedule(r, c), t)
    return BasebandRecord(samples=out, samples_per_period=samples_per_period, config=schedule_set.config)


def _dft_kernel(samples_per_period: int, ks: np.ndarray) -> np.ndarray:
    """Midpoint DFT kernel with the zero-order-hold factor that makes the bin
    value the exact Fourier coefficient of a piecewise-constant waveform.

    Each sample stands for a constant subinterval; integrating exp(-j*k*W*t)
    over that subinterval in closed form contributes sin(pi*k/S)/(pi*k/S) on
    top of the midpoint phase, so the corrected DFT equals the true integral.
    """
    s = samples_per_period
    i = np.arange(s)
    kern = np.exp(-2j * np.pi * np.outer(ks, i + 0.5) / s) / s
    return kern * np.sinc(ks / s)[:, None]


def extract_harmonics_dft(record: BasebandRecord, k_max: int) -> HarmonicSpectrum:
    """Harmonic coefficients of every element from the sampled waveforms."""
    s = record.samples_per_period
    if k_max > s // 2 - 1:
        raise ValueError(f"k_max={k_max} exceeds the Nyquist limit {s // 2 - 1}")
    ks = np.arange(-k_max, k_max + 1)
    kern = _dft_kernel(s, ks)
    coeffs = np.einsum("rcs,ks->rck", record.samples, kern)
    return HarmonicSpectrum(k_max=k_max, coefficients=coeffs)


def compare_spectra(analytic: HarmonicSpectrum, oracle: HarmonicSpectrum) -> float:
    """Max absolute coefficient difference over all elements and harmonics."""
    if analytic.k_max != oracle.k_max or analytic.shape != oracle.shape:
        raise ValueError("spectra cover different elements or harmonic ranges")
    return float(np.max(np.abs(analytic.coefficients - oracle.coefficients)))


@dataclass(frozen=True)
class SweepResult:
    """Received complex harmonic value per angle for one harmonic index."""

    grid: AngleGrid
    values: np.ndarray
    harmonic: int
    harmonic_hz: float

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def sweep_measurement(
    schedule_set: ScheduleSet,
    geometry: ArrayGeometry,
    excitation: Excitation,
    model: ElementPatternModel,
    grid: AngleGrid,
    k: int,
    samples_per_period: int | None = None,
) -> SweepResult:
    """Emulated far-field sweep: at each angle, sum the element waveforms with
    their geometric phases and feed weights, then read harmonic bin k of one
    captured period."""
    if not grid.is_cut:
        raise ValueError("sweep_measurement runs on principal-plane cuts")
    cfg = schedule_set.config
    s = samples_per_period or cfg.ticks_per_period
    record = sample_baseband(schedule_set, s)

    u = np.sin(grid.theta)
    feed = excitation.weights()
    # y does not enter on the phi = 0 / pi cut
    geom = np.exp(2j * np.pi * u[:, None, None] * geometry.x)
    weights = (geom * feed).reshape(len(u), -1)

    received = weights @ record.samples.reshape(-1, s)  # (angles, samples)
    kern = _dft_kernel(s, np.array([k]))[0]
    values = received @ kern
    values = element_factor(model, np.abs(grid.theta)) * values
    return SweepResult(grid=grid, values=values, harmonic=k, harmonic_hz=cfg.harmonic_frequency(k))
