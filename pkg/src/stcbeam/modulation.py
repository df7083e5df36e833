"""Periodic binary-phase switching math.

A schedule holds the pi-state window (tau_on, tau_off] of a +-1 waveform on
one modulation period plus a cyclic delay of the whole waveform. The exact
Fourier coefficients of that waveform set the amplitude (via the window
length) and phase (via the delay) radiated on each harmonic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class UnreachableAmplitudeError(ValueError):
    """Requested first-harmonic magnitude exceeds the switching-waveform maximum 2/pi."""


@dataclass(frozen=True)
class ModulationConfig:
    """Carrier/modulation/clock rates. The clock must tick an integer number
    of times per modulation period."""

    carrier_hz: float = 5.5e9
    modulation_hz: float = 1.0e6
    clock_hz: float = 64.0e6

    def __post_init__(self):
        if self.modulation_hz <= 0 or self.clock_hz <= 0 or self.carrier_hz <= 0:
            raise ValueError("frequencies must be positive")
        ratio = self.clock_hz / self.modulation_hz
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError(
                f"clock_hz must be a positive integer multiple of modulation_hz "
                f"(got ratio {ratio})"
            )

    @property
    def period_s(self) -> float:
        return 1.0 / self.modulation_hz

    @property
    def angular_rate(self) -> float:
        """2*pi / period, rad/s."""
        return 2.0 * np.pi * self.modulation_hz

    @property
    def ticks_per_period(self) -> int:
        return int(round(self.clock_hz / self.modulation_hz))

    @property
    def tick_s(self) -> float:
        return self.period_s / self.ticks_per_period

    @property
    def delay_phase_step(self) -> float:
        """Smallest first-harmonic phase step a one-tick delay change makes."""
        return 2.0 * np.pi / self.ticks_per_period

    def harmonic_frequency(self, k: int) -> float:
        """Radiated frequency of harmonic k: carrier + k * modulation rate."""
        return self.carrier_hz + k * self.modulation_hz


@dataclass(frozen=True)
class Schedule:
    """One element's switching law on a period: pi state on (tau_on, tau_off],
    0 state elsewhere, the whole waveform cyclically delayed by ``delay``.
    All times in seconds."""

    tau_on: float
    tau_off: float
    delay: float
    period: float

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")
        if not (0.0 <= self.tau_on <= self.tau_off <= self.period):
            raise ValueError(
                f"need 0 <= tau_on <= tau_off <= period, got "
                f"({self.tau_on}, {self.tau_off}, {self.period})"
            )
        if not (0.0 <= self.delay < self.period):
            raise ValueError(f"delay must lie in [0, period), got {self.delay}")

    @property
    def duty(self) -> float:
        """Fraction of the period spent in the pi state."""
        return (self.tau_off - self.tau_on) / self.period


def waveform_at(schedule: Schedule, t):
    """Waveform value (+1 for pi state, -1 for 0 state) at time t; periodic."""
    m = np.mod(np.asarray(t, dtype=float) - schedule.delay, schedule.period)
    # t on the period boundary represents the end of the period, not the start
    m = np.where(m == 0.0, schedule.period, m)
    on = (m > schedule.tau_on) & (m <= schedule.tau_off)
    out = np.where(on, 1.0, -1.0)
    return float(out) if out.ndim == 0 else out


def _check_config(schedule: Schedule, config: ModulationConfig | None):
    if config is not None and abs(schedule.period - config.period_s) > 1e-12 * config.period_s:
        raise ValueError("schedule period does not match the modulation config")


def harmonic_coefficient(schedule: Schedule, k: int, config: ModulationConfig | None = None) -> complex:
    """Exact Fourier coefficient of the delayed waveform at harmonic k.

    For k != 0:
        alpha_k = j/(pi k) * (e^{-j k W tau_off} - e^{-j k W tau_on}) * e^{-j k W u}
    with W = 2*pi/period; for k = 0 it is 2*duty - 1.
    """
    _check_config(schedule, config)
    if k == 0:
        return complex(2.0 * schedule.duty - 1.0)
    x_off = schedule.tau_off / schedule.period
    x_on = schedule.tau_on / schedule.period
    x_u = schedule.delay / schedule.period
    win = np.exp(-2j * np.pi * k * x_off) - np.exp(-2j * np.pi * k * x_on)
    return complex((1j / (np.pi * k)) * win * np.exp(-2j * np.pi * k * x_u))


def harmonic_coefficients(schedule: Schedule, ks, config: ModulationConfig | None = None) -> np.ndarray:
    """Vectorized ``harmonic_coefficient`` over an integer array of harmonics."""
    _check_config(schedule, config)
    ks = np.asarray(ks, dtype=int)
    x_off = schedule.tau_off / schedule.period
    x_on = schedule.tau_on / schedule.period
    x_u = schedule.delay / schedule.period
    with np.errstate(divide="ignore", invalid="ignore"):
        win = np.exp(-2j * np.pi * ks * x_off) - np.exp(-2j * np.pi * ks * x_on)
        out = (1j / (np.pi * ks)) * win * np.exp(-2j * np.pi * ks * x_u)
    out = np.where(ks == 0, 2.0 * schedule.duty - 1.0, out)
    return out


def first_harmonic(schedule: Schedule, config: ModulationConfig | None = None) -> complex:
    """Coefficient of the +1st harmonic, the one carrying the beamformed weight."""
    return harmonic_coefficient(schedule, 1, config)


def duty_for_amplitude(beta_norm: float, config: ModulationConfig) -> float:
    """Window length tau (seconds, with tau_on = 0) whose first harmonic has
    magnitude ``beta_norm``. Only magnitudes up to 2/pi are realizable."""
    limit = 2.0 / np.pi
    if beta_norm < 0 or beta_norm > limit * (1.0 + 1e-12):
        raise UnreachableAmplitudeError(
            f"first-harmonic magnitude {beta_norm} is outside [0, 2/pi]"
        )
    arg = min(beta_norm * (np.pi / 2.0), 1.0)
    return math.asin(arg) / np.pi * config.period_s


def delay_for_phase(desired_phase: float, tau: float, initial_phase: float, config: ModulationConfig) -> float:
    """Delay u in [0, period) making the +1st-harmonic total phase equal
    ``desired_phase``.

    The modulation contributes -W*u - W*tau/2 on top of the element's feed
    phase, so u solves  -W*u - W*tau/2 + initial_phase = desired_phase (mod 2*pi).
    """
    period = config.period_s
    frac = ((initial_phase - desired_phase) / (2.0 * np.pi) - tau / (2.0 * period)) % 1.0
    if frac >= 1.0:  # (-eps % 1.0) rounds to 1.0 in floating point
        frac = 0.0
    return frac * period


def quantize_schedule(schedule: Schedule, config: ModulationConfig) -> Schedule:
    """Round tau_on, tau_off and delay to the nearest clock tick (half-tick
    ties round up). The delay wraps modulo the period."""
    _check_config(schedule, config)
    n = config.ticks_per_period
    if n < 2:
        raise ValueError("need at least 2 ticks per period to quantize")
    period = schedule.period

    def to_ticks(x: float) -> int:
        return int(math.floor(x / period * n + 0.5))

    ton = to_ticks(schedule.tau_on)
    toff = min(to_ticks(schedule.tau_off), n)
    ton = min(ton, toff)
    ud = to_ticks(schedule.delay) % n
    return Schedule(
        tau_on=ton * period / n,
        tau_off=toff * period / n,
        delay=ud * period / n,
        period=period,
    )


def is_tick_aligned(schedule: Schedule, config: ModulationConfig, tol: float = 1e-9) -> bool:
    """True when all switching instants sit on clock ticks (within ``tol`` ticks)."""
    n = config.ticks_per_period
    for x in (schedule.tau_on, schedule.tau_off, schedule.delay):
        ticks = x / schedule.period * n
        if abs(ticks - round(ticks)) > tol:
            return False
    return True


def schedule_to_bitmask(schedule: Schedule, config: ModulationConfig) -> int:
    """Pack the waveform into an integer, bit i = 1 iff the waveform is +1 at
    the midpoint of tick i (bit 0 = first tick after t = 0)."""
    _check_config(schedule, config)
    if not is_tick_aligned(schedule, config):
        raise ValueError("schedule is not tick-quantized")
    n = config.ticks_per_period
    t = (np.arange(n) + 0.5) * (schedule.period / n)
    on = waveform_at(schedule, t) > 0
    mask = 0
    for i in np.nonzero(on)[0]:
        mask |= 1 << int(i)
    return mask


def bitmask_to_schedule(mask: int, config: ModulationConfig) -> Schedule:
    """Recover a schedule from a tick bitmask.

    The mask must be a single cyclic run of ones (one pi window per period);
    the result uses tau_on = 0 with the run start expressed as the delay,
    which reproduces the same waveform and hence the same harmonics.
    """
    n = config.ticks_per_period
    period = config.period_s
    if mask < 0 or mask >> n:
        raise ValueError(f"bitmask does not fit in {n} ticks")
    bits = [(mask >> i) & 1 for i in range(n)]
    ones = sum(bits)
    if ones == 0:
        return Schedule(0.0, 0.0, 0.0, period)
    if ones == n:
        return Schedule(0.0, period, 0.0, period)
    starts = [i for i in range(n) if bits[i] == 1 and bits[(i - 1) % n] == 0]
    if len(starts) != 1:
        raise ValueError("bitmask is not a single cyclic on-window")
    s = starts[0]
    return Schedule(
        tau_on=0.0,
        tau_off=ones * period / n,
        delay=s * period / n,
        period=period,
    )


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Per-element complex coefficients for harmonics -k_max..+k_max.

    ``coefficients`` is shaped (rows, cols, 2*k_max + 1); index k + k_max
    holds harmonic k.
    """

    k_max: int
    coefficients: np.ndarray

    def __post_init__(self):
        if self.coefficients.ndim != 3 or self.coefficients.shape[2] != 2 * self.k_max + 1:
            raise ValueError("coefficients must be (rows, cols, 2*k_max+1)")

    @property
    def shape(self):
        return self.coefficients.shape[:2]

    def coefficient(self, k: int) -> np.ndarray:
        if abs(k) > self.k_max:
            raise ValueError(f"harmonic {k} not covered (k_max={self.k_max})")
        return self.coefficients[:, :, k + self.k_max]


def analytic_spectrum(schedule_grid, k_max: int, config: ModulationConfig | None = None) -> HarmonicSpectrum:
    """Exact spectrum of a (rows, cols) nested sequence of schedules."""
    ks = np.arange(-k_max, k_max + 1)
    rows = len(schedule_grid)
    cols = len(schedule_grid[0])
    coeffs = np.empty((rows, cols, 2 * k_max + 1), dtype=complex)
    for r in range(rows):
        for c in range(cols):
            coeffs[r, c, :] = harmonic_coefficients(schedule_grid[r][c], ks, config)
    return HarmonicSpectrum(k_max=k_max, coefficients=coeffs)
