"""Low-sidelobe steered weight synthesis and schedule generation.

The target aperture weights are a separable Dolph-Chebyshev taper (amplitude)
with progressive steering phases. After compensating the feed excitation, each
element's weight becomes a switching schedule: window length from the
amplitude, delay from the phase, both rounded to the control clock.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import windows

from .array_model import ArrayGeometry, Excitation
from .modulation import (
    ModulationConfig,
    Schedule,
    delay_for_phase,
    duty_for_amplitude,
    first_harmonic,
    analytic_spectrum,
    quantize_schedule,
)

WEIGHTING_MODES = ("phase-only", "amp-phase")


def chebyshev_taper(n: int, sll_db: float) -> np.ndarray:
    """Dolph-Chebyshev amplitude weights with equiripple sidelobes at ``sll_db``.

    Parameters
    ----------
    n : int
        Number of elements (>= 2).
    sll_db : float
        Target sidelobe level in dB relative to the main beam (negative).

    Returns
    -------
    ndarray
        Length-n symmetric weights normalized to max = 1.
    """
    if n < 2:
        raise ValueError(f"need at least 2 elements, got {n}")
    if sll_db >= 0:
        raise ValueError(f"sll_db must be negative, got {sll_db}")
    with warnings.catch_warnings():
        # chebwin warns about noise bandwidth for attenuations < 45 dB, which
        # concerns spectral estimation, not aperture synthesis.
        warnings.simplefilter("ignore", UserWarning)
        w = windows.chebwin(n, at=-sll_db)
    return w / w.max()


def planar_taper(rows: int, cols: int, sll_db: float) -> np.ndarray:
    """Separable outer product of two linear Chebyshev tapers, max = 1."""
    t = np.outer(chebyshev_taper(rows, sll_db), chebyshev_taper(cols, sll_db))
    return t / t.max()


def scan_phases(geometry: ArrayGeometry, theta0: float, phi0: float = 0.0) -> np.ndarray:
    """Progressive phases steering the main lobe to (theta0, phi0), radians."""
    if abs(theta0) > np.pi / 2:
        raise ValueError("theta0 must lie in [-pi/2, pi/2]")
    st = np.sin(theta0)
    return -2.0 * np.pi * (geometry.x * st * np.cos(phi0) + geometry.y * st * np.sin(phi0))


@dataclass(frozen=True)
class TargetWeights:
    """Desired amplitude (gamma) and phase (phi) per element."""

    gamma: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        if self.gamma.shape != self.phi.shape:
            raise ValueError("gamma and phi shapes differ")
        if np.any(self.gamma < 0):
            raise ValueError("gamma must be non-negative")


@dataclass(frozen=True)
class CompensatedWeights:
    """Feed-compensated amplitudes beta = gamma/a and their normalization
    beta_norm, scaled so the largest element runs at the 2/pi maximum."""

    beta: np.ndarray
    beta_norm: np.ndarray


def compensate_amplitudes(target: TargetWeights, excitation: Excitation) -> CompensatedWeights:
    """Divide the target amplitudes by the feed amplitudes and rescale to the
    realizable first-harmonic range [0, 2/pi]."""
    zero = np.argwhere(excitation.amplitude == 0.0)
    if zero.size:
        r, c = zero[0]
        raise ValueError(f"feed amplitude is zero at element ({r}, {c})")
    beta = target.gamma / excitation.amplitude
    peak = beta.max()
    if peak == 0.0:
        return CompensatedWeights(beta=beta, beta_norm=np.zeros_like(beta))
    return CompensatedWeights(beta=beta, beta_norm=beta * (2.0 / np.pi) / peak)


@dataclass(frozen=True)
class ScheduleSet:
    """Per-element schedules plus the shared clocking and a provenance record."""

    schedules: tuple
    config: ModulationConfig
    provenance: dict = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return len(self.schedules)

    @property
    def cols(self) -> int:
        return len(self.schedules[0])

    def schedule(self, r: int, c: int) -> Schedule:
        return self.schedules[r][c]

    def harmonic_spectrum(self, k_max: int):
        return analytic_spectrum(self.schedules, k_max, self.config)

    def first_harmonics(self) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=complex)
        for r in range(self.rows):
            for c in range(self.cols):
                out[r, c] = first_harmonic(self.schedules[r][c], self.config)
        return out


def synthesize_schedules(
    geometry: ArrayGeometry,
    excitation: Excitation,
    sll_db: float,
    theta0: float,
    phi0: float,
    mode: str,
    config: ModulationConfig,
    quantize: bool = True,
) -> ScheduleSet:
    """Produce one switching schedule per element realizing the steered taper
    on the +1st harmonic.

    ``phase-only`` keeps every element at 50% duty (uniform amplitude) and
    weights by delay alone; ``amp-phase`` adds the Chebyshev taper through the
    window length. Delays are solved relative to the largest-amplitude element
    so that element keeps zero delay.
    """
    if mode not in WEIGHTING_MODES:
        raise ValueError(f"mode must be one of {WEIGHTING_MODES}, got {mode!r}")
    if mode == "phase-only":
        gamma = np.ones((geometry.rows, geometry.cols))
    else:
        gamma = planar_taper(geometry.rows, geometry.cols, sll_db)
    target = TargetWeights(gamma=gamma, phi=scan_phases(geometry, theta0, phi0))
    comp = compensate_amplitudes(target, excitation)

    period = config.period_s
    tau = np.empty_like(comp.beta_norm)
    for r in range(geometry.rows):
        for c in range(geometry.cols):
            tau[r, c] = duty_for_amplitude(comp.beta_norm[r, c], config)

    # Phase reference: the first element with maximal beta_norm takes delay 0;
    # everything else is phased relative to it (only differences radiate).
    ref = np.unravel_index(int(np.argmax(comp.beta_norm)), comp.beta_norm.shape)
    w_rate = config.angular_rate
    phase_const = excitation.phase[ref] - w_rate * tau[ref] / 2.0 - target.phi[ref]

    grid = []
    for r in range(geometry.rows):
        row = []
        for c in range(geometry.cols):
            u = delay_for_phase(
                target.phi[r, c] + phase_const,
                tau[r, c],
                excitation.phase[r, c],
                config,
            )
            s = Schedule(tau_on=0.0, tau_off=tau[r, c], delay=u, period=period)
            if quantize:
                s = quantize_schedule(s, config)
            row.append(s)
        grid.append(tuple(row))

    provenance = {
        "mode": mode,
        "scan_theta_deg": float(np.degrees(theta0)),
        "scan_phi_deg": float(np.degrees(phi0)),
        "sll_target_db": float(sll_db),
        "quantized": bool(quantize),
    }
    return ScheduleSet(schedules=tuple(grid), config=config, provenance=provenance)
