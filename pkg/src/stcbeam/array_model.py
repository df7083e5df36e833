"""Aperture geometry, element radiation envelope, feed excitation, and static 1-bit coding."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Cosine-power exponent fit so the element envelope has a 100 deg half-power
# beamwidth: cos(50 deg)**q == 2**-0.5.
HPBW_100DEG_EXPONENT = -0.5 * math.log(2.0) / math.log(math.cos(math.radians(50.0)))


@dataclass(frozen=True)
class ArrayGeometry:
    """Regular planar grid of radiating elements, centered on the origin.

    Positions are in carrier wavelengths. ``x`` runs along columns and ``y``
    along rows, both shaped (rows, cols).
    """

    rows: int
    cols: int
    spacing: float
    x: np.ndarray
    y: np.ndarray

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols


def build_geometry(rows: int, cols: int, spacing: float) -> ArrayGeometry:
    """Build a centered rows x cols grid with the given pitch in wavelengths."""
    if rows < 1 or cols < 1:
        raise ValueError(f"rows and cols must be >= 1, got {rows}x{cols}")
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    xi = (np.arange(cols) - (cols - 1) / 2.0) * spacing
    yi = (np.arange(rows) - (rows - 1) / 2.0) * spacing
    x = np.tile(xi, (rows, 1))
    y = np.tile(yi[:, None], (1, cols))
    x.setflags(write=False)
    y.setflags(write=False)
    return ArrayGeometry(rows=rows, cols=cols, spacing=float(spacing), x=x, y=y)


@dataclass(frozen=True)
class ElementPatternModel:
    """Single-element amplitude envelope cos(theta)**exponent on the forward
    hemisphere, zero behind. ``exponent = 0`` is an isotropic forward element."""

    exponent: float = HPBW_100DEG_EXPONENT
    boresight_gain_db: float = 5.3

    @classmethod
    def isotropic(cls) -> "ElementPatternModel":
        return cls(exponent=0.0, boresight_gain_db=0.0)

    @classmethod
    def from_hpbw(cls, hpbw_deg: float, boresight_gain_db: float = 5.3) -> "ElementPatternModel":
        """Solve the exponent so the -3 dB amplitude width equals ``hpbw_deg``."""
        if not 0.0 < hpbw_deg < 180.0:
            raise ValueError(f"hpbw_deg must be in (0, 180), got {hpbw_deg}")
        half = math.radians(hpbw_deg / 2.0)
        q = -0.5 * math.log(2.0) / math.log(math.cos(half))
        return cls(exponent=q, boresight_gain_db=boresight_gain_db)


def element_factor(model: ElementPatternModel, theta):
    """Element amplitude at polar angle ``theta`` (radians, in [0, pi]).

    Returns a value in [0, 1]; identically 0 in the back hemisphere.
    """
    th = np.asarray(theta, dtype=float)
    if np.any(th < 0.0) or np.any(th > np.pi):
        raise ValueError("theta must lie in [0, pi]")
    c = np.clip(np.cos(np.minimum(th, np.pi / 2)), 0.0, 1.0)
    val = np.where(th <= np.pi / 2, c ** model.exponent, 0.0)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class Excitation:
    """Feed amplitude and phase per element, shaped like the geometry grid."""

    amplitude: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        if self.amplitude.shape != self.phase.shape:
            raise ValueError("amplitude and phase shapes differ")
        if np.any(self.amplitude < 0):
            raise ValueError("amplitudes must be non-negative")

    def weights(self) -> np.ndarray:
        """Complex feed weights a * exp(j*phi)."""
        return self.amplitude * np.exp(1j * self.phase)


def uniform_excitation(geometry: ArrayGeometry) -> Excitation:
    """Ideal equal-split feed: unit amplitude, zero phase everywhere."""
    shape = (geometry.rows, geometry.cols)
    return Excitation(amplitude=np.ones(shape), phase=np.zeros(shape))


@dataclass(frozen=True)
class BinaryCodeMatrix:
    """Static per-element phase states, each exactly 0 or pi."""

    states: np.ndarray

    def __post_init__(self):
        ok = (self.states == 0.0) | (self.states == np.pi)
        if not np.all(ok):
            raise ValueError("every state must be exactly 0 or pi")


def static_code_pattern(geometry: ArrayGeometry, scan_theta: float, scan_phi: float = 0.0) -> BinaryCodeMatrix:
    """1-bit code steering toward (scan_theta, scan_phi).

    The ideal progressive phase -k0*(x*sin(t)*cos(p) + y*sin(t)*sin(p)) is
    wrapped to [-pi, pi) and quantized to the nearer of {0, pi}; boundary
    ties go to pi.
    """
    if abs(scan_theta) > np.pi / 2:
        raise ValueError("scan_theta must lie in [-pi/2, pi/2]")
    st = np.sin(scan_theta)
    ideal = -2.0 * np.pi * (geometry.x * st * np.cos(scan_phi) + geometry.y * st * np.sin(scan_phi))
    wrapped = np.mod(ideal + np.pi, 2.0 * np.pi) - np.pi
    states = np.where(np.abs(wrapped) >= np.pi / 2, np.pi, 0.0)
    return BinaryCodeMatrix(states=states)
