"""Far-field patterns from aperture states and their beam metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .array_model import ArrayGeometry, BinaryCodeMatrix, ElementPatternModel, Excitation, element_factor
from .modulation import HarmonicSpectrum

MAX_CUT_STEP_DEG = 0.25
_DB_FLOOR = 1e-15


@dataclass(frozen=True)
class AngleGrid:
    """Evaluation angles: a signed principal-plane cut (phi is None) or a
    full hemisphere (theta x phi). Radians, strictly increasing."""

    theta: np.ndarray
    phi: np.ndarray | None = None

    def __post_init__(self):
        if np.any(np.diff(self.theta) <= 0):
            raise ValueError("theta samples must be strictly increasing")
        if self.phi is None:
            if self.theta[0] > -np.pi / 2 + 1e-12 or self.theta[-1] < np.pi / 2 - 1e-12:
                raise ValueError("cut grids must cover [-90, +90] degrees")
            step = np.degrees(np.max(np.diff(self.theta)))
            if step > MAX_CUT_STEP_DEG + 1e-9:
                raise ValueError(f"cut step must be <= {MAX_CUT_STEP_DEG} deg, got {step:.4g}")
        else:
            if np.any(np.diff(self.phi) <= 0):
                raise ValueError("phi samples must be strictly increasing")
            if self.theta[0] < 0 or self.theta[-1] > np.pi / 2 + 1e-12:
                raise ValueError("hemisphere theta must lie in [0, pi/2]")
            if self.phi[0] < 0 or self.phi[-1] >= 2 * np.pi:
                raise ValueError("phi must lie in [0, 2*pi)")

    @property
    def is_cut(self) -> bool:
        return self.phi is None

    @classmethod
    def principal_cut(cls, step_deg: float = 0.1) -> "AngleGrid":
        """H-plane cut: signed theta from -90 to +90 degrees."""
        n = int(round(180.0 / step_deg))
        return cls(theta=np.radians(np.linspace(-90.0, 90.0, n + 1)))

    @classmethod
    def hemisphere(cls, theta_step_deg: float = 1.0, phi_step_deg: float = 2.0) -> "AngleGrid":
        nt = int(round(90.0 / theta_step_deg))
        theta = np.radians(np.linspace(0.0, 90.0, nt + 1))
        phi = np.radians(np.arange(0.0, 360.0, phi_step_deg))
        return cls(theta=theta, phi=phi)

    def theta_deg(self) -> np.ndarray:
        return np.degrees(self.theta)


@dataclass(frozen=True)
class FarFieldPattern:
    """Complex field over an angle grid for one harmonic, peak-normalized on
    demand."""

    grid: AngleGrid
    field: np.ndarray
    harmonic: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.field)))

    def magnitude(self) -> np.ndarray:
        return np.abs(self.field)

    def power_db(self) -> np.ndarray:
        """Normalized power, 0 dB at the peak, floored at -300 dB."""
        mag = self.magnitude()
        peak = self.peak
        if peak == 0.0:
            raise ValueError("pattern is identically zero")
        return 20.0 * np.log10(np.maximum(mag / peak, _DB_FLOOR))


def _complex_weights(excitation: Excitation, per_element: np.ndarray) -> np.ndarray:
    return excitation.weights() * per_element


def _field_on_grid(geometry: ArrayGeometry, weights: np.ndarray, model: ElementPatternModel, grid: AngleGrid) -> np.ndarray:
    if grid.is_cut:
        # signed theta on the phi = 0 / pi plane: y contributes nothing
        u = np.sin(grid.theta)
        col_w = weights.sum(axis=0)
        f = np.exp(2j * np.pi * np.outer(u, geometry.x[0])) @ col_w
        return element_factor(model, np.abs(grid.theta)) * f
    th = grid.theta[:, None]
    uu = np.sin(th) * np.cos(grid.phi)[None, :]
    vv = np.sin(th) * np.sin(grid.phi)[None, :]
    xf = geometry.x.ravel()
    yf = geometry.y.ravel()
    wf = weights.ravel()
    phases = np.exp(2j * np.pi * (uu[..., None] * xf + vv[..., None] * yf))
    f = phases @ wf
    return element_factor(model, grid.theta)[:, None] * f


def harmonic_pattern(
    geometry: ArrayGeometry,
    excitation: Excitation,
    spectrum: HarmonicSpectrum,
    model: ElementPatternModel,
    grid: AngleGrid,
    k: int,
) -> FarFieldPattern:
    """Far field of harmonic k: element envelope times the weighted array sum,
    with per-element weights a*exp(j*phi)*alpha_k."""
    if abs(k) > spectrum.k_max:
        raise ValueError(f"spectrum does not cover harmonic {k} (k_max={spectrum.k_max})")
    if spectrum.shape != excitation.amplitude.shape:
        raise ValueError("spectrum and excitation shapes differ")
    w = _complex_weights(excitation, spectrum.coefficient(k))
    return FarFieldPattern(grid=grid, field=_field_on_grid(geometry, w, model, grid), harmonic=k)


def static_pattern(
    geometry: ArrayGeometry,
    excitation: Excitation,
    code: BinaryCodeMatrix,
    model: ElementPatternModel,
    grid: AngleGrid,
) -> FarFieldPattern:
    """Unmodulated carrier pattern of a static 1-bit code."""
    w = _complex_weights(excitation, np.exp(1j * code.states))
    return FarFieldPattern(grid=grid, field=_field_on_grid(geometry, w, model, grid), harmonic=0)


def _require_cut(pattern: FarFieldPattern, what: str):
    if not pattern.grid.is_cut:
        raise ValueError(f"{what} is defined on principal-plane cuts")


def _walk_to_min(p: np.ndarray, start: int, step: int, aliased: bool):
    """First local minimum from ``start`` going in ``step`` direction.

    On aliased grids (pattern value repeats at both cut edges, as it does for
    half-wavelength spacing where the visible range spans one full grating
    period) the walk continues through the edge; otherwise it returns None
    when it runs off the grid while still descending.
    """
    n = len(p)
    m = n - 1 if aliased else n
    j = start % m if aliased else start
    for _ in range(m):
        nxt = j + step
        if aliased:
            nxt %= m
        elif nxt < 0 or nxt >= n:
            return None
        if p[nxt] >= p[j]:
            return j
        j = nxt
    return None


def sll(pattern: FarFieldPattern, main_lobe_exclusion_deg: float | None = None, guard_deg: float = 2.0) -> float:
    """Highest lobe outside the main lobe, in dB below the peak.

    The main lobe is bounded by the first local minima around the peak plus a
    guard; ``main_lobe_exclusion_deg`` is the fallback half-width when a
    minimum cannot be found (filled nulls, monotone patterns).
    """
    _require_cut(pattern, "sll")
    p = pattern.magnitude()
    ang = pattern.grid.theta_deg()
    peak_idx = int(np.argmax(p))
    peak = p[peak_idx]
    if peak == 0.0:
        raise ValueError("pattern is identically zero")
    aliased = abs(p[0] - p[-1]) <= 1e-9 * peak

    left = _walk_to_min(p, peak_idx, -1, aliased)
    right = _walk_to_min(p, peak_idx, +1, aliased)

    span = ang[-1] - ang[0]
    if aliased:
        if left is None or right is None:
            if main_lobe_exclusion_deg is None:
                raise ValueError("no sidelobe structure outside the main lobe")
            lo = ang[peak_idx] - main_lobe_exclusion_deg
            arc = 2.0 * main_lobe_exclusion_deg
        else:
            # rightward arc from the left bound through the peak to the right
            # bound (the cut edges alias, so the arc may pass through them)
            core = (ang[right] - ang[left]) % span
            if left == right:
                core = span  # walks met at the antipode: one lobe fills the circle
            lo = ang[left] - guard_deg
            arc = core + 2.0 * guard_deg
        if arc >= span:
            raise ValueError("no samples outside the main-lobe exclusion")
        inside = ((ang - lo) % span) <= arc
    else:
        if left is None:
            lo = ang[peak_idx] - main_lobe_exclusion_deg if main_lobe_exclusion_deg is not None else ang[0]
        else:
            lo = ang[left] - guard_deg
        if right is None:
            hi = ang[peak_idx] + main_lobe_exclusion_deg if main_lobe_exclusion_deg is not None else ang[-1]
        else:
            hi = ang[right] + guard_deg
        if left is None and right is None and main_lobe_exclusion_deg is None:
            raise ValueError("no sidelobe structure outside the main lobe")
        inside = (ang >= lo) & (ang <= hi)

    outside = ~inside
    if not np.any(outside):
        raise ValueError("no samples outside the main-lobe exclusion")
    return float(20.0 * np.log10(np.max(p[outside]) / peak))


def _refine_peak(ang: np.ndarray, db: np.ndarray, i: int) -> float:
    if i == 0 or i == len(db) - 1:
        return float(ang[i])
    y0, y1, y2 = db[i - 1], db[i], db[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom >= 0:
        return float(ang[i])
    delta = 0.5 * (y0 - y2) / denom
    delta = float(np.clip(delta, -1.0, 1.0))
    step = 0.5 * (ang[i + 1] - ang[i - 1])
    return float(ang[i] + delta * step)


def pointing(pattern: FarFieldPattern) -> float:
    """Main-lobe peak angle in degrees, parabola-refined over three samples."""
    _require_cut(pattern, "pointing")
    db = pattern.power_db()
    i = int(np.argmax(db))
    return _refine_peak(pattern.grid.theta_deg(), db, i)


def lobe_peaks(pattern: FarFieldPattern, min_level_db: float = -40.0):
    """Local pattern maxima at or above ``min_level_db``, as (angle_deg,
    level_db) sorted by level, strongest first."""
    _require_cut(pattern, "lobe_peaks")
    db = pattern.power_db()
    ang = pattern.grid.theta_deg()
    out = []
    for j in range(1, len(db) - 1):
        if db[j] > db[j - 1] and db[j] > db[j + 1] and db[j] >= min_level_db:
            out.append((_refine_peak(ang, db, j), float(db[j])))
    out.sort(key=lambda t: t[1], reverse=True)
    return out


def hpbw(pattern: FarFieldPattern) -> float:
    """Half-power beamwidth of the main lobe in degrees, with linear
    interpolation between grid samples."""
    _require_cut(pattern, "hpbw")
    db = pattern.power_db()
    ang = pattern.grid.theta_deg()
    i = int(np.argmax(db))
    target = db[i] - 3.0

    def cross(direction: int) -> float:
        j = i
        while 0 <= j + direction < len(db):
            j += direction
            if db[j] <= target:
                frac = (db[j - direction] - target) / (db[j - direction] - db[j])
                return float(ang[j - direction] + frac * (ang[j] - ang[j - direction]))
        raise ValueError("main lobe has no -3 dB crossing before the grid edge")

    return cross(+1) - cross(-1)


def directivity(pattern: FarFieldPattern) -> float:
    """Peak directivity in dBi from trapezoidal quadrature over the hemisphere."""
    if pattern.grid.is_cut:
        raise ValueError("directivity needs a full hemisphere grid")
    power = np.abs(pattern.field) ** 2
    theta = pattern.grid.theta
    phi = pattern.grid.phi
    # close the phi ring so the trapezoid rule sees the full period
    power_w = np.concatenate([power, power[:, :1]], axis=1)
    phi_w = np.concatenate([phi, [phi[0] + 2.0 * np.pi]])
    inner = np.trapezoid(power_w * np.sin(theta)[:, None], theta, axis=0)
    total = np.trapezoid(inner, phi_w)
    if total <= 0.0:
        raise ValueError("pattern carries no power")
    return float(10.0 * np.log10(4.0 * np.pi * power.max() / total))
