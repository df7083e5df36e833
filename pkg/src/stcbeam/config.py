"""Run configuration: defaults, JSON file loading, and flag overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

import numpy as np

from .array_model import ArrayGeometry, ElementPatternModel, Excitation, build_geometry, uniform_excitation
from .modulation import ModulationConfig
from .patterns import AngleGrid

MODES = ("static", "phase-only", "amp-phase")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    """Defaults reproduce the 8x8 half-wavelength aperture clocked at 64 ticks
    per 1 us modulation period on a 5.5 GHz carrier.

    ``element_q`` is the cosine-power exponent of the element envelope used
    when scoring patterns. The default 0 scores at array-factor level; set
    ~0.784 for the fitted 100-degree-beamwidth element."""

    rows: int = 8
    cols: int = 8
    spacing_wavelengths: float = 0.5
    carrier_hz: float = 5.5e9
    modulation_hz: float = 1.0e6
    clock_hz: float = 64.0e6
    element_q: float = 0.0
    theta_deg: float = 0.0
    phi_deg: float = 0.0
    sll_db: float = -30.0
    mode: str = "phase-only"
    harmonic: int = 1
    cut_step_deg: float = 0.1
    hemisphere_theta_step_deg: float = 1.0
    hemisphere_phi_step_deg: float = 2.0
    out_dir: str = "out"
    seed: int = 1
    verify_schedules: int = 1000
    verify_k_max: int = 10

    def validate(self) -> "RunConfig":
        if self.rows < 1 or self.cols < 1:
            raise ConfigError(f"rows/cols must be >= 1, got {self.rows}x{self.cols}")
        if self.spacing_wavelengths <= 0:
            raise ConfigError(f"spacing_wavelengths must be positive, got {self.spacing_wavelengths}")
        for name in ("carrier_hz", "modulation_hz", "clock_hz"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        ratio = self.clock_hz / self.modulation_hz
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigError(
                f"clock_hz must be an integer multiple of modulation_hz "
                f"(clock_hz/modulation_hz = {ratio})"
            )
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if abs(self.theta_deg) > 90.0:
            raise ConfigError(f"theta_deg must lie in [-90, 90], got {self.theta_deg}")
        if self.sll_db >= 0:
            raise ConfigError(f"sll_db must be negative, got {self.sll_db}")
        if self.element_q < 0:
            raise ConfigError(f"element_q must be non-negative, got {self.element_q}")
        if not 0 < self.cut_step_deg <= 0.25:
            raise ConfigError(f"cut_step_deg must lie in (0, 0.25], got {self.cut_step_deg}")
        if self.verify_schedules < 0:
            raise ConfigError("verify_schedules must be non-negative")
        if self.verify_k_max < 1:
            raise ConfigError("verify_k_max must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        return self

    # assembled domain objects -------------------------------------------------

    def geometry(self) -> ArrayGeometry:
        return build_geometry(self.rows, self.cols, self.spacing_wavelengths)

    def excitation(self) -> Excitation:
        return uniform_excitation(self.geometry())

    def element_model(self) -> ElementPatternModel:
        return ElementPatternModel(exponent=self.element_q, boresight_gain_db=0.0)

    def modulation_config(self) -> ModulationConfig:
        return ModulationConfig(
            carrier_hz=self.carrier_hz,
            modulation_hz=self.modulation_hz,
            clock_hz=self.clock_hz,
        )

    def cut_grid(self) -> AngleGrid:
        return AngleGrid.principal_cut(self.cut_step_deg)

    def hemisphere_grid(self) -> AngleGrid:
        return AngleGrid.hemisphere(self.hemisphere_theta_step_deg, self.hemisphere_phi_step_deg)

    def scan_theta(self) -> float:
        return float(np.radians(self.theta_deg))

    def scan_phi(self) -> float:
        return float(np.radians(self.phi_deg))


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, value):
    if name not in _FIELD_TYPES:
        raise ConfigError(f"unknown config field {name!r}")
    want = _FIELD_TYPES[name]
    try:
        if want == "int":
            if isinstance(value, float) and value != int(value):
                raise ValueError
            return int(value)
        if want == "float":
            return float(value)
        if want == "str":
            if not isinstance(value, str):
                raise ValueError
            return value
    except (TypeError, ValueError):
        raise ConfigError(f"config field {name!r} has invalid value {value!r}") from None
    return value


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig: defaults, then JSON file fields, then overrides."""
    cfg = RunConfig()
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for name, value in data.items():
            setattr(cfg, name, _coerce(name, value))
    for name, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, name, _coerce(name, value))
    return cfg.validate()
