"""Space-time-coded metasurface beamforming toolkit.

Turns desired low-sidelobe, beam-steered aperture weights into per-element
binary-phase switching schedules, predicts the harmonic far-field patterns
they radiate, and validates every analytic harmonic coefficient against an
independent time-domain DFT."""

from .array_model import (
    HPBW_100DEG_EXPONENT,
    ArrayGeometry,
    BinaryCodeMatrix,
    ElementPatternModel,
    Excitation,
    build_geometry,
    element_factor,
    static_code_pattern,
    uniform_excitation,
)
from .config import MODES, ConfigError, RunConfig, load_config
from .modulation import (
    HarmonicSpectrum,
    ModulationConfig,
    Schedule,
    UnreachableAmplitudeError,
    analytic_spectrum,
    bitmask_to_schedule,
    delay_for_phase,
    duty_for_amplitude,
    first_harmonic,
    harmonic_coefficient,
    harmonic_coefficients,
    is_tick_aligned,
    quantize_schedule,
    schedule_to_bitmask,
    waveform_at,
)
from .patterns import (
    AngleGrid,
    FarFieldPattern,
    directivity,
    harmonic_pattern,
    hpbw,
    lobe_peaks,
    pointing,
    sll,
    static_pattern,
)
from .synthesis import (
    CompensatedWeights,
    ScheduleSet,
    TargetWeights,
    chebyshev_taper,
    compensate_amplitudes,
    planar_taper,
    scan_phases,
    synthesize_schedules,
)
from .timedomain import (
    BasebandRecord,
    SweepResult,
    compare_spectra,
    extract_harmonics_dft,
    sample_baseband,
    sweep_measurement,
)

__version__ = "0.1.0"

__all__ = [
    "HPBW_100DEG_EXPONENT",
    "ArrayGeometry",
    "BinaryCodeMatrix",
    "ElementPatternModel",
    "Excitation",
    "build_geometry",
    "element_factor",
    "static_code_pattern",
    "uniform_excitation",
    "MODES",
    "ConfigError",
    "RunConfig",
    "load_config",
    "HarmonicSpectrum",
    "ModulationConfig",
    "Schedule",
    "UnreachableAmplitudeError",
    "analytic_spectrum",
    "bitmask_to_schedule",
    "delay_for_phase",
    "duty_for_amplitude",
    "first_harmonic",
    "harmonic_coefficient",
    "harmonic_coefficients",
    "is_tick_aligned",
    "quantize_schedule",
    "schedule_to_bitmask",
    "waveform_at",
    "AngleGrid",
    "FarFieldPattern",
    "directivity",
    "harmonic_pattern",
    "hpbw",
    "lobe_peaks",
    "pointing",
    "sll",
    "static_pattern",
    "CompensatedWeights",
    "ScheduleSet",
    "TargetWeights",
    "chebyshev_taper",
    "compensate_amplitudes",
    "planar_taper",
    "scan_phases",
    "synthesize_schedules",
    "BasebandRecord",
    "SweepResult",
    "compare_spectra",
    "extract_harmonics_dft",
    "sample_baseband",
    "sweep_measurement",
    "__version__",
]
