"""1-D pulse propagation through a three-level ionic medium.

A pump pulse on the 800 nm channel writes an X-A coherence; a delayed read
pulse converts it through a far-detuned intermediate level into a UV signal
on the X-B channel. The heavy lifting lives in the compiled extension
``mb1d._core``; this package re-exports its public surface.
"""

from ._core import (
    BlochState,
    ConvergenceReport,
    DerivedRates,
    ExpFitResult,
    GridSpec,
    LoadedConfig,
    MediumParams,
    PulseRole,
    PulseSpec,
    RunConfig,
    ScanResult,
    ScanRow,
    SimulationGrid,
    SimulationRecord,
    Spectrum,
    SweepSettings,
    TwoPhotonTerms,
    convergence_check,
    default_tail_start,
    delay_scan,
    derive_rates,
    dump_config,
    envelope_at,
    exp_fit,
    integrated_exit_signal,
    integrated_signal,
    load_config_file,
    parse_config,
    population_scan,
    power_spectrum,
    propagate,
    spectral_asymmetry,
    tail_peak_ratio,
    two_photon_terms,
)

try:
    from importlib.metadata import version as _version

    __version__ = _version("mb1d")
except Exception:  # pragma: no cover - fallback for odd install layouts
    __version__ = "unknown"

__all__ = [
    "BlochState",
    "ConvergenceReport",
    "DerivedRates",
    "ExpFitResult",
    "GridSpec",
    "LoadedConfig",
    "MediumParams",
    "PulseRole",
    "PulseSpec",
    "RunConfig",
    "ScanResult",
    "ScanRow",
    "SimulationGrid",
    "SimulationRecord",
    "Spectrum",
    "SweepSettings",
    "TwoPhotonTerms",
    "convergence_check",
    "default_tail_start",
    "delay_scan",
    "derive_rates",
    "dump_config",
    "envelope_at",
    "exp_fit",
    "integrated_exit_signal",
    "integrated_signal",
    "load_config_file",
    "parse_config",
    "population_scan",
    "power_spectrum",
    "propagate",
    "spectral_asymmetry",
    "tail_peak_ratio",
    "two_photon_terms",
]
