"""Detection models for light with real vacuum fluctuations.

The package asks one question from several angles: if the electromagnetic
vacuum carries real fluctuating energy that detectors cannot distinguish
from signal, what counting statistics follow?  `spectrum` quantifies the
vacuum background itself, `fixed_window` and `first_passage` work out two
detector models living on top of it (threshold suppression of weak signals,
square-root rate corrections, unavoidable dark counts), `coincidence`
derives the pair-counting bound that strains against correlated-beam
experiments, and `fit` confronts the rate law with measured curves.
"""

from .curves import RateCurve, RatePoint
from .noise import NoiseModel, SeedSpec, generator, ou_intensity_path, wiener_increments
from .spectrum import (
    COMPTON_OMEGA,
    CONSTANTS,
    PhysicalConstants,
    SpectrumParams,
    spectral_density,
    spectral_density_thermal,
    spectral_density_zpf,
    thermal_band_energy_density,
    zpf_band_intensity,
)
from .fixed_window import (
    FixedWindowDetector,
    SaturationWarning,
    asymptotic_slope,
    count_probability,
    low_signal_suppression,
    rate_fixed_window,
    window_intensity_pdf,
)
from .first_passage import (
    FirstPassageDetector,
    FirstPassageResult,
    FirstPassageSample,
    NoDetectionError,
    dark_rate,
    expansion_parameter,
    heuristic_detection_time,
    rate_analytic,
    rate_curve,
    rate_series,
    simulate_first_passage,
)
from .coincidence import (
    CoincidenceConfig,
    CoincidenceResult,
    CorrelatedBeamPair,
    InsufficientStatisticsError,
    Verdict,
    coincidence_bound,
    consistency_verdict,
    simulate_coincidences,
)
from .fit import (
    FitResult,
    UnderdeterminedError,
    fit_rate_curve,
    load_rate_csv,
    save_rate_csv,
    slope_change,
)

__version__ = "0.1.0"

__all__ = [
    "COMPTON_OMEGA",
    "CONSTANTS",
    "CoincidenceConfig",
    "CoincidenceResult",
    "CorrelatedBeamPair",
    "FirstPassageDetector",
    "FirstPassageResult",
    "FirstPassageSample",
    "FitResult",
    "FixedWindowDetector",
    "InsufficientStatisticsError",
    "NoDetectionError",
    "NoiseModel",
    "PhysicalConstants",
    "RateCurve",
    "RatePoint",
    "SaturationWarning",
    "SeedSpec",
    "SpectrumParams",
    "UnderdeterminedError",
    "Verdict",
    "asymptotic_slope",
    "coincidence_bound",
    "consistency_verdict",
    "count_probability",
    "dark_rate",
    "expansion_parameter",
    "fit_rate_curve",
    "generator",
    "heuristic_detection_time",
    "load_rate_csv",
    "low_signal_suppression",
    "ou_intensity_path",
    "rate_analytic",
    "rate_curve",
    "rate_fixed_window",
    "rate_series",
    "save_rate_csv",
    "simulate_coincidences",
    "simulate_first_passage",
    "slope_change",
    "spectral_density",
    "spectral_density_thermal",
    "spectral_density_zpf",
    "thermal_band_energy_density",
    "wiener_increments",
    "zpf_band_intensity",
    "__version__",
]
