"""Squeezed phonon reservoir of a bichromatically driven quantum dot."""

from ._core import (
    BlochVector,
    ConfigError,
    DriveConfig,
    PhononBathSpec,
    ReservoirRates,
    SpectrumResult,
    SqueezingDescriptor,
    displacement_factor,
    driven_evolution,
    driven_steady_state,
    exact_incoherent_spectrum,
    figure3_dataset,
    figure4_dataset,
    figure5_dataset,
    free_evolution,
    map_to_squeezing,
    numeric_spectrum,
    numeric_steady_state,
    parse_config,
    phonon_rate,
    quantum_threshold,
    reservoir_rates,
    run_subcommand,
    strong_field_spectrum,
    thermal_occupation,
)

__all__ = [
    "BlochVector",
    "ConfigError",
    "DriveConfig",
    "PhononBathSpec",
    "ReservoirRates",
    "SpectrumResult",
    "SqueezingDescriptor",
    "displacement_factor",
    "driven_evolution",
    "driven_steady_state",
    "exact_incoherent_spectrum",
    "figure3_dataset",
    "figure4_dataset",
    "figure5_dataset",
    "free_evolution",
    "map_to_squeezing",
    "numeric_spectrum",
    "numeric_steady_state",
    "parse_config",
    "phonon_rate",
    "quantum_threshold",
    "reservoir_rates",
    "run_subcommand",
    "strong_field_spectrum",
    "thermal_occupation",
]
