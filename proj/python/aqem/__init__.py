"""Adaptive quantum-enhanced metrology."""

from ._core import (
    ConfigError,
    DomainError,
    IoError,
    StateExhaustedError,
    __version__,
    cli,
    evaluate,
    exact_sharpness,
    fit_power_law,
    holevo_imprecision,
    input_state,
    probe_state,
    sharpness,
    walk_distribution,
    wigner_d,
    wrap_phase,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "IoError",
    "StateExhaustedError",
    "cli",
    "evaluate",
    "exact_sharpness",
    "fit_power_law",
    "holevo_imprecision",
    "input_state",
    "probe_state",
    "sharpness",
    "walk_distribution",
    "wigner_d",
    "wrap_phase",
]
