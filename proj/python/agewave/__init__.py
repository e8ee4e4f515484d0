"""Age-structured wave and spreading solvers.

Thin wrapper over the compiled extension: build a model, read off its
dispersion constants, solve traveling waves, and measure front speeds.
"""

from ._core import (
    IoError,
    Model,
    NumericalError,
    ValidationError,
    dispersion,
    kpp,
    reference_model,
    spread_speed,
    steady_levels,
    validate,
    wave,
)

__all__ = [
    "IoError",
    "Model",
    "NumericalError",
    "ValidationError",
    "dispersion",
    "kpp",
    "reference_model",
    "spread_speed",
    "steady_levels",
    "validate",
    "wave",
]

__version__ = "0.1.0"
