"""Coherently pumped quantum heat engine and its pump-probe signal."""

from .errors import (
    BeyondHorizon,
    ConfigError,
    DegenerateSteadyState,
    InvalidParams,
    LowTemperatureRegime,
    OscillatoryRegime,
    QHEError,
    ResonanceRequired,
    SingularCoupling,
    StiffnessFailure,
)
from .kernels import BACKEND
from .params import DensityState, ModelParams, fig2_params

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BeyondHorizon",
    "ConfigError",
    "DegenerateSteadyState",
    "DensityState",
    "InvalidParams",
    "LowTemperatureRegime",
    "ModelParams",
    "OscillatoryRegime",
    "QHEError",
    "ResonanceRequired",
    "SingularCoupling",
    "StiffnessFailure",
    "__version__",
    "fig2_params",
]
