"""Pseudospectral laboratory for the generalized derivative NLS u_t = i u_xx + mu |u|^alpha u_x."""

from .errors import (
    ConfigurationError,
    DegenerateInputError,
    GDNLSError,
    NumericalOverflowError,
    ParameterError,
    PicardDivergence,
    PreconditionError,
    ShapeError,
    SingularModeError,
    StepFailure,
    TruncationError,
)
from .spectral import Field, Grid, make_grid
from .profiles import ClassParams, WaveParams, decay_profile, solitary_wave
from .evolution import EquationSpec, FrozenCoefficient, Trajectory, determine_mu_star, evolve
from .picard import XTNormParams, picard_solve

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DegenerateInputError",
    "GDNLSError",
    "NumericalOverflowError",
    "ParameterError",
    "PicardDivergence",
    "PreconditionError",
    "ShapeError",
    "SingularModeError",
    "StepFailure",
    "TruncationError",
    "ClassParams",
    "EquationSpec",
    "Field",
    "FrozenCoefficient",
    "Grid",
    "Trajectory",
    "WaveParams",
    "XTNormParams",
    "__version__",
    "decay_profile",
    "determine_mu_star",
    "evolve",
    "make_grid",
    "picard_solve",
    "solitary_wave",
]
