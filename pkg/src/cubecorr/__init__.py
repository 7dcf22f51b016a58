"""Fourier analysis and correlation inequalities on the Boolean hypercube."""

__version__ = "0.1.0"

from .core import (
    CubeError,
    CubeFunction,
    DimensionMismatch,
    Spectrum,
    covariance,
    fourier_transform,
    inner_product,
    inverse_transform,
    level_weight_cross,
    lp_norm,
    make_function,
)
from .inequalities import InequalityReport, verify
from .structure import analyze, classify_modularity, influences, is_increasing

__all__ = [
    "__version__",
    "CubeError",
    "CubeFunction",
    "DimensionMismatch",
    "InequalityReport",
    "Spectrum",
    "analyze",
    "classify_modularity",
    "covariance",
    "fourier_transform",
    "influences",
    "inner_product",
    "inverse_transform",
    "is_increasing",
    "level_weight_cross",
    "lp_norm",
    "make_function",
    "verify",
]
