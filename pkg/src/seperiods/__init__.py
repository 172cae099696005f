"""Certified period matrices and Abel-Jacobi maps of superelliptic curves.

Everything is computed in ball arithmetic: each published value carries a
radius that bounds every source of error (root isolation, quadrature
truncation and discretization, rounding). The pipeline retries with more
guard bits until the requested accuracy is certified or the retry budget
runs out.
"""

from .abeljacobi import AJData, AJResult, Divisor, abel_jacobi, aj_finite, aj_infinite, aj_ramification
from .curve import Curve, curve_new, finite_point, infinite_point, ramification_point
from .errors import (
    InvalidInput,
    PrecisionExhausted,
    RetryablePrecisionError,
    SeperiodsError,
)
from .homology import homology_data
from .periods import period_data
from .pipeline import Pipeline, build, run
from .precision import Precision, bits_from_digits, digits_from_bits

__version__ = "0.1.0"

__all__ = [
    "AJData",
    "AJResult",
    "Curve",
    "Divisor",
    "InvalidInput",
    "Pipeline",
    "Precision",
    "PrecisionExhausted",
    "RetryablePrecisionError",
    "SeperiodsError",
    "abel_jacobi",
    "aj_finite",
    "aj_infinite",
    "aj_ramification",
    "bits_from_digits",
    "build",
    "curve_new",
    "digits_from_bits",
    "finite_point",
    "homology_data",
    "infinite_point",
    "period_data",
    "ramification_point",
    "run",
    "__version__",
]
