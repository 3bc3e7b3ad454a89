"""Desk-scale numerics for weighted pluripotential theory.

Weighted Fekete points, D-optimal measures, Gram/Bergman quantities,
transfinite diameters, directional Chebyshev constants, and closed-form
Monge-Ampere energy identities, with built-in cross-checks.
"""

__version__ = "0.1.0"

from .basis import MultiIndexBasis, dimension_counts, enumerate_basis
from .domains import AdmissibleWeight, CandidateSet, build_set
from .errors import (
    DegenerateMeasureError,
    InvalidInputError,
    NotConvergedError,
    PluripotError,
    UnsupportedModelError,
)
from .gram import DiscreteMeasure, GramSystem, gram_matrix

__all__ = [
    "MultiIndexBasis",
    "dimension_counts",
    "enumerate_basis",
    "AdmissibleWeight",
    "CandidateSet",
    "build_set",
    "DiscreteMeasure",
    "GramSystem",
    "gram_matrix",
    "PluripotError",
    "InvalidInputError",
    "DegenerateMeasureError",
    "NotConvergedError",
    "UnsupportedModelError",
    "__version__",
]
