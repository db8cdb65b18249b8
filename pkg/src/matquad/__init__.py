"""Orthonormal matrix polynomials, matrix interpolation and Gaussian
quadrature for matrix weight functions."""

from .errors import MatquadError
from .interp import (
    InterpolationProblem,
    interpolate_general,
    lagrange_cardinals,
    lagrange_orthonormal,
    lagrange_via_V,
)
from .matpoly import JordanPair, MatrixPolynomial
from .orthopoly import (
    Recurrence,
    WeightSpec,
    builtin_weight,
    inner_product,
    moment,
    mixed_chebyshev_weight,
    stieltjes_recurrence,
)
from .quad import QuadratureRule, apply, degree_of_precision, gauss_rule, rule_for_weight
from .rootfind import SpectralData, zeros_and_rootvectors

__version__ = "0.1.0"

__all__ = [
    "InterpolationProblem",
    "JordanPair",
    "MatquadError",
    "MatrixPolynomial",
    "QuadratureRule",
    "Recurrence",
    "SpectralData",
    "WeightSpec",
    "apply",
    "builtin_weight",
    "degree_of_precision",
    "gauss_rule",
    "inner_product",
    "interpolate_general",
    "lagrange_cardinals",
    "lagrange_orthonormal",
    "lagrange_via_V",
    "moment",
    "mixed_chebyshev_weight",
    "rule_for_weight",
    "stieltjes_recurrence",
    "zeros_and_rootvectors",
]
