"""Bias, analytic rank, Gowers norms, partition-rank certificates and
singular-locus point counts for polynomials over finite fields."""

from .errors import StrengthLabError
from .expsum import (
    CyclotomicSum,
    FiberDistribution,
    analytic_rank,
    bias,
    char_sum_exact,
    gowers_norm,
    joint_distribution,
)
from .family import PolyFamily, equidistribution_check, family_min_arank, search_shifts
from .gf import FieldElement, FieldParams, field_create
from .poly import Polynomial, Tensor, multilinearize, parse
from .rank import PartitionCertificate, prank_upper_search, verify_certificate
from .variety import codim_singular, count_points, singular_points

__version__ = "0.1.0"

__all__ = [
    "CyclotomicSum", "FiberDistribution", "FieldElement", "FieldParams", "PartitionCertificate",
    "PolyFamily", "Polynomial", "StrengthLabError", "Tensor", "analytic_rank", "bias",
    "char_sum_exact", "codim_singular", "count_points", "equidistribution_check",
    "family_min_arank", "field_create", "gowers_norm", "joint_distribution", "multilinearize",
    "parse", "prank_upper_search", "search_shifts", "singular_points", "verify_certificate",
]
