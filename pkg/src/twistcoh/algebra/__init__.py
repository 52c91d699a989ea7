"""Exact scalar, polynomial, rational-function and matrix arithmetic."""

from .fields import QQ, NFElement, NumberField, RationalField, is_integer, make_field, to_mpq
from .matrix import Matrix, RankResult, cofactor_det, rank_kernel_det, symbolic_rank
from .parse import (
    format_form,
    format_poly,
    format_rational,
    format_scalar,
    parse_form,
    parse_poly,
    parse_rational,
    parse_scalar,
)
from .poly import MultiPoly, monomials_of_degree, partial_derivative, poly_arith
from .ratfunc import RationalFunction, evaluate, homogeneous_degree

__all__ = [
    "QQ",
    "Matrix",
    "MultiPoly",
    "NFElement",
    "NumberField",
    "RankResult",
    "RationalField",
    "RationalFunction",
    "cofactor_det",
    "evaluate",
    "format_form",
    "format_poly",
    "format_rational",
    "format_scalar",
    "homogeneous_degree",
    "is_integer",
    "make_field",
    "monomials_of_degree",
    "parse_form",
    "parse_poly",
    "parse_rational",
    "parse_scalar",
    "partial_derivative",
    "poly_arith",
    "rank_kernel_det",
    "symbolic_rank",
    "to_mpq",
]
