"""Exact linear algebra over Q and GF(p), polynomials and integer normal forms."""

from .fields import GF, QQ, Field, FieldScalar, GFElement, PrimeField, RationalField, \
    field_from_descriptor, is_prime, parse_rational
from .linalg import char_poly, column_space, det, inverse, kernel_basis, rank, rref, solve_linear
from .matrix import Matrix
from .poly import Polynomial, poly_gcd
from .smith import IntegerSolution, SmithDecomposition, int_det, int_matmul, smith_normal_form, \
    solve_integer_system
from .subspace import Subspace

__all__ = [
    "GF", "QQ", "Field", "FieldScalar", "GFElement", "PrimeField", "RationalField",
    "field_from_descriptor", "is_prime", "parse_rational",
    "char_poly", "column_space", "det", "inverse", "kernel_basis", "rank", "rref", "solve_linear",
    "Matrix", "Polynomial", "poly_gcd",
    "IntegerSolution", "SmithDecomposition", "int_det", "int_matmul", "smith_normal_form",
    "solve_integer_system", "Subspace",
]
