"""Polycore module - exact rational polynomials and real root isolation."""

from .poly import PolyQ, RatFuncQ, poly_antiderivative, poly_derivative, poly_eval, poly_gcd
from .rational import (
    PolynomialError,
    Rational,
    Snap,
    format_rational,
    parse_exact,
    parse_rational,
    snap_rational,
    to_mpf,
)
from .roots import (
    RootInterval,
    SturmChain,
    cauchy_bound,
    has_no_roots,
    isolate_real_roots,
    positive_on,
    refine,
    square_free_decomposition,
    square_free_part,
)

__all__ = [
    "PolyQ",
    "RatFuncQ",
    "Rational",
    "RootInterval",
    "Snap",
    "SturmChain",
    "PolynomialError",
    "poly_eval",
    "poly_derivative",
    "poly_antiderivative",
    "poly_gcd",
    "isolate_real_roots",
    "positive_on",
    "has_no_roots",
    "refine",
    "cauchy_bound",
    "square_free_part",
    "square_free_decomposition",
    "parse_rational",
    "parse_exact",
    "format_rational",
    "snap_rational",
    "to_mpf",
]
