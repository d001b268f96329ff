"""Exact computation in F_q(t): places, Laurent series at infinity, Kummer towers,
the Kochen operator and symbol algebras."""

from .errors import FFKError, ParseError, PrecisionError, PreconditionError, UnsupportedError
from .ffield import FieldElement, FieldSpec, field, parse_field_spec
from .poly import Polynomial, RationalFunction, parse_poly, parse_ratfunc

__all__ = [
    "FFKError",
    "FieldElement",
    "FieldSpec",
    "ParseError",
    "PrecisionError",
    "PreconditionError",
    "Polynomial",
    "RationalFunction",
    "UnsupportedError",
    "field",
    "parse_field_spec",
    "parse_poly",
    "parse_ratfunc",
]
