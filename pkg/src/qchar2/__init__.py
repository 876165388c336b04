"""Exact computer algebra for quadratic forms, quaternion algebras and
involutions over fields of characteristic 2."""

from .fields import (
    GF,
    GF2,
    GF4,
    FieldValue,
    FiniteField,
    FunctionField,
    rational_extension,
)

__all__ = [
    "GF",
    "GF2",
    "GF4",
    "FieldValue",
    "FiniteField",
    "FunctionField",
    "rational_extension",
]

__version__ = "0.1.0"
