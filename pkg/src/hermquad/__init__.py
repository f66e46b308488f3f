"""Intersections of the Hermitian surface z^q + z = x^(q+1) + y^(q+1) with
the quadrics z = a x^2 + b y^2 + c xy + d x + e y + f over GF(q^2), q odd."""

from ._kernels import BACKEND
from .errors import (
    ClassificationError,
    HermquadError,
    InvalidField,
    NotIrreducible,
    SingularGram,
    SizeLimit,
    WrongCardinality,
)
from .gf import FieldParams, field_for_q, field_setup
from .varieties import QuadricCoeffs, QuadricType, quadric_type

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClassificationError",
    "FieldParams",
    "HermquadError",
    "InvalidField",
    "NotIrreducible",
    "QuadricCoeffs",
    "QuadricType",
    "SingularGram",
    "SizeLimit",
    "WrongCardinality",
    "field_for_q",
    "field_setup",
    "quadric_type",
]
