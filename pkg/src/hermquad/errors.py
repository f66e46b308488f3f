"""Exception types raised by hermquad."""


class HermquadError(Exception):
    """Base class for all library errors."""


class InvalidField(HermquadError, ValueError):
    """Characteristic is even or not prime, or degree is not positive."""


class SizeLimit(HermquadError, ValueError):
    """Requested field order exceeds the configured bound."""


class NotIrreducible(HermquadError, ValueError):
    """Quadric coefficients with (a, b, c) = (0, 0, 0)."""


class SingularGram(HermquadError, ValueError):
    """An operation needed an invertible quadric Gram matrix (cones have none)."""


class WrongCardinality(HermquadError, ValueError):
    """Extremal structure check called on an intersection of the wrong size."""


class ClassificationError(HermquadError, RuntimeError):
    """Rank pattern of the reduced quadric fell outside the known cases."""
