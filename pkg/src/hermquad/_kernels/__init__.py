"""Counting kernels: compiled ``_core`` when built, pure-Python otherwise.

Set ``HERMQUAD_PURE=1`` to force the fallback.  Both modules expose
``oracle_counts(tables, coeffs)`` and ``classify_invariants(tables, coeffs)``.
"""

import os

from . import _fallback
from .tables import KernelTables, as_coeff_array

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

if _core is not None and not os.environ.get("HERMQUAD_PURE"):
    backend = _core
    BACKEND = "cython"
else:
    backend = _fallback
    BACKEND = "python"



def _checked(t: KernelTables, coeffs):
    arr = as_coeff_array(coeffs)
    if arr.size and (arr.min() < 0 or arr.max() >= t.q * t.q):
        raise ValueError(f"coefficient codes must lie in [0, {t.q * t.q})")
    return arr


def oracle_counts(t: KernelTables, coeffs):
    return backend.oracle_counts(t, _checked(t, coeffs))


def classify_invariants(t: KernelTables, coeffs):
    return backend.classify_invariants(t, _checked(t, coeffs))

__all__ = [
    "BACKEND",
    "KernelTables",
    "as_coeff_array",
    "backend",
    "classify_invariants",
    "oracle_counts",
]
