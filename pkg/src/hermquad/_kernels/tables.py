"""Flat lookup tables handed to the counting kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gf import FieldParams


@dataclass(frozen=True)
class KernelTables:
    q: int
    nu: int
    add: np.ndarray  # int32, q*q, GF(q) codes
    mul: np.ndarray  # int32, q*q
    neg: np.ndarray  # int32, q
    inv: np.ndarray  # int32, q (inv[0] unused)
    chi: np.ndarray  # int32, q: 1 nonzero square, -1 nonsquare, 0 zero

    @classmethod
    def from_field(cls, field: FieldParams) -> "KernelTables":
        cached = getattr(field, "_kernel_tables", None)
        if cached is not None:
            return cached
        as_arr = lambda xs: np.ascontiguousarray(xs, dtype=np.int32)  # noqa: E731
        t = cls(
            q=field.q,
            nu=field.nu_code,
            add=as_arr(field._add),
            mul=as_arr(field._mul),
            neg=as_arr(field._neg),
            inv=as_arr(field._inv),
            chi=as_arr(field._chi),
        )
        field._kernel_tables = t
        return t


def as_coeff_array(coeffs) -> np.ndarray:
    arr = np.ascontiguousarray(coeffs, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != 6:
        raise ValueError("coefficient array must have shape (n, 6)")
    return arr
