"""Brute-force enumeration of H cap Q.

Nothing here uses the reduced-quadric formulas: points are tested against
the raw equations of H and Q.  ``count``/``count_batch`` run the compiled
(or fallback) kernel and return integers only; the ``enumerate_*``
functions materialize points and are meant for small q.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import SizeLimit
from .gf import FieldParams, Fq2Elem
from .varieties import ProjPoint, QuadricCoeffs, on_hermitian, on_quadric

# point sets are only materialized up to this q
STORE_MAX_Q = 11

AffinePoint = tuple[Fq2Elem, Fq2Elem, Fq2Elem]


@dataclass(frozen=True)
class IntersectionSet:
    affine: tuple[AffinePoint, ...]
    infinity: tuple[ProjPoint, ...]

    @property
    def total(self) -> int:
        return len(self.affine) + len(self.infinity)

    def projective_points(self) -> list[ProjPoint]:
        """Every point with normalized homogeneous coordinates (J = 1 for affine ones)."""
        if not self.infinity:
            return []
        one = self.infinity[0].Z.field.one
        return [ProjPoint(one, x, y, z) for x, y, z in self.affine] + list(self.infinity)


def _check_size(field: FieldParams) -> None:
    if field.q > STORE_MAX_Q:
        raise SizeLimit(f"point sets are only stored for q <= {STORE_MAX_Q}")


def _affine_z(qc: QuadricCoeffs, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem:
    return qc.a * x * x + qc.b * y * y + qc.c * x * y + qc.d * x + qc.e * y + qc.f


def iter_affine(qc: QuadricCoeffs) -> Iterator[AffinePoint]:
    """Row-major over (x, y) in the documented element order."""
    F = qc.field
    elems = list(F.fq2_elements())
    norms = [x * x.frobenius() for x in elems]
    for x, nx in zip(elems, norms):
        for y, ny in zip(elems, norms):
            z = _affine_z(qc, x, y)
            if z.frobenius() + z == nx + ny:
                yield (x, y, z)


def enumerate_affine(qc: QuadricCoeffs) -> tuple[AffinePoint, ...]:
    _check_size(qc.field)
    return tuple(iter_affine(qc))


def enumerate_infinity(qc: QuadricCoeffs) -> tuple[ProjPoint, ...]:
    """Normalized points (0, X, Y, Z) on both surfaces."""
    _check_size(qc.field)
    F = qc.field
    zero, one = F.zero, F.one
    elems = list(F.fq2_elements())
    cands = [(zero, one, Y, Z) for Y in elems for Z in elems]
    cands += [(zero, zero, one, Z) for Z in elems]
    cands.append((zero, zero, zero, one))
    return tuple(ProjPoint(*P) for P in cands if on_hermitian(P) and on_quadric(qc, P))


def intersection(qc: QuadricCoeffs) -> IntersectionSet:
    return IntersectionSet(enumerate_affine(qc), enumerate_infinity(qc))


# -- count-only fast path ----------------------------------------------------------

def _counts_chunk(args) -> np.ndarray:
    p, k, chunk = args
    from .gf import field_setup

    t = _kernels.KernelTables.from_field(field_setup(p, k))
    return _kernels.oracle_counts(t, chunk)


def count_batch(field: FieldParams, coeffs, workers: int = 1, chunk: int = 256) -> np.ndarray:
    """(n, 2) array of [affine, infinity] counts.

    With ``workers > 1`` the rows are split into chunks processed in
    separate processes; results are concatenated in input order, so the
    output does not depend on the partition.
    """
    arr = _kernels.as_coeff_array(coeffs)
    if workers <= 1 or len(arr) <= chunk:
        return _kernels.oracle_counts(_kernels.KernelTables.from_field(field), arr)
    pieces = [arr[i:i + chunk] for i in range(0, len(arr), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_counts_chunk, [(field.p, field.k, pc) for pc in pieces]))
    return np.concatenate(parts, axis=0)


def count(qc: QuadricCoeffs) -> dict[str, int]:
    affine, inf = (int(v) for v in count_batch(qc.field, [qc.codes])[0])
    return {"affine": affine, "infinity": inf, "total": affine + inf}


def oracle_total(qc: QuadricCoeffs) -> int:
    return count(qc)["total"]
