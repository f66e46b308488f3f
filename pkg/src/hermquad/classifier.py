"""Closed-form counting of H cap Q through the reduced quadric Xi of AG(4, q).

Substituting z from the quadric into the Hermitian equation and writing
x = x0 + x1 e, y = y0 + y1 e turns the affine intersection into the affine
points of a quadric Xi with symmetric 5x5 matrix A over GF(q).  Its points at
infinity form Xi_inf (upper-left 4x4 block A_inf).  The affine count then
follows from (rank A, rank A_inf) and quadratic characters (cases C1..C8,
plus C9 = ranks (5, 3) and C10 = ranks (4, 2), which both give q^3 points);
the part at infinity of H cap Q is a union of lines through P_inf read off
the binary form a X^2 + c X Y + b Y^2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels, linalg
from .errors import ClassificationError
from .gf import FieldParams, FqElem, is_square_fq, sqrt_fq2
from .varieties import QuadricCoeffs, QuadricType, quadric_type

# order fixes the integer case codes used by the batch path
CASE_LABELS = (
    "C1",
    "C2",
    "C3",
    "C4",
    "C5-hyperbolic-cone",
    "C5-elliptic-cone",
    "C6",
    "C7-plane-pair",
    "C7-line",
    "C8-plane-pair",
    "C8-line",
    "C9",
    "C10-hyperbolic-cone",
    "C10-elliptic-cone",
)
CASE_CODE = {label: i for i, label in enumerate(CASE_LABELS)}


def affine_count_for_case(q: int, label: str) -> int:
    """Affine point count of Xi in each case."""
    table = {
        "C1": q**3 - q,
        "C2": q**3 + q,
        "C3": q**3 + q**2 - q,
        "C4": q**3 - q**2 + q,
        "C5-hyperbolic-cone": q**3 + q**2,
        "C5-elliptic-cone": q**3 - q**2,
        "C6": q**3,
        "C7-plane-pair": q**3 - q**2,
        "C7-line": q**3 + q**2,
        "C8-plane-pair": 2 * q**3 - q**2,
        "C8-line": q**2,
        "C9": q**3,
        "C10-hyperbolic-cone": q**3,
        "C10-elliptic-cone": q**3,
    }
    return table[label]


def projective_quadric_size(q: int, nvars: int, rank: int, chi_core: int) -> int:
    """Points of a quadric in PG(nvars-1, q), q odd, from rank and discriminant.

    ``chi_core`` is the quadratic character of the determinant of the
    nondegenerate part (ignored for odd rank).
    """
    if rank == 0:
        zeros = q**nvars
    elif rank % 2:
        zeros = q ** (nvars - 1)
    else:
        h = rank // 2
        sign = chi_core * (1 if (q % 4 == 1 or h % 2 == 0) else -1)
        zeros = q ** (nvars - rank) * (q ** (rank - 1) + sign * (q**h - q ** (h - 1)))
    return (zeros - 1) // (q - 1)


def _minus_one_char(q: int) -> int:
    return 1 if q % 4 == 1 else -1


def case_label(q: int, rank_a: int, rank_inf: int, chi_a: int, chi_inf: int) -> str:
    if rank_a == 5 and rank_inf == 4:
        return "C1" if chi_inf == 1 else "C2"
    if rank_a == 4 and rank_inf == 4:
        return "C3" if chi_inf == 1 else "C4"
    if rank_a == 4 and rank_inf == 3:
        return "C5-hyperbolic-cone" if chi_a == 1 else "C5-elliptic-cone"
    if rank_a == 3 and rank_inf == 3:
        return "C6"
    if rank_a == 5 and rank_inf == 3:
        return "C9"
    # rank-2 forms split into two planes iff -det is a square
    split = chi_inf * _minus_one_char(q) == 1
    if rank_a == 4 and rank_inf == 2:
        # J = 0 is tangent through the vertex: two planes over Q+(3,q), a line over Q-(3,q)
        if (chi_a == 1) != split:
            raise ClassificationError("rank A=4, rank A_inf=2 with inconsistent characters")
        return "C10-hyperbolic-cone" if chi_a == 1 else "C10-elliptic-cone"
    if rank_a == 3 and rank_inf == 2:
        return "C7-plane-pair" if split else "C7-line"
    if rank_a == 2 and rank_inf == 2:
        return "C8-plane-pair" if split else "C8-line"
    raise ClassificationError(f"unexpected ranks: rank A={rank_a}, rank A_inf={rank_inf}")


@dataclass(frozen=True)
class MatrixA:
    """The 5x5 symmetric matrix of Xi; rows/cols ordered x0, x1, y0, y1, 1."""

    entries: tuple[tuple[FqElem, ...], ...]

    @property
    def a_inf(self) -> list[list[FqElem]]:
        return [list(row[:4]) for row in self.entries[:4]]

    def block(self, name: str) -> list[list[FqElem]]:
        """One of the 2x2 blocks 'A' (x-x), 'B' (y-y), 'C' (x-y) of A_inf."""
        r, c = {"A": (0, 0), "B": (2, 2), "C": (0, 2)}[name]
        return [[self.entries[r + i][c + j] for j in range(2)] for i in range(2)]

    def rows(self) -> list[list[FqElem]]:
        return [list(row) for row in self.entries]

    def quadratic_form(self, x0, x1, y0, y1) -> FqElem:
        return linalg.quadratic_value(self.rows(), [x0, x1, y0, y1, x0.field.fq(1)])


def build_A(qc: QuadricCoeffs) -> MatrixA:
    F = qc.field
    nu = F.nu
    a0, a1 = qc.a.x0, qc.a.x1
    b0, b1 = qc.b.x0, qc.b.x1
    c0, c1 = qc.c.x0, qc.c.x1
    d0, d1 = qc.d.x0, qc.d.x1
    e0, e1 = qc.e.x0, qc.e.x1
    f0 = qc.f.x0
    rows = (
        (2 * a0 - 1, 2 * nu * a1, c0, nu * c1, d0),
        (2 * nu * a1, (2 * a0 + 1) * nu, nu * c1, nu * c0, nu * d1),
        (c0, nu * c1, 2 * b0 - 1, 2 * nu * b1, e0),
        (nu * c1, nu * c0, 2 * nu * b1, (2 * b0 + 1) * nu, nu * e1),
        (d0, nu * d1, e0, nu * e1, 2 * f0),
    )
    return MatrixA(rows)


def det_a_inf_formula(qc: QuadricCoeffs) -> FqElem:
    """(c^2 - 4ab)^(q+1) - 4 a^(q+1) - 4 b^(q+1) - 2 c^(q+1) + 1, in GF(q)."""
    a, b, c = qc.a, qc.b, qc.c
    val = (c * c - 4 * a * b).norm() - 4 * a.norm() - 4 * b.norm() - 2 * c.norm() + 1
    return val


def det_a_inf_closed_form(qc: QuadricCoeffs) -> FqElem:
    """det A_inf exactly: nu^2 times the norm expression above.

    The x1 and y1 rows and columns of A carry the factor e^2 = nu, so the
    determinant picks up nu^2, a nonzero square; characters are unchanged.
    """
    nu = qc.field.nu
    return nu * nu * det_a_inf_formula(qc)


@dataclass(frozen=True)
class ClassifierReport:
    quadric_type: QuadricType
    rank_A: int
    rank_Ainf: int
    det_Ainf: FqElem
    det_is_square: bool
    case: str
    affine_count: int
    cinf_count: int
    total: int

    @property
    def det_character(self) -> str:
        if not self.det_Ainf:
            return "zero"
        return "square" if self.det_is_square else "nonsquare"

    def to_dict(self) -> dict:
        return {
            "quadric_type": self.quadric_type.value,
            "rank_A": self.rank_A,
            "rank_Ainf": self.rank_Ainf,
            "det_Ainf": str(self.det_Ainf),
            "det_character": self.det_character,
            "case": self.case,
            "affine_count": self.affine_count,
            "cinf_count": self.cinf_count,
            "total": self.total,
        }


def infinity_directions(qc: QuadricCoeffs) -> list[tuple]:
    """Distinct directions (X:Y) through P_inf with a X^2 + c X Y + b Y^2 = 0."""
    F = qc.field
    a, b, c = qc.a, qc.b, qc.c
    zero, one = F.zero, F.one
    if a:
        s = sqrt_fq2(c * c - 4 * a * b)
        if s is None:
            return []
        inv2a = (2 * a).inverse()
        roots = {(-c + s) * inv2a, (-c - s) * inv2a}
        return sorted(((x, one) for x in roots), key=lambda d: F.order_key(d[0]))
    dirs = [(one, zero)]
    if c:
        dirs.append((-b / c, one))
    return dirs


def count_infinity(qc: QuadricCoeffs) -> int:
    """|H cap Q cap {J = 0}|: 1, q^2 + 1 or 2 q^2 + 1."""
    q = qc.field.q
    lines = sum(1 for X, Y in infinity_directions(qc) if not (X.norm() + Y.norm()))
    return 1 + q * q * lines


def invariants(qc: QuadricCoeffs) -> tuple[int, int, int, int, FqElem]:
    """(rank A, rank A_inf, chi core A, chi core A_inf, det A_inf) via the kernel."""
    F = qc.field
    t = _kernels.KernelTables.from_field(F)
    r_a, r_inf, chi_a, chi_inf, det = (int(v) for v in _kernels.classify_invariants(t, [qc.codes])[0])
    return r_a, r_inf, chi_a, chi_inf, F.fq_code(det)


def classify(qc: QuadricCoeffs) -> ClassifierReport:
    q = qc.field.q
    r_a, r_inf, chi_a, chi_inf, det = invariants(qc)
    label = case_label(q, r_a, r_inf, chi_a, chi_inf)
    affine = affine_count_for_case(q, label)
    cinf = count_infinity(qc)
    return ClassifierReport(
        quadric_type=quadric_type(qc),
        rank_A=r_a,
        rank_Ainf=r_inf,
        det_Ainf=det,
        det_is_square=bool(det) and is_square_fq(det),
        case=label,
        affine_count=affine,
        cinf_count=cinf,
        total=affine + cinf,
    )


def total_count(qc: QuadricCoeffs) -> int:
    return classify(qc).total


# -- batch path -----------------------------------------------------------------

def _case_codes(q: int, inv: np.ndarray) -> np.ndarray:
    r_a, r_inf, chi_a, chi_inf = inv[:, 0], inv[:, 1], inv[:, 2], inv[:, 3]
    split = chi_inf * _minus_one_char(q) == 1
    code = np.full(len(inv), -1, dtype=np.int64)
    conds = [
        ((r_a == 5) & (r_inf == 4) & (chi_inf == 1), "C1"),
        ((r_a == 5) & (r_inf == 4) & (chi_inf != 1), "C2"),
        ((r_a == 4) & (r_inf == 4) & (chi_inf == 1), "C3"),
        ((r_a == 4) & (r_inf == 4) & (chi_inf != 1), "C4"),
        ((r_a == 4) & (r_inf == 3) & (chi_a == 1), "C5-hyperbolic-cone"),
        ((r_a == 4) & (r_inf == 3) & (chi_a != 1), "C5-elliptic-cone"),
        ((r_a == 3) & (r_inf == 3), "C6"),
        ((r_a == 3) & (r_inf == 2) & split, "C7-plane-pair"),
        ((r_a == 3) & (r_inf == 2) & ~split, "C7-line"),
        ((r_a == 2) & (r_inf == 2) & split, "C8-plane-pair"),
        ((r_a == 2) & (r_inf == 2) & ~split, "C8-line"),
        ((r_a == 5) & (r_inf == 3), "C9"),
        ((r_a == 4) & (r_inf == 2) & (chi_a == 1) & split, "C10-hyperbolic-cone"),
        ((r_a == 4) & (r_inf == 2) & (chi_a != 1) & ~split, "C10-elliptic-cone"),
    ]
    for mask, label in conds:
        code[mask] = CASE_CODE[label]
    if (code < 0).any():
        bad = inv[int(np.argmax(code < 0))]
        raise ClassificationError(f"unexpected ranks: rank A={bad[0]}, rank A_inf={bad[1]}")
    return code


class InfinityTable:
    """Memoized count_infinity keyed by the (a, b, c) codes."""

    def __init__(self, field: FieldParams):
        self.field = field
        self._cache: dict[tuple[int, int, int], int] = {}

    def __call__(self, a: int, b: int, c: int) -> int:
        key = (a, b, c)
        hit = self._cache.get(key)
        if hit is None:
            F = self.field
            qc = QuadricCoeffs(F.fq2_code(a), F.fq2_code(b), F.fq2_code(c), F.zero, F.zero, F.zero)
            hit = self._cache[key] = count_infinity(qc)
        return hit

    def lookup(self, abc: np.ndarray) -> np.ndarray:
        uniq, inverse = np.unique(abc, axis=0, return_inverse=True)
        vals = np.array([self(*map(int, row)) for row in uniq], dtype=np.int64)
        return vals[inverse.reshape(-1)]


def classify_batch(field: FieldParams, coeffs, inf_table: InfinityTable | None = None) -> dict:
    """Vectorized classification of many coefficient rows (GF(q^2) codes).

    Returns arrays ``case`` (index into CASE_LABELS), ``affine``, ``cinf``,
    ``total``, ``rank_A``, ``rank_Ainf``.
    """
    q = field.q
    t = _kernels.KernelTables.from_field(field)
    arr = _kernels.as_coeff_array(coeffs)
    if len(arr) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return {k: empty for k in ("case", "affine", "cinf", "total", "rank_A", "rank_Ainf")}
    inv = _kernels.classify_invariants(t, arr)
    codes = _case_codes(q, inv)
    affine_lut = np.array([affine_count_for_case(q, lab) for lab in CASE_LABELS], dtype=np.int64)
    affine = affine_lut[codes]
    table = inf_table or InfinityTable(field)
    cinf = table.lookup(arr[:, :3])
    return {
        "case": codes,
        "affine": affine,
        "cinf": cinf,
        "total": affine + cinf,
        "rank_A": inv[:, 0],
        "rank_Ainf": inv[:, 1],
    }


# -- Xi_inf by enumeration (used by the structural lemma checks) ---------------

def xi_inf_size(qc: QuadricCoeffs) -> int:
    """Number of points of the quadric A_inf in PG(3, q), by direct enumeration."""
    F = qc.field
    M = build_A(qc).a_inf
    elems = list(F.fq_elements())
    zero, one = F.fq(0), F.fq(1)
    count = 0
    for lead in range(4):
        for tail in itertools.product(elems, repeat=3 - lead):
            v = [zero] * lead + [one] + list(tail)
            if not linalg.quadratic_value(M, v):
                count += 1
    return count

