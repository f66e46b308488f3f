"""The Hermitian surface H and the quadrics Q sharing its tangent plane at P_inf.

H:  z^q + z = x^(q+1) + y^(q+1)
Q:  z = a x^2 + b y^2 + c x y + d x + e y + f,   (a, b, c) != (0, 0, 0)

Homogeneous coordinates are (J, X, Y, Z) with x = X/J, y = Y/J, z = Z/J;
the common point is P_inf = (0, 0, 0, 1) and the common tangent plane J = 0.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from . import linalg
from .errors import NotIrreducible
from .gf import FieldParams, Fq2Elem, is_square_fq2


class QuadricType(str, enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    CONE = "cone"


COEFF_NAMES = ("a", "b", "c", "d", "e", "f")


@dataclass(frozen=True)
class QuadricCoeffs:
    a: Fq2Elem
    b: Fq2Elem
    c: Fq2Elem
    d: Fq2Elem
    e: Fq2Elem
    f: Fq2Elem

    def __post_init__(self):
        if not (self.a or self.b or self.c):
            raise NotIrreducible("(a, b, c) = (0, 0, 0) does not define an irreducible quadric")

    @property
    def field(self) -> FieldParams:
        return self.a.field

    @classmethod
    def from_codes(cls, field: FieldParams, codes: Sequence[int]) -> "QuadricCoeffs":
        return cls(*(field.fq2_code(c) for c in codes))

    @classmethod
    def from_values(cls, field: FieldParams, a=0, b=0, c=0, d=0, e=0, f=0) -> "QuadricCoeffs":
        """Build from Fq2Elem values or integers (integers embed via n * 1)."""
        vals = []
        for v in (a, b, c, d, e, f):
            vals.append(v if isinstance(v, Fq2Elem) else field.fq2(v))
        return cls(*vals)

    @classmethod
    def from_dict(cls, field: FieldParams, data: dict) -> "QuadricCoeffs":
        missing = [k for k in COEFF_NAMES if k not in data]
        if missing:
            raise ValueError(f"missing coefficients: {', '.join(missing)}")
        extra = sorted(set(data) - set(COEFF_NAMES))
        if extra:
            raise ValueError(f"unknown coefficient keys: {', '.join(extra)}")
        vals = []
        for k in COEFF_NAMES:
            v = data[k]
            if isinstance(v, int) and not isinstance(v, bool):
                vals.append(field.fq2(v))
            elif isinstance(v, str):
                try:
                    vals.append(field.parse_fq2(v))
                except ValueError as exc:
                    raise ValueError(f"bad value for {k}: {v!r}") from exc
            else:
                raise ValueError(f"bad value for {k}: {v!r}")
        return cls(*vals)

    @classmethod
    def from_json(cls, field: FieldParams, text: str) -> "QuadricCoeffs":
        return cls.from_dict(field, json.loads(text))

    def to_dict(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in COEFF_NAMES}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def codes(self) -> tuple[int, ...]:
        return tuple(getattr(self, k).code for k in COEFF_NAMES)

    def replace(self, **kw) -> "QuadricCoeffs":
        vals = {k: getattr(self, k) for k in COEFF_NAMES}
        vals.update(kw)
        return QuadricCoeffs(**vals)

    def discriminant(self) -> Fq2Elem:
        """4ab - c^2."""
        return 4 * self.a * self.b - self.c * self.c

    def __str__(self) -> str:
        return self.to_json()


def quadric_type(qc: QuadricCoeffs) -> QuadricType:
    delta = qc.discriminant()
    if not delta:
        return QuadricType.CONE
    if is_square_fq2(delta):
        return QuadricType.HYPERBOLIC
    return QuadricType.ELLIPTIC


class ProjPoint(NamedTuple):
    """Normalized homogeneous coordinates: first nonzero coordinate is 1."""

    J: Fq2Elem
    X: Fq2Elem
    Y: Fq2Elem
    Z: Fq2Elem

    @property
    def codes(self) -> tuple[int, int, int, int]:
        return (self.J.code, self.X.code, self.Y.code, self.Z.code)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self) + ")"


def proj_point(*coords: Fq2Elem) -> ProjPoint:
    if len(coords) == 1:
        coords = tuple(coords[0])
    if len(coords) != 4:
        raise ValueError("a point of PG(3,q^2) has 4 coordinates")
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = lead.inverse()
    return ProjPoint(*(c * inv for c in coords))


def p_infinity(field: FieldParams) -> ProjPoint:
    z, o = field.zero, field.one
    return ProjPoint(z, z, z, o)


def projective_points(field: FieldParams, dim: int = 3) -> Iterator[tuple[Fq2Elem, ...]]:
    """All normalized points of PG(dim, q^2), in the documented ordering."""
    elems = list(field.fq2_elements())
    zero, one = field.zero, field.one
    n = dim + 1
    for lead in range(n):
        head = (zero,) * lead + (one,)
        tail_len = n - lead - 1
        if tail_len == 0:
            yield head
            continue
        for tail in _product(elems, tail_len):
            yield head + tail


def _product(elems, n):
    if n == 0:
        yield ()
        return
    for x in elems:
        for rest in _product(elems, n - 1):
            yield (x,) + rest


def on_hermitian(P: Sequence[Fq2Elem]) -> bool:
    """Z^q J + Z J^q = X^(q+1) + Y^(q+1)."""
    J, X, Y, Z = P
    lhs = Z.frobenius() * J + Z * J.frobenius()
    rhs = X.frobenius() * X + Y.frobenius() * Y
    return lhs == rhs


def on_quadric(qc: QuadricCoeffs, P: Sequence[Fq2Elem]) -> bool:
    """J Z = a X^2 + b Y^2 + c X Y + d X J + e Y J + f J^2."""
    J, X, Y, Z = P
    rhs = (qc.a * X * X + qc.b * Y * Y + qc.c * X * Y
           + qc.d * X * J + qc.e * Y * J + qc.f * J * J)
    return J * Z == rhs


class HermitianSurface:
    """The canonical Hermitian surface of PG(3, q^2)."""

    def __init__(self, field: FieldParams):
        self.field = field

    def contains(self, P: Sequence[Fq2Elem]) -> bool:
        return on_hermitian(P)

    def affine_contains(self, x: Fq2Elem, y: Fq2Elem, z: Fq2Elem) -> bool:
        return z.frobenius() + z == x.norm() + y.norm()

    def points(self) -> Iterator[ProjPoint]:
        for P in projective_points(self.field):
            if on_hermitian(P):
                yield ProjPoint(*P)

    def expected_size(self) -> int:
        q = self.field.q
        return (q * q + 1) * (q**3 + 1)

    def gram(self):
        return hermitian_gram(self.field)


def hermitian_gram(field: FieldParams):
    """Matrix M_H with h(u, v) = u^T M_H v^q; H is {h(v, v) = 0}.

    The form X X^q + Y Y^q - J Z^q - Z J^q has GF(q) entries.
    """
    z, o = field.zero, field.one
    return [
        [z, z, z, -o],
        [z, o, z, z],
        [z, z, o, z],
        [-o, z, z, z],
    ]


def quadric_gram(qc: QuadricCoeffs):
    """Symmetric M_Q with v^T M_Q v = a X^2 + ... + f J^2 - J Z (halved cross terms)."""
    F = qc.field
    half = F.one / 2
    z = F.zero
    return [
        [qc.f, qc.d * half, qc.e * half, -half],
        [qc.d * half, qc.a, qc.c * half, z],
        [qc.e * half, qc.c * half, qc.b, z],
        [-half, z, z, z],
    ]


def gram_rank(qc: QuadricCoeffs) -> int:
    return linalg.rank(quadric_gram(qc))


def vertex(qc: QuadricCoeffs) -> ProjPoint | None:
    """Vertex of a cone (radical of the Gram matrix), None if Q is nonsingular."""
    basis = linalg.nullspace(quadric_gram(qc))
    if not basis:
        return None
    if len(basis) > 1:
        raise NotIrreducible("Gram matrix has rank < 3")
    return proj_point(*basis[0])


def tangent_plane_check(qc: QuadricCoeffs) -> bool:
    """Check that J = 0 is the tangent plane of both H and Q at P_inf.

    Computes both polar hyperplanes of P_inf explicitly and checks that P_inf
    is a nonsingular point of Q (it is not the vertex).
    """
    F = qc.field
    P = list(p_infinity(F))
    on_both = on_hermitian(P) and on_quadric(qc, P)
    grad_q = linalg.matvec(quadric_gram(qc), P)
    grad_h = linalg.matvec(hermitian_gram(F), [c.frobenius() for c in P])
    plane_j = lambda v: bool(v[0]) and not any(v[1:])  # noqa: E731
    return on_both and plane_j(grad_q) and plane_j(grad_h)
