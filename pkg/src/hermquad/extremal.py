"""Structure of H cap Q at the two extreme sizes.

At size q^2+1 the intersection is an elliptic quadric (an ovoid of Q) inside
the Baer subgeometry fixed by Psi; at size 2q^3+q^2+1 the pair is permutable
and the intersection is swept out by the extended generators of a hyperbolic
quadric Q' of that subgeometry.

Here Psi = rho theta is the composition of the two polarities, acting as
x -> M_Q^-1 M_H x^q.  Point sets are numpy arrays of normalized codes
(J, X, Y, Z); everything is brute force over PG(3, q^2), so q <= 7 is
practical.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import linalg
from .errors import SingularGram, WrongCardinality
from .gf import FieldParams, VectorOps
from .varieties import QuadricCoeffs, QuadricType, hermitian_gram, quadric_gram, quadric_type
from . import oracle


# -- vectorized projective geometry ------------------------------------------------

class _Space:
    """All points of PG(3, q^2) as an (N, 4) code array plus a reverse index."""

    def __init__(self, F: FieldParams):
        self.F = F
        self.V = VectorOps(F)
        n = F.q * F.q
        self.n = n
        order = np.asarray(F.fq2_order, dtype=np.int64)
        blocks = []
        for lead in range(4):
            tail = 3 - lead
            grids = np.meshgrid(*([order] * tail), indexing="ij") if tail else []
            m = n**tail
            blk = np.zeros((m, 4), dtype=np.int64)
            blk[:, lead] = 1
            for i, g in enumerate(grids):
                blk[:, lead + 1 + i] = g.ravel()
            blocks.append(blk)
        self.points = np.concatenate(blocks)
        self.index = np.full(n**4, -1, dtype=np.int64)
        self.index[self.keys(self.points)] = np.arange(len(self.points))
        inv = np.zeros(n, dtype=np.int64)
        for a in range(1, n):
            inv[a] = F.inv2(a)
        self._inv = inv
        self._frob = np.array([F.frob2(a) for a in range(n)], dtype=np.int64)

    def keys(self, pts: np.ndarray) -> np.ndarray:
        n = self.n
        return pts[:, 0] + n * (pts[:, 1] + n * (pts[:, 2] + n * pts[:, 3]))

    def frob(self, a):
        return self._frob[a]

    def normalize(self, vecs: np.ndarray) -> np.ndarray:
        nz = vecs != 0
        if not nz.any(axis=1).all():
            raise ValueError("zero vector has no projective point")
        lead = vecs[np.arange(len(vecs)), nz.argmax(axis=1)]
        return self.V.mul(vecs, self._inv[lead][:, None])

    def locate(self, vecs: np.ndarray) -> np.ndarray:
        """Row indices (into ``points``) of the projective points of ``vecs``."""
        return self.index[self.keys(self.normalize(vecs))]

    def apply(self, M: np.ndarray, vecs: np.ndarray) -> np.ndarray:
        V = self.V
        out = np.zeros_like(vecs)
        for i in range(4):
            acc = np.zeros(len(vecs), dtype=np.int64)
            for j in range(4):
                if M[i, j]:
                    acc = V.add(acc, V.mul(M[i, j], vecs[:, j]))
            out[:, i] = acc
        return out

    def bilinear(self, M: np.ndarray, u: np.ndarray, vecs: np.ndarray) -> np.ndarray:
        """u^T M v for a fixed vector u and every row v."""
        V = self.V
        w = [0, 0, 0, 0]
        for j in range(4):
            acc = 0
            for i in range(4):
                acc = self.F.add2(acc, self.F.mul2(int(u[i]), int(M[i, j])))
            w[j] = acc
        out = np.zeros(len(vecs), dtype=np.int64)
        for j in range(4):
            if w[j]:
                out = V.add(out, V.mul(w[j], vecs[:, j]))
        return out

    def quadratic(self, M: np.ndarray, vecs: np.ndarray) -> np.ndarray:
        V = self.V
        Mv = self.apply(M, vecs)
        out = np.zeros(len(vecs), dtype=np.int64)
        for i in range(4):
            out = V.add(out, V.mul(vecs[:, i], Mv[:, i]))
        return out

    def hermitian(self, vecs: np.ndarray) -> np.ndarray:
        """X X^q + Y Y^q - J Z^q - Z J^q."""
        V, fr = self.V, self.frob
        J, X, Y, Z = vecs.T
        pos = V.add(V.mul(X, fr(X)), V.mul(Y, fr(Y)))
        return V.sub(pos, V.add(V.mul(J, fr(Z)), V.mul(Z, fr(J))))

    def line(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Sorted point indices of the line spanned by u and v."""
        order = np.arange(self.n)
        vecs = self.V.add(u[None, :], self.V.mul(order[:, None], v[None, :]))
        idx = np.concatenate([self.locate(vecs), self.locate(v[None, :])])
        return np.unique(idx)


_SPACES: dict[int, _Space] = {}


def _space(F: FieldParams) -> _Space:
    sp = _SPACES.get(F.q)
    if sp is None:
        sp = _SPACES[F.q] = _Space(F)
    return sp


def _codes(M) -> np.ndarray:
    return np.array([[int(x.code) for x in row] for row in M], dtype=np.int64)


# -- polarities ---------------------------------------------------------------------

@dataclass
class PolarityPair:
    """The polarities of H and Q and their product Psi."""

    qc: QuadricCoeffs
    M_H: list = dc_field(init=False)
    M_Q: list = dc_field(init=False)

    def __post_init__(self):
        F = self.qc.field
        self.M_H = hermitian_gram(F)
        self.M_Q = quadric_gram(self.qc)

    @cached_property
    def psi_matrix(self) -> list:
        if linalg.rank(self.M_Q) < 4:
            raise SingularGram("Q is a cone: its Gram matrix is singular")
        return linalg.matmul(linalg.inverse(self.M_Q), self.M_H)

    def psi_squared(self) -> list:
        """Linear part of Psi o Psi: P P^(q), with P the matrix of Psi."""
        P = self.psi_matrix
        return linalg.matmul(P, [[x.frobenius() for x in row] for row in P])

    def psi(self, vecs: np.ndarray) -> np.ndarray:
        sp = _space(self.qc.field)
        return sp.apply(_codes(self.psi_matrix), sp.frob(vecs))

    def fixed_points(self) -> np.ndarray:
        """Indices of the points of PG(3, q^2) fixed by Psi."""
        sp = _space(self.qc.field)
        return np.flatnonzero(sp.locate(self.psi(sp.points)) == np.arange(len(sp.points)))


def is_permutable(qc: QuadricCoeffs) -> bool:
    """True iff Psi is a projective involution (the two polarities commute)."""
    return linalg.is_scalar_matrix(PolarityPair(qc).psi_squared())


def _general_position(rows: np.ndarray, F: FieldParams) -> bool:
    from itertools import combinations

    elems = [[F.fq2_code(int(x)) for x in r] for r in rows]
    return all(linalg.rank([elems[i] for i in c]) == 4 for c in combinations(range(5), 4))


@dataclass
class BaerSubgeometry:
    field: FieldParams
    members: np.ndarray  # sorted point indices
    frame: np.ndarray | None  # 5 x 4 codes: 4 independent points plus a unit point

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_baer(self) -> bool:
        q = self.field.q
        return self.frame is not None and self.size == (q + 1) * (q * q + 1)

    def contains(self, idx) -> np.ndarray:
        return np.isin(idx, self.members)


def baer_subgeometry(pair: PolarityPair) -> BaerSubgeometry:
    """Fixed set of Psi with a frame found greedily in point order."""
    F = pair.qc.field
    sp = _space(F)
    members = pair.fixed_points()
    pts = sp.points[members]
    chosen: list[int] = []
    elems = lambda rows: [[F.fq2_code(int(x)) for x in r] for r in rows]
    for i in range(len(pts)):
        trial = chosen + [i]
        if linalg.rank(elems(pts[trial])) == len(trial):
            chosen = trial
            if len(chosen) == 4:
                break
    frame = None
    if len(chosen) == 4:
        for i in range(len(pts)):
            if i in chosen:
                continue
            rows = pts[chosen + [i]]
            if _general_position(rows, F):
                frame = rows
                break
    return BaerSubgeometry(F, members, frame)


# -- generators of a hyperbolic quadric ------------------------------------------------------

@dataclass
class Reguli:
    """The two families of lines on a hyperbolic Q, each line a sorted index array."""

    points: np.ndarray  # indices of the points of Q
    families: tuple[list[np.ndarray], list[np.ndarray]]


def _other_generator(sp: _Space, MQ: np.ndarray, qpts: np.ndarray, x: int, line: np.ndarray) -> np.ndarray:
    """The generator through point ``x`` of Q other than ``line``."""
    u = sp.points[x]
    cand = qpts[(sp.bilinear(MQ, u, sp.points[qpts]) == 0) & ~np.isin(qpts, line)]
    return sp.line(u, sp.points[cand[0]])


def reguli(qc: QuadricCoeffs) -> Reguli:
    """Generators of a hyperbolic Q.

    Through the first point P0 of Q the tangent plane meets Q in two lines
    l1, l2.  The family of l2 consists of the second generators through the
    points of l1, and vice versa.
    """
    if quadric_type(qc) is not QuadricType.HYPERBOLIC:
        raise ValueError("reguli exist only on a hyperbolic quadric")
    F = qc.field
    sp = _space(F)
    MQ = _codes(quadric_gram(qc))
    qpts = np.flatnonzero(sp.quadratic(MQ, sp.points) == 0)
    p0 = qpts[0]
    u = sp.points[p0]
    tangent = qpts[(sp.bilinear(MQ, u, sp.points[qpts]) == 0) & (qpts != p0)]
    l1 = sp.line(u, sp.points[tangent[0]])
    rest = tangent[~np.isin(tangent, l1)]
    l2 = sp.line(u, sp.points[rest[0]])
    fam2 = [l2 if x == p0 else _other_generator(sp, MQ, qpts, x, l1) for x in l1]
    fam1 = [l1 if x == p0 else _other_generator(sp, MQ, qpts, x, l2) for x in l2]
    return Reguli(qpts, (fam1, fam2))


def line_hermitian_sizes(field: FieldParams, lines: list[np.ndarray]) -> list[int]:
    """|L cap H| for each line given as point indices."""
    sp = _space(field)
    herm = sp.hermitian(sp.points) == 0
    return [int(herm[L].sum()) for L in lines]


def random_line_hermitian_sizes(field: FieldParams, n: int, seed: int = 0) -> list[int]:
    sp = _space(field)
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    while len(out) < n:
        i, j = rng.integers(0, len(sp.points), size=2)
        if i == j:
            continue
        out.extend(line_hermitian_sizes(field, [sp.line(sp.points[i], sp.points[j])]))
    return out


# -- structure checks -------------------------------------------------------------------------

@dataclass
class StructureReport:
    kind: str  # "minimum" or "maximum"
    clauses: dict[str, bool]
    details: dict

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.clauses.items() if not v]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "status": "PASS" if self.passed else "FAIL",
            "clauses": {k: ("PASS" if v else "FAIL") for k, v in self.clauses.items()},
            "details": self.details,
        }


def _omega(qc: QuadricCoeffs) -> np.ndarray:
    sp = _space(qc.field)
    MQ = _codes(quadric_gram(qc))
    on = (sp.quadratic(MQ, sp.points) == 0) & (sp.hermitian(sp.points) == 0)
    return np.flatnonzero(on)


def _require_size(qc: QuadricCoeffs, expected: int) -> int:
    total = oracle.oracle_total(qc)
    if total != expected:
        raise WrongCardinality(f"|H cap Q| = {total}, expected {expected}")
    return total


def check_minimum_structure(qc: QuadricCoeffs) -> StructureReport:
    """Clauses for |H cap Q| = q^2 + 1.

    (i) Q is hyperbolic; (ii) Omega is an ovoid of Q (each generator meets it
    at most once); (iii) Psi fixes Omega pointwise and its fixed set is a Baer
    subgeometry containing Omega; (iv) Omega = Q cap that subgeometry.
    """
    q = qc.field.q
    _require_size(qc, q * q + 1)
    clauses: dict[str, bool] = {"i_hyperbolic": quadric_type(qc) is QuadricType.HYPERBOLIC}
    details: dict = {"size": q * q + 1}
    omega = _omega(qc)
    if not clauses["i_hyperbolic"]:
        clauses.update(ii_ovoid=False, iii_baer=False, iv_complete_intersection=False)
        return StructureReport("minimum", clauses, details)
    R = reguli(qc)
    meets = [int(np.isin(L, omega).sum()) for fam in R.families for L in fam]
    clauses["ii_ovoid"] = max(meets) <= 1
    details["max_generator_meet"] = max(meets)
    baer = baer_subgeometry(PolarityPair(qc))
    details["fixed_points"] = baer.size
    clauses["iii_baer"] = bool(baer.is_baer and baer.contains(omega).all())
    q_in_baer = np.intersect1d(R.points, baer.members)
    clauses["iv_complete_intersection"] = bool(np.array_equal(q_in_baer, omega))
    return StructureReport("minimum", clauses, details)


def regulus_counts(field: FieldParams, family: list[np.ndarray]) -> dict[str, int]:
    """r1, r2, r3: lines of the family meeting H in 1, q+1, q^2+1 points."""
    q = field.q
    sizes = line_hermitian_sizes(field, family)
    return {
        "r1": sizes.count(1),
        "r2": sizes.count(q + 1),
        "r3": sizes.count(q * q + 1),
        "other": len(sizes) - sizes.count(1) - sizes.count(q + 1) - sizes.count(q * q + 1),
    }


def check_maximum_structure(qc: QuadricCoeffs) -> StructureReport:
    """Clauses for |H cap Q| = 2q^3 + q^2 + 1.

    (i) Q hyperbolic; (ii) H and Q permutable; (iii) in each regulus at least
    q+1 generators lie on H, with the incidence identity
    r1 + (q+1) r2 + (q^2+1) r3 = 2q^3+q^2+1; (iv) Q' = Omega_1 x Omega_2
    intersections lies in the Baer subgeometry fixed by Psi and every point of
    H cap Q is on an extended generator of Q'.
    """
    F = qc.field
    q = F.q
    target = 2 * q**3 + q * q + 1
    _require_size(qc, target)
    clauses: dict[str, bool] = {"i_hyperbolic": quadric_type(qc) is QuadricType.HYPERBOLIC}
    details: dict = {"size": target}
    if not clauses["i_hyperbolic"]:
        clauses.update(ii_permutable=False, iii_reguli=False, iv_subgeometry=False)
        return StructureReport("maximum", clauses, details)
    clauses["ii_permutable"] = is_permutable(qc)
    sp = _space(F)
    omega = _omega(qc)
    R = reguli(qc)
    counts = [regulus_counts(F, fam) for fam in R.families]
    details["regulus_counts"] = counts
    identity = all(
        c["other"] == 0
        and c["r1"] + c["r2"] + c["r3"] == q * q + 1
        and c["r1"] + (q + 1) * c["r2"] + (q * q + 1) * c["r3"] == target
        for c in counts
    )
    omegas = [[L for L in fam if np.isin(L, omega).all()] for fam in R.families]
    details["omega_sizes"] = [len(o) for o in omegas]
    clauses["iii_reguli"] = identity and all(len(o) >= q + 1 for o in omegas)
    qprime = np.unique([np.intersect1d(L1, L2)[0] for L1 in omegas[0] for L2 in omegas[1]]) \
        if omegas[0] and omegas[1] else np.array([], dtype=np.int64)
    details["q_prime_size"] = int(len(qprime))
    baer = baer_subgeometry(PolarityPair(qc)) if clauses["ii_permutable"] else None
    ok = baer is not None and baer.is_baer and bool(baer.contains(qprime).all())
    ok = ok and len(qprime) == (q + 1) ** 2 and bool(np.isin(qprime, omega).all())
    covered = np.zeros(len(sp.points), dtype=bool)
    for fam in omegas:
        for L in fam:
            if np.isin(L, qprime).sum() >= 2:
                covered[L] = True
    clauses["iv_subgeometry"] = bool(ok and covered[omega].all())
    return StructureReport("maximum", clauses, details)


def check_structure(qc: QuadricCoeffs) -> StructureReport:
    """Dispatch on the intersection size; other sizes raise WrongCardinality."""
    q = qc.field.q
    total = oracle.oracle_total(qc)
    if total == q * q + 1:
        return check_minimum_structure(qc)
    if total == 2 * q**3 + q * q + 1:
        return check_maximum_structure(qc)
    raise WrongCardinality(f"|H cap Q| = {total} is neither q^2+1 nor 2q^3+q^2+1")
