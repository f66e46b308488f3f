"""Normal-form families of tangent quadrics and the intersection-size spectra.

Up to the stabilizer of P_inf in PGU(4, q) every quadric of the family can be
brought to one of six normal forms, indexed by its type and the shape of its
part at infinity C_inf:

    hyp-point     b = 0, c != 0, N(c) != -N(a)        C_inf = {P_inf}
    hyp-line      b = 0, c = beta^((q-1)/2) a          C_inf = one line
    hyp-twolines  b = -beta^(q-1) a, c = 0             C_inf = two lines
    cone-point    b = c = 0                            C_inf = {P_inf}
    cone-line     b = beta^(q-1) a, c = 2 beta^((q-1)/2) a   C_inf = one line
    elliptic      4ab - c^2 a nonsquare                C_inf = {P_inf}

(d, e, f) are free in every family.  Scans run the classifier in batches;
each size is checked once against the brute-force oracle on its witness.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator

import numpy as np

from . import classifier, oracle
from .gf import FieldParams, VectorOps, field_for_q
from .varieties import QuadricCoeffs, QuadricType

FAMILY_TAGS = ("hyp-point", "hyp-line", "hyp-twolines", "cone-point", "cone-line", "elliptic")

TYPE_FAMILIES = {
    QuadricType.ELLIPTIC: ("elliptic",),
    QuadricType.HYPERBOLIC: ("hyp-point", "hyp-line", "hyp-twolines"),
    QuadricType.CONE: ("cone-point", "cone-line"),
}

# declared (type, number of lines of H cap Q through P_inf at infinity)
FAMILY_SHAPE = {
    "hyp-point": (QuadricType.HYPERBOLIC, 0),
    "hyp-line": (QuadricType.HYPERBOLIC, 1),
    "hyp-twolines": (QuadricType.HYPERBOLIC, 2),
    "cone-point": (QuadricType.CONE, 0),
    "cone-line": (QuadricType.CONE, 1),
    "elliptic": (QuadricType.ELLIPTIC, 0),
}

RNG_ALGORITHM = "numpy.PCG64"
BLOCK_ROWS = 1 << 16
DEFAULT_TARGET_BUDGET = 200_000


# -- expected spectra -------------------------------------------------------------

def theorem_sizes(q: int, qtype: QuadricType | str) -> tuple[int, ...]:
    """Intersection sizes listed by the classification theorem (cone list is for q > 3)."""
    qtype = QuadricType(qtype)
    q2, q3 = q * q, q**3
    base = [q3 - q2 + 1, q3 - q2 + q + 1, q3 - q + 1, q3 + 1, q3 + q + 1,
            q3 + q2 - q + 1, q3 + q2 + 1]
    if qtype is QuadricType.ELLIPTIC:
        return tuple(sorted(base))
    if qtype is QuadricType.CONE:
        return tuple(sorted(base + [q3 + 2 * q2 - q + 1]))
    return tuple(sorted(base + [q2 + 1, q3 + 2 * q2 - q + 1, q3 + 2 * q2 + 1,
                                q3 + 3 * q2 - q + 1, 2 * q3 + q2 + 1]))


def cone_sizes_from_cases(q: int) -> tuple[int, ...]:
    """Cone sizes assembled case by case.

    With C_inf a point the affine part can be in cases C1..C6, except that for
    q = 3 the determinant of A_inf is 1 - 4 N(a) and cannot be a nonzero
    square, which removes C1 and C3.  With C_inf a line only C1 and C3 occur.
    """
    point_cases = ["C1", "C2", "C3", "C4", "C5-hyperbolic-cone", "C5-elliptic-cone", "C6"]
    if q == 3:
        point_cases = [c for c in point_cases if c not in ("C1", "C3")]
    sizes = {classifier.affine_count_for_case(q, c) + 1 for c in point_cases}
    sizes |= {classifier.affine_count_for_case(q, c) + q * q + 1 for c in ("C1", "C3")}
    return tuple(sorted(sizes))


def expected_sizes(q: int, qtype: QuadricType | str) -> tuple[int, ...]:
    qtype = QuadricType(qtype)
    if qtype is QuadricType.CONE and q == 3:
        return cone_sizes_from_cases(q)
    return theorem_sizes(q, qtype)


# -- families -----------------------------------------------------------------------

def _ordered_codes(F: FieldParams) -> np.ndarray:
    return np.asarray(F.fq2_order, dtype=np.int64)


def abc_type_table(F: FieldParams) -> np.ndarray:
    """Type code of every (a, b, c), indexed [a, b, c] by code.

    0 elliptic, 1 hyperbolic, 2 cone, -1 for (0, 0, 0).
    """
    cached = getattr(F, "_abc_types", None)
    if cached is not None:
        return cached
    V = VectorOps(F)
    n = F.q * F.q
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    delta = V.sub(V.scale_int(4, V.mul(a, b)), V.mul(c, c))
    out = np.where(delta == 0, 2, np.where(V.is_square(delta), 1, 0))
    out[0, 0, 0] = -1
    F._abc_types = out
    return out


def family_abc(F: FieldParams, tag: str) -> np.ndarray:
    """All admissible (a, b, c) of a family, shape (m, 3), in documented order."""
    if tag not in FAMILY_TAGS:
        raise ValueError(f"unknown family {tag!r}")
    q = F.q
    V = VectorOps(F)
    order = _ordered_codes(F)
    nonzero = order[order != 0]
    half = F.pow2(F.beta_code, (q - 1) // 2)
    full = F.pow2(F.beta_code, q - 1)
    zeros = np.zeros_like(nonzero)
    if tag == "hyp-point":
        a, c = np.meshgrid(order, nonzero, indexing="ij")
        a, c = a.ravel(), c.ravel()
        # N(c) != -N(a) in GF(q)
        keep = _add_fq(F, V.norm(c), V.norm(a)) != 0
        return np.stack([a[keep], np.zeros(keep.sum(), dtype=np.int64), c[keep]], axis=1)
    if tag == "hyp-line":
        return np.stack([nonzero, zeros, V.mul(half, nonzero)], axis=1)
    if tag == "hyp-twolines":
        return np.stack([nonzero, V.neg(V.mul(full, nonzero)), zeros], axis=1)
    if tag == "cone-point":
        return np.stack([nonzero, zeros, zeros], axis=1)
    if tag == "cone-line":
        return np.stack([nonzero, V.mul(full, nonzero), V.scale_int(2, V.mul(half, nonzero))], axis=1)
    types = abc_type_table(F)
    a, b, c = np.meshgrid(order, order, order, indexing="ij")
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    keep = types[a, b, c] == 0
    return np.stack([a[keep], b[keep], c[keep]], axis=1)


def _add_fq(F: FieldParams, x, y):
    """Elementwise GF(q) addition of code arrays."""
    add = np.asarray(F._add, dtype=np.int64).reshape(F.q, F.q)
    return add[x, y]


def _def_grid(F: FieldParams) -> np.ndarray:
    order = _ordered_codes(F)
    d, e, f = np.meshgrid(order, order, order, indexing="ij")
    return np.stack([d.ravel(), e.ravel(), f.ravel()], axis=1)


def _exhaustive_blocks(F: FieldParams, abc: np.ndarray) -> Iterator[np.ndarray]:
    """abc-major, then (d, e, f) row-major; blocks of whole abc groups."""
    grid = _def_grid(F)
    per = max(1, BLOCK_ROWS // len(grid))
    for start in range(0, len(abc), per):
        chunk = abc[start:start + per]
        rows = np.empty((len(chunk) * len(grid), 6), dtype=np.int64)
        rows[:, :3] = np.repeat(chunk, len(grid), axis=0)
        rows[:, 3:] = np.tile(grid, (len(chunk), 1))
        yield rows


def _sampled_rows(F: FieldParams, tags: tuple[str, ...], n: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """n uniform draws: family uniform among ``tags``, then parameters uniform."""
    abcs = [family_abc(F, t) for t in tags]
    n2 = F.q * F.q
    remaining = n
    while remaining > 0:
        m = min(remaining, BLOCK_ROWS)
        fam = rng.integers(0, len(tags), size=m)
        rows = np.empty((m, 6), dtype=np.int64)
        for i, abc in enumerate(abcs):
            sel = np.flatnonzero(fam == i)
            rows[sel, :3] = abc[rng.integers(0, len(abc), size=len(sel))]
        rows[:, 3:] = rng.integers(0, n2, size=(m, 3))
        remaining -= m
        yield rows


def _targeted_rows(F: FieldParams, tags: tuple[str, ...]) -> Iterator[np.ndarray]:
    """Every (a, b, c) of each family with d = e = 0 and f in GF(q).

    Then A is A_inf plus the single entry 2 f0, so every rank pattern the
    part at infinity admits is reached.
    """
    fs = np.asarray(F.fq_order, dtype=np.int64)
    for tag in tags:
        abc = family_abc(F, tag)
        per = max(1, BLOCK_ROWS // len(fs))
        for start in range(0, len(abc), per):
            chunk = abc[start:start + per]
            rows = np.zeros((len(chunk) * len(fs), 6), dtype=np.int64)
            rows[:, :3] = np.repeat(chunk, len(fs), axis=0)
            rows[:, 5] = np.tile(fs, len(chunk))
            yield rows


def _all_rows(F: FieldParams, qtype: QuadricType) -> np.ndarray:
    """Every (a, b, c) of the given type, in documented order (unrestricted scan)."""
    code = {QuadricType.ELLIPTIC: 0, QuadricType.HYPERBOLIC: 1, QuadricType.CONE: 2}[qtype]
    types = abc_type_table(F)
    order = _ordered_codes(F)
    a, b, c = np.meshgrid(order, order, order, indexing="ij")
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    keep = types[a, b, c] == code
    return np.stack([a[keep], b[keep], c[keep]], axis=1)


def enumerate_family(tag: str, q: int, budget: int | str = "exhaustive", seed: int = 0) -> Iterator[QuadricCoeffs]:
    """Stream the quadrics of one normal-form family.

    ``budget="exhaustive"`` yields every (a, b, c, d, e, f) of the family
    once; an integer yields that many uniform independent draws.
    """
    F = field_for_q(q)
    if budget == "exhaustive":
        blocks: Iterable[np.ndarray] = _exhaustive_blocks(F, family_abc(F, tag))
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        blocks = _sampled_rows(F, (tag,), int(budget), rng)
    for rows in blocks:
        for row in rows.tolist():
            yield QuadricCoeffs.from_codes(F, row)


# -- spectrum scanning ------------------------------------------------------------------

@dataclass
class SpectrumResult:
    q: int
    quadric_type: QuadricType
    mode: str  # "exhaustive" or "sampled(n)"
    scope: str  # "families" or "all"
    achieved: tuple[int, ...] = ()
    witnesses: dict[int, QuadricCoeffs] = dc_field(default_factory=dict)
    frequencies: dict[int, int] = dc_field(default_factory=dict)
    instances: int = 0
    targeted_instances: int = 0
    oracle_mismatches: list[dict] = dc_field(default_factory=list)
    rng: dict | None = None

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "quadric_type": self.quadric_type.value,
            "mode": self.mode,
            "scope": self.scope,
            "achieved": list(self.achieved),
            "witnesses": {str(k): self.witnesses[k].to_dict() for k in sorted(self.witnesses)},
            "frequencies": {str(k): self.frequencies[k] for k in sorted(self.frequencies)},
            "instances": self.instances,
            "targeted_instances": self.targeted_instances,
            "oracle_mismatches": self.oracle_mismatches,
            "rng": self.rng,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quadric_type", "size", "frequency", "a", "b", "c", "d", "e", "f"])
        for size in self.achieved:
            wit = self.witnesses[size].to_dict()
            w.writerow([self.quadric_type.value, size, self.frequencies.get(size, 0)]
                       + [wit[k] for k in "abcdef"])
        return buf.getvalue()


class _Accumulator:
    def __init__(self, F: FieldParams):
        self.F = F
        self.inf_table = classifier.InfinityTable(F)
        self.freq: dict[int, int] = {}
        self.witness_rows: dict[int, list[int]] = {}
        self.n = 0

    def feed(self, rows: np.ndarray) -> None:
        if len(rows) == 0:
            return
        totals = classifier.classify_batch(self.F, rows, self.inf_table)["total"]
        sizes, first, counts = np.unique(totals, return_index=True, return_counts=True)
        for s, i, c in zip(sizes.tolist(), first.tolist(), counts.tolist()):
            self.freq[s] = self.freq.get(s, 0) + c
            if s not in self.witness_rows:
                self.witness_rows[s] = rows[i].tolist()
        self.n += len(rows)


def _finish(acc: _Accumulator, result: SpectrumResult) -> SpectrumResult:
    F = acc.F
    result.achieved = tuple(sorted(acc.freq))
    result.frequencies = dict(sorted(acc.freq.items()))
    result.witnesses = {s: QuadricCoeffs.from_codes(F, acc.witness_rows[s]) for s in result.achieved}
    if result.witnesses:
        sizes = list(result.witnesses)
        counts = oracle.count_batch(F, [acc.witness_rows[s] for s in sizes]).sum(axis=1)
        for s, got in zip(sizes, counts.tolist()):
            if got != s:
                result.oracle_mismatches.append(
                    {"size": s, "oracle": got, "coeffs": result.witnesses[s].to_dict()})
    return result


def spectrum(
    q: int,
    quadric_type: QuadricType | str,
    mode: str = "exhaustive",
    samples: int = 1_000_000,
    seed: int = 0,
    scope: str = "families",
    targeted: bool = True,
    target_budget: int = DEFAULT_TARGET_BUDGET,
) -> SpectrumResult:
    """Achieved intersection sizes for one quadric type.

    ``scope="families"`` scans the normal forms; ``scope="all"`` scans every
    coefficient tuple of the type (exhaustive mode only).  In sampled mode a
    targeted search runs afterwards if some expected size is still missing.
    """
    F = field_for_q(q)
    qtype = QuadricType(quadric_type)
    tags = TYPE_FAMILIES[qtype]
    acc = _Accumulator(F)
    if mode == "exhaustive":
        result = SpectrumResult(q, qtype, "exhaustive", scope)
        abc = _all_rows(F, qtype) if scope == "all" else np.concatenate([family_abc(F, t) for t in tags])
        for rows in _exhaustive_blocks(F, abc):
            acc.feed(rows)
        result.instances = acc.n
        return _finish(acc, result)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if scope != "families":
        raise ValueError("sampled scans draw from the normal-form families only")
    stream = list(QuadricType).index(qtype)
    ss = np.random.SeedSequence(seed).spawn(len(QuadricType))[stream]
    rng = np.random.Generator(np.random.PCG64(ss))
    result = SpectrumResult(q, qtype, f"sampled({samples})", scope,
                            rng={"algorithm": RNG_ALGORITHM, "seed": seed, "stream": stream})
    for rows in _sampled_rows(F, tags, samples, rng):
        acc.feed(rows)
    result.instances = acc.n
    if targeted and not set(expected_sizes(q, qtype)) <= set(acc.freq):
        before = acc.n
        for rows in _targeted_rows(F, tags):
            if acc.n - before >= target_budget:
                break
            acc.feed(rows[: target_budget - (acc.n - before)])
            if set(expected_sizes(q, qtype)) <= set(acc.freq):
                break
        result.targeted_instances = acc.n - before
    return _finish(acc, result)


# -- theorem verification --------------------------------------------------------------

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


@dataclass
class TypeVerdict:
    expected: tuple[int, ...]
    spectra: list[SpectrumResult]
    status: str
    missing: tuple[int, ...]
    unexpected: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "expected": list(self.expected),
            "missing": list(self.missing),
            "unexpected": list(self.unexpected),
            "status": self.status,
            "scans": [s.to_dict() for s in self.spectra],
        }


@dataclass
class VerifyReport:
    q: int
    field: FieldParams
    mode: str
    verdicts: dict[QuadricType, TypeVerdict]

    @property
    def status(self) -> str:
        states = [v.status for v in self.verdicts.values()]
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    def to_dict(self) -> dict:
        return {
            "command": "verify",
            "field": self.field.describe(),
            "mode": self.mode,
            "status": self.status,
            "types": {t.value: v.to_dict() for t, v in self.verdicts.items()},
        }

    def to_csv(self) -> str:
        out = []
        for v in self.verdicts.values():
            for i, s in enumerate(v.spectra):
                text = s.to_csv()
                out.append(text if not out else text.split("\n", 1)[1])
        return "".join(out)


def _verdict(q: int, qtype: QuadricType, spectra: list[SpectrumResult], exhaustive: bool) -> TypeVerdict:
    expected = expected_sizes(q, qtype)
    exp = set(expected)
    status = PASS
    missing: set[int] = set()
    unexpected: set[int] = set()
    for s in spectra:
        got = set(s.achieved)
        missing |= exp - got
        unexpected |= got - exp
        if s.oracle_mismatches:
            status = FAIL
    if unexpected or (exhaustive and missing):
        status = FAIL
    elif missing and status != FAIL:
        status = INCONCLUSIVE
    return TypeVerdict(expected, spectra, status, tuple(sorted(missing)), tuple(sorted(unexpected)))


# unrestricted scans are run alongside the family scans when q^12 is at most this
ALL_SCOPE_MAX_ROWS = 1_000_000


def verify_theorem(
    q: int,
    mode: str = "exhaustive",
    samples: int = 1_000_000,
    seed: int = 0,
    target_budget: int = DEFAULT_TARGET_BUDGET,
    include_all: bool | None = None,
) -> VerifyReport:
    """Compare achieved spectra of all three quadric types with the expected lists."""
    F = field_for_q(q)
    if include_all is None:
        include_all = mode == "exhaustive" and (q * q) ** 6 <= ALL_SCOPE_MAX_ROWS
    verdicts = {}
    for qtype in (QuadricType.ELLIPTIC, QuadricType.HYPERBOLIC, QuadricType.CONE):
        if mode == "exhaustive":
            scans = [spectrum(q, qtype, "exhaustive")]
            if include_all:
                scans.append(spectrum(q, qtype, "exhaustive", scope="all"))
        else:
            scans = [spectrum(q, qtype, "sampled", samples=samples, seed=seed,
                              target_budget=target_budget)]
        verdicts[qtype] = _verdict(q, qtype, scans, mode == "exhaustive")
    label = "exhaustive" if mode == "exhaustive" else f"sampled({samples})"
    return VerifyReport(q, F, label, verdicts)


def frozen_cone_sizes_q3() -> tuple[int, ...]:
    """q = 3 cone spectrum recorded from a brute-force count of every cone tuple."""
    import json
    from importlib import resources

    text = resources.files("hermquad").joinpath("data/q3_cone_spectrum.json").read_text()
    return tuple(json.loads(text)["sizes"])
