import numpy as np
import pytest
from hypothesis import given, strategies as st

from hermquad import QuadricCoeffs, QuadricType, SizeLimit, quadric_type
from hermquad import oracle
from hermquad.canonical import family_abc
from hermquad.gf import field_for_q
from hermquad.varieties import on_hermitian, on_quadric, p_infinity

F3 = field_for_q(3)


def test_cone_example():
    qc = QuadricCoeffs.from_values(F3, a=2)
    s = oracle.intersection(qc)
    assert len(s.affine) == 27 and len(s.infinity) == 1 and s.total == 28
    assert oracle.count(qc) == {"affine": 27, "infinity": 1, "total": 28}


def test_points_lie_on_both():
    qc = QuadricCoeffs.from_values(F3, a=2, b=2, c=0, d=1, e=F3.eps, f=1)
    s = oracle.intersection(qc)
    pts = s.projective_points()
    assert len(pts) == len(set(pts)) == s.total
    assert p_infinity(F3) in s.infinity
    for P in pts:
        assert on_hermitian(P) and on_quadric(qc, P)


def test_hyperbolic_affine_range():
    total = oracle.count(QuadricCoeffs.from_values(F3, a=2, b=2))["affine"]
    assert 9 <= total <= 2 * 27 - 9


def test_origin_membership():
    for f in F3.fq2_elements():
        qc = QuadricCoeffs.from_values(F3, a=1, f=f)
        has = any(x.code == 0 and y.code == 0 for x, y, _ in oracle.enumerate_affine(qc))
        assert has == (f.frobenius() + f == F3.zero)


def test_twolines_infinity():
    for row in family_abc(F3, "hyp-twolines"):
        qc = QuadricCoeffs.from_codes(F3, list(row) + [0, 0, 0])
        assert len(oracle.enumerate_infinity(qc)) == 19


def test_elliptic_single_point_at_infinity():
    for row in family_abc(F3, "elliptic")[::50]:
        qc = QuadricCoeffs.from_codes(F3, list(row) + [1, 2, 3])
        assert oracle.enumerate_infinity(qc) == (p_infinity(F3),)


def test_store_limit():
    F = field_for_q(13)
    with pytest.raises(SizeLimit):
        oracle.enumerate_affine(QuadricCoeffs.from_values(F, a=1))


def test_kernel_matches_enumeration():
    rng = np.random.default_rng(1)
    rows = rng.integers(0, 9, size=(40, 6))
    rows[:, 0] = rows[:, 0] % 8 + 1  # a != 0
    counts = oracle.count_batch(F3, rows)
    for row, (aff, inf) in zip(rows.tolist(), counts.tolist()):
        s = oracle.intersection(QuadricCoeffs.from_codes(F3, row))
        assert (len(s.affine), len(s.infinity)) == (aff, inf)


def test_count_batch_partition_independent():
    F = field_for_q(5)
    rows = np.random.default_rng(2).integers(0, 25, size=(300, 6))
    rows[:, 1] = rows[:, 1] % 24 + 1
    serial = oracle.count_batch(F, rows)
    assert np.array_equal(serial, oracle.count_batch(F, rows, workers=2, chunk=64))


FIELDS = st.sampled_from([field_for_q(q) for q in (3, 5)])


@st.composite
def coeffs(draw):
    F = draw(FIELDS)
    n = F.q * F.q
    abc = draw(st.tuples(*[st.integers(0, n - 1)] * 3).filter(any))
    rest = draw(st.tuples(*[st.integers(0, n - 1)] * 3))
    return QuadricCoeffs.from_codes(F, abc + rest)


@given(coeffs())
def test_infinity_sizes(qc):
    q = qc.field.q
    inf = oracle.count(qc)["infinity"]
    assert inf in (1, q * q + 1, 2 * q * q + 1)
    t = quadric_type(qc)
    if inf == 2 * q * q + 1:
        assert t is QuadricType.HYPERBOLIC
    if t is QuadricType.ELLIPTIC:
        assert inf == 1


@given(coeffs(), st.data())
def test_trace_zero_shift(qc, data):
    F = qc.field
    zeros = [t for t in F.fq2_elements() if t.frobenius() + t == F.zero]
    assert len(zeros) == F.q
    t = data.draw(st.sampled_from(zeros))
    assert oracle.count(qc.replace(f=qc.f + t))["affine"] == oracle.count(qc)["affine"]


def test_out_of_range_codes_rejected():
    with pytest.raises(ValueError):
        oracle.count_batch(F3, [[9, 0, 0, 0, 0, 0]])
