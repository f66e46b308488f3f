import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hermquad import QuadricCoeffs, QuadricType, quadric_type
from hermquad import classifier, oracle
from hermquad.canonical import family_abc
from hermquad.gf import field_for_q, is_square_fq
from hermquad.linalg import det, rank
from hermquad.varieties import HermitianSurface

F3 = field_for_q(3)


def test_matrix_a_example():
    A = classifier.build_A(QuadricCoeffs.from_values(F3, a=2))
    diag = [0, 1, 2, 2, 0]
    for i, j in itertools.product(range(5), repeat=2):
        assert A.entries[i][j].code == (diag[i] if i == j else 0)


def test_matrix_a_symmetric_and_blocks():
    qc = QuadricCoeffs.from_codes(F3, [5, 7, 2, 3, 8, 4])
    A = classifier.build_A(qc)
    for i, j in itertools.product(range(5), repeat=2):
        assert A.entries[i][j] == A.entries[j][i]
    assert A.block("A") == [row[:2] for row in A.a_inf[:2]]
    assert A.block("B") == [row[2:] for row in A.a_inf[2:]]


@pytest.mark.parametrize("codes", [[2, 0, 0, 0, 0, 0], [5, 7, 2, 3, 8, 4], [1, 1, 1, 1, 1, 1]])
def test_xi_form_tracks_hermitian(codes):
    """X^T A X at (x0, x1, y0, y1, 1) vanishes iff (x, y, z(x, y)) lies on H."""
    qc = QuadricCoeffs.from_codes(F3, codes)
    A = classifier.build_A(qc)
    H = HermitianSurface(F3)
    for x, y in itertools.product(F3.fq2_elements(), repeat=2):
        z = qc.a * x * x + qc.b * y * y + qc.c * x * y + qc.d * x + qc.e * y + qc.f
        vanishes = not A.quadratic_form(x.x0, x.x1, y.x0, y.x1)
        assert vanishes == H.affine_contains(x, y, z)


def test_classify_cone_example():
    rep = classifier.classify(QuadricCoeffs.from_values(F3, a=2))
    assert (rep.rank_Ainf, rep.rank_A, rep.case) == (3, 3, "C6")
    assert (rep.affine_count, rep.cinf_count, rep.total) == (27, 1, 28)
    assert classifier.total_count(QuadricCoeffs.from_values(F3, a=2)) == 28


def test_classify_c4_example():
    a = next(x for x in F3.fq2_elements() if x.norm().code == 2)
    qc = QuadricCoeffs(a, F3.zero, F3.zero, F3.zero, F3.zero, F3.zero)
    rep = classifier.classify(qc)
    assert rep.det_Ainf.code == 2 and not rep.det_is_square
    assert (rep.rank_A, rep.case, rep.affine_count, rep.total) == (4, "C4", 21, 22)
    assert oracle.oracle_total(qc) == 22


def test_case_table_counts():
    q = 5
    want = {"C1": q**3 - q, "C2": q**3 + q, "C3": q**3 + q * q - q, "C4": q**3 - q * q + q,
            "C5-hyperbolic-cone": q**3 + q * q, "C5-elliptic-cone": q**3 - q * q, "C6": q**3,
            "C7-plane-pair": q**3 - q * q, "C7-line": q**3 + q * q,
            "C8-plane-pair": 2 * q**3 - q * q, "C8-line": q * q}
    for label, n in want.items():
        assert classifier.affine_count_for_case(q, label) == n


def test_infinity_closed_forms():
    q = 3
    for row in family_abc(F3, "cone-line"):
        qc = QuadricCoeffs.from_codes(F3, list(row) + [0, 0, 0])
        assert qc.c.norm() == -4 * qc.a.norm()
        assert classifier.count_infinity(qc) == q * q + 1
    for row in family_abc(F3, "hyp-twolines"):
        qc = QuadricCoeffs.from_codes(F3, list(row) + [0, 0, 0])
        s = next(x for x in F3.fq2_elements() if x * x == -4 * qc.a * qc.b)
        assert s.norm() == -4 * qc.a.norm()
        assert classifier.count_infinity(qc) == 2 * q * q + 1
    for row in family_abc(F3, "elliptic")[::40]:
        assert classifier.count_infinity(QuadricCoeffs.from_codes(F3, list(row) + [0, 0, 0])) == 1


def test_cone_line_and_twolines_determinants():
    for row in family_abc(F3, "cone-line"):
        qc = QuadricCoeffs.from_codes(F3, list(row) + [1, 2, 4])
        rep = classifier.classify(qc)
        assert rep.det_Ainf.code == 1 and rep.case in ("C1", "C3")
    for row in family_abc(F3, "hyp-twolines"):
        qc = QuadricCoeffs.from_codes(F3, list(row) + [1, 2, 4])
        t = 4 * qc.a.norm() - 1
        assert classifier.classify(qc).det_Ainf == t * t


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_det_formula_matches_elimination(q):
    F = field_for_q(q)
    rng = np.random.default_rng(q)
    for row in rng.integers(0, q * q, size=(150, 6)).tolist():
        if not any(row[:3]):
            continue
        qc = QuadricCoeffs.from_codes(F, row)
        by_elim = det(classifier.build_A(qc).a_inf)
        assert by_elim == classifier.det_a_inf_closed_form(qc)
        assert classifier.invariants(qc)[4] == by_elim
        formula = classifier.det_a_inf_formula(qc)
        assert is_square_fq(by_elim) == is_square_fq(formula)
        if F.nu * F.nu == F.fq(1):
            assert by_elim == formula


def test_det_single_coefficient():
    F = field_for_q(5)
    for a in F.fq2_elements():
        if not a:
            continue
        qc = QuadricCoeffs(a, F.zero, F.zero, F.zero, F.zero, F.zero)
        assert det(classifier.build_A(qc).a_inf) == F.nu * F.nu * (1 - 4 * a.norm())


def test_rank_via_kernel_matches_linalg():
    F = field_for_q(5)
    rng = np.random.default_rng(9)
    for row in rng.integers(0, 25, size=(200, 6)).tolist():
        if not any(row[:3]):
            continue
        qc = QuadricCoeffs.from_codes(F, row)
        A = classifier.build_A(qc)
        r_a, r_inf, *_ = classifier.invariants(qc)
        assert (r_a, r_inf) == (rank(A.rows()), rank(A.a_inf))


def test_xi_inf_rank_two_sizes():
    q = 3
    seen = set()
    for abc in itertools.product(range(9), repeat=3):
        if not any(abc):
            continue
        qc = QuadricCoeffs.from_codes(F3, list(abc) + [0, 0, 0])
        if classifier.invariants(qc)[1] != 2:
            continue
        assert quadric_type(qc) is QuadricType.HYPERBOLIC
        cinf = classifier.count_infinity(qc)
        want = {2 * q * q + 1: 2 * q * q + q + 1, 1: q + 1}[cinf]
        assert classifier.xi_inf_size(qc) == want
        seen.add(cinf)
    assert seen == {1, 2 * q * q + 1}


def test_batch_matches_scalar():
    F = field_for_q(7)
    rng = np.random.default_rng(3)
    rows = rng.integers(0, 49, size=(300, 6))
    rows = rows[rows[:, :3].any(axis=1)]
    out = classifier.classify_batch(F, rows)
    for i, row in enumerate(rows[:60].tolist()):
        rep = classifier.classify(QuadricCoeffs.from_codes(F, row))
        assert classifier.CASE_LABELS[out["case"][i]] == rep.case
        assert out["total"][i] == rep.total


FIELDS = st.sampled_from([field_for_q(q) for q in (3, 5, 9)])


@st.composite
def coeffs(draw):
    F = draw(FIELDS)
    n = F.q * F.q
    abc = draw(st.tuples(*[st.integers(0, n - 1)] * 3).filter(any))
    rest = draw(st.tuples(*[st.integers(0, n - 1)] * 3))
    return QuadricCoeffs.from_codes(F, abc + rest)


@given(coeffs())
def test_classifier_equals_oracle(qc):
    rep = classifier.classify(qc)
    cnt = oracle.count(qc)
    assert (rep.affine_count, rep.cinf_count) == (cnt["affine"], cnt["infinity"])
    assert rep.total == rep.affine_count + rep.cinf_count


@given(coeffs())
def test_structural_lemmas(qc):
    rep = classifier.classify(qc)
    assert rep.rank_Ainf >= 2
    if rep.rank_Ainf == 2 or rep.case.startswith(("C7", "C8")):
        assert rep.quadric_type is QuadricType.HYPERBOLIC
    assert rep.det_is_square == (bool(rep.det_Ainf) and is_square_fq(rep.det_Ainf))
