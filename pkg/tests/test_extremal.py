import collections

import numpy as np
import pytest

from hermquad import QuadricCoeffs, SingularGram, WrongCardinality
from hermquad import canonical, classifier, extremal
from hermquad.gf import field_for_q
from hermquad.linalg import matmul

F3 = field_for_q(3)


def _instances(size, limit=None):
    rows = np.concatenate(list(canonical._exhaustive_blocks(
        F3, canonical.family_abc(F3, "hyp-point") if size == 10 else canonical.family_abc(F3, "hyp-twolines"))))
    tot = classifier.classify_batch(F3, rows)["total"]
    sel = rows[tot == size]
    return [QuadricCoeffs.from_codes(F3, r) for r in sel[:limit].tolist()]


def test_permutable_example():
    assert extremal.is_permutable(QuadricCoeffs.from_values(F3, a=2, b=2))


def test_permutable_scale_invariant():
    qc = QuadricCoeffs.from_values(F3, a=2, b=2, d=1, f=F3.eps)
    pair = extremal.PolarityPair(qc)
    scaled = [[2 * x for x in row] for row in pair.M_Q]
    pair2 = extremal.PolarityPair(qc)
    pair2.M_Q = scaled
    assert extremal.linalg.is_scalar_matrix(pair.psi_squared()) == \
        extremal.linalg.is_scalar_matrix(pair2.psi_squared())


def test_not_permutable_fixture():
    qc = QuadricCoeffs.from_values(F3, a=1, b=F3.fq2(0, 1), c=1, d=F3.fq2(1, 1), f=F3.fq2(2, 1))
    assert not extremal.is_permutable(qc)


def test_cone_has_no_psi():
    with pytest.raises(SingularGram):
        extremal.is_permutable(QuadricCoeffs.from_values(F3, a=2))


def test_psi_matrix():
    qc = QuadricCoeffs.from_values(F3, a=2, b=2)
    pair = extremal.PolarityPair(qc)
    assert matmul(pair.M_Q, pair.psi_matrix) == pair.M_H


def test_wrong_cardinality():
    with pytest.raises(WrongCardinality):
        extremal.check_minimum_structure(QuadricCoeffs.from_values(F3, a=2))
    qc19 = canonical.spectrum(3, "elliptic").witnesses[19]
    with pytest.raises(WrongCardinality):
        extremal.check_minimum_structure(qc19)
    with pytest.raises(WrongCardinality):
        extremal.check_maximum_structure(qc19)
    with pytest.raises(WrongCardinality):
        extremal.check_structure(qc19)


def test_minimum_instances():
    for qc in _instances(10, limit=20):
        rep = extremal.check_minimum_structure(qc)
        assert rep.passed, rep.to_dict()
        assert rep.details["fixed_points"] == 40


def test_maximum_instances():
    for qc in _instances(64, limit=20):
        rep = extremal.check_maximum_structure(qc)
        assert rep.passed, rep.to_dict()
        for c in rep.details["regulus_counts"]:
            assert c["r1"] + 4 * c["r2"] + 10 * c["r3"] == 64


def test_reguli_shape():
    qc = QuadricCoeffs.from_values(F3, a=2, b=2, f=1)
    R = extremal.reguli(qc)
    assert len(R.points) == 100
    for fam in R.families:
        assert len(fam) == 10
        assert len({tuple(L) for L in fam}) == 10
        assert sorted(np.concatenate(fam).tolist()) == sorted(R.points.tolist())
    for L1 in R.families[0]:
        for L2 in R.families[1]:
            assert len(np.intersect1d(L1, L2)) == 1


def test_line_meets_hermitian():
    sizes = extremal.random_line_hermitian_sizes(F3, 400, seed=1)
    assert set(sizes) <= {1, 4, 10}
    assert collections.Counter(sizes)[4] > 0


def test_baer_subgeometry_frame():
    qc = _instances(10, limit=1)[0]
    baer = extremal.baer_subgeometry(extremal.PolarityPair(qc))
    assert baer.is_baer and baer.frame.shape == (5, 4)
