import os
import subprocess
import sys

import numpy as np
import pytest

from hermquad import _kernels
from hermquad._kernels import _fallback
from hermquad.gf import field_for_q

core = pytest.importorskip("hermquad._kernels._core")


@pytest.mark.parametrize("q", [3, 5, 9])
def test_core_matches_fallback(q):
    F = field_for_q(q)
    t = _kernels.KernelTables.from_field(F)
    rows = np.random.default_rng(q).integers(0, q * q, size=(120, 6))
    rows = rows[rows[:, :3].any(axis=1)]
    assert np.array_equal(core.oracle_counts(t, rows), _fallback.oracle_counts(t, rows))
    assert np.array_equal(core.classify_invariants(t, rows), _fallback.classify_invariants(t, rows))


def test_empty_batch():
    F = field_for_q(3)
    t = _kernels.KernelTables.from_field(F)
    assert _kernels.oracle_counts(t, np.zeros((0, 6), dtype=np.int64)).shape == (0, 2)


def test_pure_switch():
    env = dict(os.environ, HERMQUAD_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import hermquad; print(hermquad.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_bad_shape():
    with pytest.raises(ValueError):
        _kernels.as_coeff_array(np.zeros((3, 5)))
