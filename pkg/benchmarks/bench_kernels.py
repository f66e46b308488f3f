"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--rows N] [--repeat R]

Both backends get the same random coefficient rows; outputs are compared
before timing so a speedup is never reported for a wrong answer.
"""

import argparse
import time

import numpy as np

from hermquad._kernels import KernelTables, _fallback
from hermquad.gf import field_for_q

try:
    from hermquad._kernels import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--qs", type=int, nargs="+", default=[3, 5, 7])
    args = ap.parse_args()
    if _core is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    print(f"{'kernel':<20}{'q':>4}{'rows':>7}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for q in args.qs:
        t = KernelTables.from_field(field_for_q(q))
        rows = np.random.default_rng(q).integers(0, q * q, size=(args.rows, 6))
        rows = rows[rows[:, :3].any(axis=1)]
        for name in ("oracle_counts", "classify_invariants"):
            py, cy = getattr(_fallback, name), getattr(_core, name)
            # the pure oracle is O(q^4) per row: time it on a slice
            sub = rows if name == "classify_invariants" else rows[: max(4, args.rows // (q * q))]
            assert np.array_equal(py(t, sub), cy(t, sub)), f"{name} disagrees at q={q}"
            tp = best_of(lambda: py(t, sub), args.repeat)
            tc = best_of(lambda: cy(t, sub), args.repeat)
            print(f"{name:<20}{q:>4}{len(sub):>7}{tp:>12.4f}{tc:>12.6f}{tp / tc:>10.0f}x")


if __name__ == "__main__":
    main()
