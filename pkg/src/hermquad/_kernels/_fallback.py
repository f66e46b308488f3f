"""Pure-Python kernels; same contract as the compiled ``_core`` module.

Coefficients are rows (a, b, c, d, e, f) of GF(q^2) codes x0 + q*x1.
"""

from __future__ import annotations

import numpy as np

from .tables import KernelTables, as_coeff_array


class _Ops:
    """GF(q) / GF(q^2) arithmetic on codes, bound to one table set."""

    def __init__(self, t: KernelTables):
        self.q = t.q
        self.nu = int(t.nu)
        self.add = t.add.tolist()
        self.mul = t.mul.tolist()
        self.neg = t.neg.tolist()
        self.inv = t.inv.tolist()
        self.chi = t.chi.tolist()

    def add2(self, a, b):
        q, add = self.q, self.add
        return add[(a % q) * q + b % q] + q * add[(a // q) * q + b // q]

    def mul2(self, a, b):
        q, add, mul = self.q, self.add, self.mul
        a0, a1, b0, b1 = a % q, a // q, b % q, b // q
        r0 = add[mul[a0 * q + b0] * q + mul[mul[a1 * q + b1] * q + self.nu]]
        r1 = add[mul[a0 * q + b1] * q + mul[a1 * q + b0]]
        return r0 + q * r1

    def frob2(self, a):
        q = self.q
        return a % q + q * self.neg[a // q]


def _on_both(ops: _Ops, co, J, X, Y, Z) -> bool:
    a, b, c, d, e, f = co
    m, s = ops.mul2, ops.add2
    herm_l = s(m(ops.frob2(Z), J), m(Z, ops.frob2(J)))
    herm_r = s(m(X, ops.frob2(X)), m(Y, ops.frob2(Y)))
    if herm_l != herm_r:
        return False
    rhs = s(s(s(m(a, m(X, X)), m(b, m(Y, Y))), s(m(c, m(X, Y)), m(d, m(X, J)))),
            s(m(e, m(Y, J)), m(f, m(J, J))))
    return m(J, Z) == rhs


def oracle_counts(t: KernelTables, coeffs) -> np.ndarray:
    """Brute-force |affine part| and |part at infinity| of H cap Q per row."""
    arr = as_coeff_array(coeffs)
    ops = _Ops(t)
    q2 = t.q * t.q
    m, s, fr = ops.mul2, ops.add2, ops.frob2
    sq = [m(x, x) for x in range(q2)]
    nrm = [m(x, fr(x)) for x in range(q2)]
    out = np.zeros((arr.shape[0], 2), dtype=np.int64)
    for row, co in enumerate(arr.tolist()):
        a, b, c, d, e, f = co
        affine = 0
        for x in range(q2):
            base_x = s(s(m(a, sq[x]), m(d, x)), f)
            cx = m(c, x)
            for y in range(q2):
                z = s(s(base_x, m(b, sq[y])), s(m(cx, y), m(e, y)))
                if s(z, fr(z)) == s(nrm[x], nrm[y]):
                    affine += 1
        # normalized points of J = 0: (0,1,Y,Z), (0,0,1,Z), (0,0,0,1)
        inf = 0
        for X, Y in [(1, y) for y in range(q2)] + [(0, 1)]:
            for Z in range(q2):
                if _on_both(ops, co, 0, X, Y, Z):
                    inf += 1
        if _on_both(ops, co, 0, 0, 0, 1):
            inf += 1
        out[row, 0] = affine
        out[row, 1] = inf
    return out


def build_matrix_a(ops: _Ops, co) -> list[list[int]]:
    """The 5x5 symmetric GF(q) matrix of the reduced quadric, as codes."""
    q, add, mul, neg, nu = ops.q, ops.add, ops.mul, ops.neg, ops.nu
    a, b, c, d, e, f = co
    a0, a1, b0, b1 = a % q, a // q, b % q, b // q
    c0, c1, d0, d1 = c % q, c // q, d % q, d // q
    e0, e1, f0 = e % q, e // q, f % q
    one = 1
    two = add[one * q + one]
    M = lambda x, y: mul[x * q + y]  # noqa: E731
    P = lambda x, y: add[x * q + y]  # noqa: E731
    A00 = P(M(two, a0), neg[one])
    A01 = M(two, M(nu, a1))
    A11 = M(P(M(two, a0), one), nu)
    A22 = P(M(two, b0), neg[one])
    A23 = M(two, M(nu, b1))
    A33 = M(P(M(two, b0), one), nu)
    nc1, nc0 = M(nu, c1), M(nu, c0)
    return [
        [A00, A01, c0, nc1, d0],
        [A01, A11, nc1, nc0, M(nu, d1)],
        [c0, nc1, A22, A23, e0],
        [nc1, nc0, A23, A33, M(nu, e1)],
        [d0, M(nu, d1), e0, M(nu, e1), M(two, f0)],
    ]


def diagonalize(ops: _Ops, A: list[list[int]], n: int) -> list[int]:
    """Congruence-diagonalize the leading n x n block; returns diagonal codes.

    Only determinant-one elementary operations are used, so the product of
    the returned entries equals the determinant.
    """
    q, add, mul, neg, inv = ops.q, ops.add, ops.mul, ops.neg, ops.inv
    A = [row[:n] for row in A[:n]]
    active = list(range(n))
    diag = []
    while active:
        piv = -1
        for i in active:
            if A[i][i]:
                piv = i
                break
        if piv < 0:
            pair = None
            for i in active:
                for j in active:
                    if i < j and A[i][j]:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                diag.extend(0 for _ in active)
                break
            i, j = pair
            for k in range(n):
                A[i][k] = add[A[i][k] * q + A[j][k]]
            for k in range(n):
                A[k][i] = add[A[k][i] * q + A[k][j]]
            piv = i
        p = A[piv][piv]
        pinv = inv[p]
        for i in active:
            if i == piv or not A[i][piv]:
                continue
            fct = mul[A[i][piv] * q + pinv]
            nf = neg[fct]
            for k in active:
                A[i][k] = add[A[i][k] * q + mul[nf * q + A[piv][k]]]
            for k in active:
                A[k][i] = add[A[k][i] * q + mul[nf * q + A[k][piv]]]
        diag.append(p)
        active.remove(piv)
    return diag


def _summary(ops: _Ops, diag: list[int]) -> tuple[int, int, int]:
    """(rank, character of core discriminant, determinant code)."""
    q, mul = ops.q, ops.mul
    rank = 0
    core = 1
    det = 1
    for x in diag:
        det = mul[det * q + x]
        if x:
            rank += 1
            core = mul[core * q + x]
    return rank, ops.chi[core], det


def classify_invariants(t: KernelTables, coeffs) -> np.ndarray:
    """Per row: rank A, rank A_inf, chi(core A), chi(core A_inf), det A_inf code."""
    arr = as_coeff_array(coeffs)
    ops = _Ops(t)
    out = np.zeros((arr.shape[0], 5), dtype=np.int64)
    for row, co in enumerate(arr.tolist()):
        A = build_matrix_a(ops, co)
        r_inf, chi_inf, det_inf = _summary(ops, diagonalize(ops, A, 4))
        r_a, chi_a, _ = _summary(ops, diagonalize(ops, A, 5))
        out[row] = (r_a, r_inf, chi_a, chi_inf, det_inf)
    return out
