"""Exact dense linear algebra over GF(q) or GF(q^2) element objects.

Matrices are lists of rows.  Pivots are always the first nonzero entry in
column order so results are reproducible.
"""

from __future__ import annotations

from typing import Sequence


def _zero_like(M):
    x = M[0][0]
    return x - x


def copy(M):
    return [list(row) for row in M]


def rank(M) -> int:
    A = copy(M)
    n_rows, n_cols = len(A), len(A[0])
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, n_rows) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][col].inverse()
        for i in range(r + 1, n_rows):
            if A[i][col]:
                f = A[i][col] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == n_rows:
            break
    return r


def det(M):
    A = copy(M)
    n = len(A)
    result = _zero_like(A) + 1
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            return _zero_like(A)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            result = -result
        result = result * A[col][col]
        inv = A[col][col].inverse()
        for i in range(col + 1, n):
            if A[i][col]:
                f = A[i][col] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return result


def diagonalize_symmetric(M) -> list:
    """Diagonal entries of a congruent diagonal form of a symmetric matrix.

    Odd characteristic only.  The returned list has one entry per variable;
    the number of nonzero entries is the rank and their product is the
    discriminant of the nondegenerate part (up to squares).
    """
    A = copy(M)
    n = len(A)
    diag = []
    active = list(range(n))
    while active:
        piv = next((i for i in active if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active
                         if i < j and A[i][j]), None)
            if pair is None:
                diag.extend(A[i][i] for i in active)
                break
            i, j = pair
            # x_i -> x_i + x_j makes the (i, i) entry 2*A[i][j] != 0
            for k in range(n):
                A[i][k] = A[i][k] + A[j][k]
            for k in range(n):
                A[k][i] = A[k][i] + A[k][j]
            piv = i
        p = A[piv][piv]
        inv = p.inverse()
        for i in active:
            if i != piv and A[i][piv]:
                f = A[i][piv] * inv
                for k in active:
                    A[i][k] = A[i][k] - f * A[piv][k]
                for k in active:
                    A[k][i] = A[k][i] - f * A[k][piv] if k != i else A[k][i]
        for i in active:
            if i != piv:
                A[i][piv] = A[piv][i] = _zero_like(A)
        diag.append(p)
        active.remove(piv)
    return diag


def nullspace(M) -> list[list]:
    """Basis of {v : M v = 0}, one vector per free column."""
    A = copy(M)
    n_rows, n_cols = len(A), len(A[0])
    zero = _zero_like(A)
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, n_rows) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][col].inverse()
        A[r] = [a * inv for a in A[r]]
        for i in range(n_rows):
            if i != r and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    basis = []
    for free in (c for c in range(n_cols) if c not in pivots):
        v = [zero] * n_cols
        v[free] = zero + 1
        for row, pc in enumerate(pivots):
            v[pc] = -A[row][free]
        basis.append(v)
    return basis


def inverse(M):
    n = len(M)
    zero = _zero_like(M)
    one = zero + 1
    A = [list(row) + [one if i == j else zero for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [a * inv for a in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return [row[n:] for row in A]


def matmul(A, B):
    zero = _zero_like(A)
    cols = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in cols:
            acc = zero
            for a, b in zip(row, col):
                acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(A, v: Sequence):
    zero = _zero_like(A)
    out = []
    for row in A:
        acc = zero
        for a, b in zip(row, v):
            acc = acc + a * b
        out.append(acc)
    return out


def quadratic_value(A, v: Sequence):
    """v^T A v."""
    w = matvec(A, v)
    acc = w[0] - w[0]
    for a, b in zip(v, w):
        acc = acc + a * b
    return acc


def is_scalar_matrix(M) -> bool:
    """True iff M is a nonzero multiple of the identity.

    Compares every entry with the first nonzero diagonal entry.
    """
    n = len(M)
    lam = next((M[i][i] for i in range(n) if M[i][i]), None)
    if lam is None:
        return False
    zero = lam - lam
    return all(M[i][j] == (lam if i == j else zero)
               for i in range(n) for j in range(n))
