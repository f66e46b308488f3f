# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels; mirrors ``_fallback`` exactly."""

import numpy as np
cimport numpy as cnp

from .tables import as_coeff_array

cnp.import_array()


cdef struct Ctx:
    int q
    int nu
    int* add
    int* mul
    int* neg
    int* inv
    int* chi


cdef inline int add2(Ctx* c, int a, int b) nogil:
    cdef int q = c.q
    return c.add[(a % q) * q + b % q] + q * c.add[(a // q) * q + b // q]


cdef inline int mul2(Ctx* c, int a, int b) nogil:
    cdef int q = c.q
    cdef int a0 = a % q, a1 = a // q, b0 = b % q, b1 = b // q
    cdef int r0 = c.add[c.mul[a0 * q + b0] * q + c.mul[c.mul[a1 * q + b1] * q + c.nu]]
    cdef int r1 = c.add[c.mul[a0 * q + b1] * q + c.mul[a1 * q + b0]]
    return r0 + q * r1


cdef inline int frob2(Ctx* c, int a) nogil:
    return a % c.q + c.q * c.neg[a // c.q]


cdef inline bint on_both(Ctx* c, long* co, int J, int X, int Y, int Z) nogil:
    cdef int a = co[0], b = co[1], cc = co[2], d = co[3], e = co[4], f = co[5]
    cdef int hl = add2(c, mul2(c, frob2(c, Z), J), mul2(c, Z, frob2(c, J)))
    cdef int hr = add2(c, mul2(c, X, frob2(c, X)), mul2(c, Y, frob2(c, Y)))
    if hl != hr:
        return False
    cdef int rhs = add2(c,
        add2(c, add2(c, mul2(c, a, mul2(c, X, X)), mul2(c, b, mul2(c, Y, Y))),
                add2(c, mul2(c, cc, mul2(c, X, Y)), mul2(c, d, mul2(c, X, J)))),
        add2(c, mul2(c, e, mul2(c, Y, J)), mul2(c, f, mul2(c, J, J))))
    return mul2(c, J, Z) == rhs


cdef Ctx make_ctx(object t, int[::1] add, int[::1] mul, int[::1] neg,
                  int[::1] inv, int[::1] chi):
    cdef Ctx c
    c.q = t.q
    c.nu = t.nu
    c.add = &add[0]
    c.mul = &mul[0]
    c.neg = &neg[0]
    c.inv = &inv[0]
    c.chi = &chi[0]
    return c


def oracle_counts(t, coeffs):
    """Brute-force |affine part| and |part at infinity| of H cap Q per row."""
    cdef cnp.int64_t[:, ::1] arr = as_coeff_array(coeffs)
    cdef int[::1] add = t.add, mul = t.mul, neg = t.neg, inv = t.inv, chi = t.chi
    cdef Ctx c = make_ctx(t, add, mul, neg, inv, chi)
    cdef int q2 = c.q * c.q
    cdef Py_ssize_t n = arr.shape[0], row
    out_np = np.zeros((n, 2), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_np
    sq_np = np.empty(q2, dtype=np.int32)
    nrm_np = np.empty(q2, dtype=np.int32)
    cdef int[::1] sq = sq_np, nrm = nrm_np
    cdef int x, y, z, X, Y, Z, base_x, cx
    cdef long affine, inf
    cdef long co[6]
    cdef int a, b, cc, d, e, f
    for x in range(q2):
        sq[x] = mul2(&c, x, x)
        nrm[x] = mul2(&c, x, frob2(&c, x))
    for row in range(n):
        for x in range(6):
            co[x] = arr[row, x]
        a = co[0]; b = co[1]; cc = co[2]; d = co[3]; e = co[4]; f = co[5]
        affine = 0
        with nogil:
            for x in range(q2):
                base_x = add2(&c, add2(&c, mul2(&c, a, sq[x]), mul2(&c, d, x)), f)
                cx = mul2(&c, cc, x)
                for y in range(q2):
                    z = add2(&c, add2(&c, base_x, mul2(&c, b, sq[y])),
                             add2(&c, mul2(&c, cx, y), mul2(&c, e, y)))
                    if add2(&c, z, frob2(&c, z)) == add2(&c, nrm[x], nrm[y]):
                        affine += 1
            # normalized points of J = 0: (0,1,Y,Z), (0,0,1,Z), (0,0,0,1)
            inf = 0
            for Y in range(q2 + 1):
                X = 1 if Y < q2 else 0
                for Z in range(q2):
                    if on_both(&c, co, 0, X, Y if Y < q2 else 1, Z):
                        inf += 1
            if on_both(&c, co, 0, 0, 0, 1):
                inf += 1
        out[row, 0] = affine
        out[row, 1] = inf
    return out_np


cdef void build_a(Ctx* c, long* co, int* A) nogil:
    cdef int q = c.q, nu = c.nu
    cdef int a = co[0], b = co[1], cc = co[2], d = co[3], e = co[4], f = co[5]
    cdef int a0 = a % q, a1 = a // q, b0 = b % q, b1 = b // q
    cdef int c0 = cc % q, c1 = cc // q, d0 = d % q, d1 = d // q
    cdef int e0 = e % q, e1 = e // q, f0 = f % q
    cdef int two = c.add[1 * q + 1]
    cdef int m1 = c.neg[1]
    cdef int A00 = c.add[c.mul[two * q + a0] * q + m1]
    cdef int A01 = c.mul[two * q + c.mul[nu * q + a1]]
    cdef int A11 = c.mul[c.add[c.mul[two * q + a0] * q + 1] * q + nu]
    cdef int A22 = c.add[c.mul[two * q + b0] * q + m1]
    cdef int A23 = c.mul[two * q + c.mul[nu * q + b1]]
    cdef int A33 = c.mul[c.add[c.mul[two * q + b0] * q + 1] * q + nu]
    cdef int nc1 = c.mul[nu * q + c1], nc0 = c.mul[nu * q + c0]
    cdef int nd1 = c.mul[nu * q + d1], ne1 = c.mul[nu * q + e1]
    cdef int f2 = c.mul[two * q + f0]
    A[0] = A00
    A[1] = A01
    A[2] = c0
    A[3] = nc1
    A[4] = d0
    A[5] = A01
    A[6] = A11
    A[7] = nc1
    A[8] = nc0
    A[9] = nd1
    A[10] = c0
    A[11] = nc1
    A[12] = A22
    A[13] = A23
    A[14] = e0
    A[15] = nc1
    A[16] = nc0
    A[17] = A23
    A[18] = A33
    A[19] = ne1
    A[20] = d0
    A[21] = nd1
    A[22] = e0
    A[23] = ne1
    A[24] = f2


cdef void diagonalize(Ctx* c, int* src, int n, int* diag) nogil:
    """Congruence diagonalization of the leading n x n block (det-one ops)."""
    cdef int q = c.q
    cdef int A[25]
    cdef int active[5]
    cdef int n_active = n, nd = 0
    cdef int i, j, k, piv, pi, pj, p, pinv, nf, idx
    for i in range(n):
        active[i] = i
        for j in range(n):
            A[i * 5 + j] = src[i * 5 + j]
    while n_active > 0:
        piv = -1
        for idx in range(n_active):
            i = active[idx]
            if A[i * 5 + i] != 0:
                piv = i
                break
        if piv < 0:
            pi = -1
            pj = -1
            for idx in range(n_active):
                i = active[idx]
                for k in range(n_active):
                    j = active[k]
                    if i < j and A[i * 5 + j] != 0:
                        pi = i
                        pj = j
                        break
                if pi >= 0:
                    break
            if pi < 0:
                for idx in range(n_active):
                    diag[nd] = 0
                    nd += 1
                return
            for k in range(n):
                A[pi * 5 + k] = c.add[A[pi * 5 + k] * q + A[pj * 5 + k]]
            for k in range(n):
                A[k * 5 + pi] = c.add[A[k * 5 + pi] * q + A[k * 5 + pj]]
            piv = pi
        p = A[piv * 5 + piv]
        pinv = c.inv[p]
        for idx in range(n_active):
            i = active[idx]
            if i == piv or A[i * 5 + piv] == 0:
                continue
            nf = c.neg[c.mul[A[i * 5 + piv] * q + pinv]]
            for k in range(n_active):
                j = active[k]
                A[i * 5 + j] = c.add[A[i * 5 + j] * q + c.mul[nf * q + A[piv * 5 + j]]]
            for k in range(n_active):
                j = active[k]
                A[j * 5 + i] = c.add[A[j * 5 + i] * q + c.mul[nf * q + A[j * 5 + piv]]]
        diag[nd] = p
        nd += 1
        # drop piv from the active list, keeping order
        k = 0
        for idx in range(n_active):
            if active[idx] != piv:
                active[k] = active[idx]
                k += 1
        n_active -= 1


def classify_invariants(t, coeffs):
    """Per row: rank A, rank A_inf, chi(core A), chi(core A_inf), det A_inf code."""
    cdef cnp.int64_t[:, ::1] arr = as_coeff_array(coeffs)
    cdef int[::1] add = t.add, mul = t.mul, neg = t.neg, inv = t.inv, chi = t.chi
    cdef Ctx c = make_ctx(t, add, mul, neg, inv, chi)
    cdef int q = c.q
    cdef Py_ssize_t n = arr.shape[0], row
    out_np = np.zeros((n, 5), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_np
    cdef long co[6]
    cdef int A[25]
    cdef int diag[5]
    cdef int i, r, core, det, x
    with nogil:
        for row in range(n):
            for i in range(6):
                co[i] = arr[row, i]
            build_a(&c, co, A)
            diagonalize(&c, A, 4, diag)
            r = 0
            core = 1
            det = 1
            for i in range(4):
                x = diag[i]
                det = c.mul[det * q + x]
                if x != 0:
                    r += 1
                    core = c.mul[core * q + x]
            out[row, 1] = r
            out[row, 3] = c.chi[core]
            out[row, 4] = det
            diagonalize(&c, A, 5, diag)
            r = 0
            core = 1
            for i in range(5):
                x = diag[i]
                if x != 0:
                    r += 1
                    core = c.mul[core * q + x]
            out[row, 0] = r
            out[row, 2] = c.chi[core]
    return out_np
