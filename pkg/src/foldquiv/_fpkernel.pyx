# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F_p kernels: row reduction and exhaustive searches over spans."""

import numpy as np

ctypedef long long i64


cdef i64 _inv(i64 a, i64 p) noexcept nogil:
    cdef i64 t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef int _rref(i64[:, ::1] m, i64 p, i64[::1] piv) noexcept nogil:
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef i64 f, iv, tmp
    for i in range(rows):
        for j in range(cols):
            m[i, j] = m[i, j] % p
            if m[i, j] < 0:
                m[i, j] += p
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                tmp = m[k, j]
                m[k, j] = m[r, j]
                m[r, j] = tmp
        iv = _inv(m[r, c], p)
        if iv != 1:
            for j in range(c, cols):
                m[r, j] = (m[r, j] * iv) % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                for j in range(c, cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
                    if m[i, j] < 0:
                        m[i, j] += p
        piv[r] = c
        r += 1
    return r


def rref_inplace(i64[:, ::1] m, i64 p):
    """Reduce m in place to reduced row echelon form mod p; return pivot columns."""
    cdef i64[::1] piv = np.zeros(max(1, m.shape[0]), dtype=np.int64)
    cdef int r
    with nogil:
        r = _rref(m, p, piv)
    return [int(piv[i]) for i in range(r)]


cdef void _combine(i64[:, :, ::1] basis, i64[::1] coef, i64 p, i64[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t k = basis.shape[0], d = basis.shape[1], t, i, j
    for i in range(d):
        for j in range(d):
            out[i, j] = 0
    for t in range(k):
        if coef[t] != 0:
            for i in range(d):
                for j in range(d):
                    out[i, j] = (out[i, j] + coef[t] * basis[t, i, j]) % p


cdef bint _next(i64[::1] coef, i64 p) noexcept nogil:
    cdef Py_ssize_t t = coef.shape[0] - 1
    while t >= 0:
        coef[t] += 1
        if coef[t] < p:
            return True
        coef[t] = 0
        t -= 1
    return False


def idempotent_coefficients(i64[:, :, ::1] basis, i64 p):
    """All coefficient vectors c with (sum c_t B_t)^2 = sum c_t B_t."""
    cdef Py_ssize_t k = basis.shape[0], d = basis.shape[1], i, j, l
    cdef i64[::1] coef = np.zeros(k, dtype=np.int64)
    cdef i64[:, ::1] x = np.zeros((d, d), dtype=np.int64)
    cdef i64 s
    cdef bint ok
    found = []
    while True:
        _combine(basis, coef, p, x)
        ok = True
        for i in range(d):
            if not ok:
                break
            for j in range(d):
                s = 0
                for l in range(d):
                    s += x[i, l] * x[l, j]
                if s % p != x[i, j]:
                    ok = False
                    break
        if ok:
            found.append(tuple(int(coef[t]) for t in range(k)))
        if not _next(coef, p):
            break
    return found


def first_invertible(i64[:, :, ::1] basis, i64 p):
    """First coefficient vector (counting order) giving an invertible matrix, or None."""
    cdef Py_ssize_t k = basis.shape[0], d = basis.shape[1]
    cdef i64[::1] coef = np.zeros(k, dtype=np.int64)
    cdef i64[:, ::1] x = np.zeros((d, d), dtype=np.int64)
    cdef i64[::1] piv = np.zeros(max(1, d), dtype=np.int64)
    cdef int r
    if d == 0:
        return tuple(0 for _ in range(k))
    while _next(coef, p):
        _combine(basis, coef, p, x)
        with nogil:
            r = _rref(x, p, piv)
        if r == d:
            return tuple(int(coef[t]) for t in range(k))
    return None
