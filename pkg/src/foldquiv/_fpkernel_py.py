"""Pure-Python/numpy twins of the compiled F_p kernels."""

from __future__ import annotations

import itertools

import numpy as np


def rref_inplace(m: np.ndarray, p: int) -> list[int]:
    """Reduce m in place to reduced row echelon form mod p; return pivot columns."""
    np.remainder(m, p, out=m)
    rows, cols = m.shape
    r = 0
    piv = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        iv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * iv) % p
        f = m[:, c].copy()
        f[r] = 0
        m -= np.outer(f, m[r])
        np.remainder(m, p, out=m)
        piv.append(c)
        r += 1
    return piv


def _all_coefs(k: int, p: int):
    return itertools.product(range(p), repeat=k)


def idempotent_coefficients(basis: np.ndarray, p: int) -> list[tuple[int, ...]]:
    """All coefficient vectors c with (sum c_t B_t)^2 = sum c_t B_t."""
    k, d, _ = basis.shape
    flat = basis.reshape(k, d * d)
    found = []
    chunk = []
    for coef in _all_coefs(k, p):
        chunk.append(coef)
        if len(chunk) == 4096:
            found.extend(_idem_chunk(chunk, flat, d, p))
            chunk = []
    if chunk:
        found.extend(_idem_chunk(chunk, flat, d, p))
    return found


def _idem_chunk(chunk, flat, d, p):
    c = np.array(chunk, dtype=np.int64)
    x = ((c @ flat) % p).reshape(-1, d, d)
    sq = np.matmul(x, x) % p
    ok = np.all((sq == x).reshape(len(chunk), -1), axis=1)
    return [chunk[i] for i in np.nonzero(ok)[0]]


def first_invertible(basis: np.ndarray, p: int):
    """First coefficient vector (counting order) giving an invertible matrix, or None."""
    k, d, _ = basis.shape
    if d == 0:
        return tuple(0 for _ in range(k))
    it = _all_coefs(k, p)
    next(it)
    for coef in it:
        x = np.tensordot(np.array(coef, dtype=np.int64), basis, axes=1) % p
        if len(rref_inplace(x, p)) == d:
            return tuple(coef)
    return None
