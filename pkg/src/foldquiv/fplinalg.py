"""Exact linear algebra over prime fields.

Matrices are int64 numpy arrays with entries in 0..p-1. Subspaces are stored
as row bases. The elimination and search kernels come from the compiled
extension when it is importable, otherwise from the numpy fallback; set
FOLDQUIV_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fpkernel_py

if os.environ.get("FOLDQUIV_PURE"):
    _kernel = _fpkernel_py
    BACKEND = "python"
else:
    try:
        from . import _fpkernel as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _kernel = _fpkernel_py
        BACKEND = "python"


def use_backend(name: str) -> None:
    """Switch kernels at runtime ("cython" or "python"); used by tests and benchmarks."""
    global _kernel, BACKEND
    if name == "python":
        _kernel = _fpkernel_py
    elif name == "cython":
        from . import _fpkernel as compiled  # type: ignore[attr-defined]

        _kernel = compiled
    else:
        raise ValueError(name)
    BACKEND = name


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1
    return True


class PrimeField:
    """The field F_p."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def inv(self, a: int) -> int:
        return pow(a % self.p, -1, self.p)


def mat(a, p: int) -> np.ndarray:
    return np.array(a, dtype=np.int64) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    m = np.ascontiguousarray(np.array(a, dtype=np.int64))
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    if m.size == 0:
        return m, []
    piv = _kernel.rref_inplace(m, p)
    return m, piv


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def row_basis(a: np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    """Reduced row basis of the row space."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        n = ncols if ncols is not None else (a.shape[1] if a.ndim == 2 else 0)
        return np.zeros((0, n), dtype=np.int64)
    r, piv = rref(a, p)
    return r[: len(piv)].copy()


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Row basis of {x : a @ x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, c in enumerate(piv):
            out[k, c] = (-r[i, f]) % p
    return out


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a @ x = b (b a vector or matrix), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref(aug, p)
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x[:, 0] if vec else x


def inverse(a: np.ndarray, p: int) -> np.ndarray | None:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    if n == 0:
        return a.copy()
    r, piv = rref(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p)
    if piv[:n] != list(range(n)) or len(piv) < n or piv[n - 1] >= n:
        return None
    return r[:, n:].copy()


def coords(basis: np.ndarray, vecs: np.ndarray, p: int) -> np.ndarray:
    """Coefficients c with c @ basis = vecs (rows); raises if some row is outside the span."""
    basis = np.asarray(basis, dtype=np.int64)
    vecs = np.asarray(vecs, dtype=np.int64)
    single = vecs.ndim == 1
    if single:
        vecs = vecs[None, :]
    if basis.shape[0] == 0:
        if np.any(vecs % p):
            raise ValueError("vector outside span")
        out = np.zeros((vecs.shape[0], 0), dtype=np.int64)
        return out[0] if single else out
    x = solve(basis.T, vecs.T, p)
    if x is None:
        raise ValueError("vector outside span")
    out = x.T.copy()
    return out[0] if single else out


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return not np.any(np.asarray(v) % p)
    return rank(np.vstack([basis, v]), p) == rank(basis, p)


def complement(basis: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard unit vectors completing a row basis to all of F_p^n."""
    basis = np.asarray(basis, dtype=np.int64).reshape(-1, n)
    piv = rref(basis, p)[1] if basis.shape[0] else []
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, c in enumerate(free):
        out[k, c] = 1
    return out


def extend_to_basis(sub: np.ndarray, space: np.ndarray, p: int) -> np.ndarray:
    """Rows of `space` (in order) extending the span of `sub` to the span of `space`."""
    cur = np.asarray(sub, dtype=np.int64).reshape(-1, space.shape[1])
    r0 = rank(cur, p) if cur.shape[0] else 0
    picked = []
    for v in space:
        trial = np.vstack([cur, v]) if cur.shape[0] else v[None, :]
        r1 = rank(trial, p)
        if r1 > r0:
            cur, r0 = trial, r1
            picked.append(v)
    return np.array(picked, dtype=np.int64).reshape(-1, space.shape[1])


def sum_spaces(spaces: list[np.ndarray], n: int, p: int) -> np.ndarray:
    rows = [s for s in spaces if s.shape[0]]
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    return row_basis(np.vstack(rows), p, n)


def intersect(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Row basis of the intersection of two row spaces."""
    n = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    ker = nullspace(np.vstack([a, b]).T, p)
    if ker.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    return row_basis((ker[:, : a.shape[0]] @ a) % p, p, n)


def image_rows(m: np.ndarray, p: int) -> np.ndarray:
    """Row basis of the column space of m."""
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return np.zeros((0, m.shape[0]), dtype=np.int64)
    return row_basis(m.T, p, m.shape[0])


def idempotent_coefficients(basis: np.ndarray, p: int) -> list[tuple[int, ...]]:
    b = np.ascontiguousarray(np.asarray(basis, dtype=np.int64) % p)
    return _kernel.idempotent_coefficients(b, p)


def first_invertible(basis: np.ndarray, p: int):
    b = np.ascontiguousarray(np.asarray(basis, dtype=np.int64) % p)
    return _kernel.first_invertible(b, p)
