import importlib.util
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldquiv import fplinalg as fl
from foldquiv import _fpkernel_py

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


def brute_rank(a, p):
    """Rank as log_p of the size of the row space, by enumeration."""
    rows = a.shape[0]
    span = {tuple((np.array(c) @ a) % p) for c in itertools.product(range(p), repeat=rows)}
    k = 0
    while p ** k < len(span):
        k += 1
    return k


def test_is_prime():
    assert [n for n in range(20) if fl.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


@given(matrices(max_rows=4, max_cols=4))
def test_rank_matches_enumeration(mp):
    a, p = mp
    if p ** a.shape[0] > 3000:
        return
    assert fl.rank(a, p) == brute_rank(a, p)


@given(matrices())
def test_nullspace_is_kernel(mp):
    a, p = mp
    ker = fl.nullspace(a, p)
    assert ker.shape[0] == a.shape[1] - fl.rank(a, p)
    if ker.shape[0]:
        assert not np.any((a @ ker.T) % p)


@given(matrices())
def test_rref_is_reduced(mp):
    a, p = mp
    r, piv = fl.rref(a, p)
    for k, c in enumerate(piv):
        col = r[:, c]
        assert col[k] == 1 and np.count_nonzero(col) == 1


@given(matrices(max_rows=5, max_cols=5))
def test_inverse_and_solve(mp):
    a, p = mp
    n = min(a.shape)
    sq = a[:n, :n]
    inv = fl.inverse(sq, p)
    if fl.rank(sq, p) == n:
        assert np.array_equal(sq @ inv % p, np.eye(n, dtype=np.int64))
    else:
        assert inv is None
    b = a[:, :1]
    x = fl.solve(a, b, p)
    if x is not None:
        assert np.array_equal(a @ x % p, b % p)


@given(matrices(), matrices())
def test_intersection_inside_both(m1, m2):
    a, p = m1
    b = (m2[0] % p)
    if a.shape[1] != b.shape[1]:
        return
    i = fl.intersect(a, b, p)
    for v in i:
        assert fl.in_span(a, v, p) and fl.in_span(b, v, p)
    ra, rb = fl.rank(a, p), fl.rank(b, p)
    rs = fl.rank(np.vstack([a, b]), p)
    assert i.shape[0] == ra + rb - rs


@given(matrices())
def test_complement_completes(mp):
    a, p = mp
    basis = fl.row_basis(a, p, a.shape[1])
    comp = fl.complement(basis, a.shape[1], p)
    full = np.vstack([basis, comp]) if basis.shape[0] else comp
    assert fl.rank(full, p) == a.shape[1] == full.shape[0]


@given(matrices())
def test_coords_roundtrip(mp):
    a, p = mp
    basis = fl.row_basis(a, p, a.shape[1])
    if basis.shape[0] == 0:
        return
    c = fl.coords(basis, a % p, p)
    assert np.array_equal(c @ basis % p, a % p)


def test_coords_outside_span_raises():
    with pytest.raises(ValueError):
        fl.coords(np.array([[1, 0]]), np.array([0, 1]), 2)


@st.composite
def matrix_spans(draw):
    p = draw(st.sampled_from([2, 3]))
    d = draw(st.integers(1, 3))
    k = draw(st.integers(1, 3 if p == 3 else 5))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=k * d * d, max_size=k * d * d))
    return np.array(vals, dtype=np.int64).reshape(k, d, d), p


@given(matrix_spans())
def test_backends_agree_on_idempotents(bp):
    basis, p = bp
    fl.use_backend("python")
    py = fl.idempotent_coefficients(basis, p)
    pyinv = fl.first_invertible(basis, p)
    if _has_cython():
        fl.use_backend("cython")
        assert sorted(fl.idempotent_coefficients(basis, p)) == sorted(py)
        assert fl.first_invertible(basis, p) == pyinv
    _restore()
    for c in py:
        x = np.einsum("k,kij->ij", np.array(c), basis) % p
        assert np.array_equal(x @ x % p, x)


@given(matrices())
def test_backends_agree_on_rref(mp):
    a, p = mp
    fl.use_backend("python")
    r1 = fl.rref(a, p)
    if _has_cython():
        fl.use_backend("cython")
        r2 = fl.rref(a, p)
        assert np.array_equal(r1[0], r2[0]) and list(r1[1]) == list(r2[1])
    _restore()


def test_pure_fallback_module_exports_same_kernels():
    for name in ("rref_inplace", "idempotent_coefficients", "first_invertible"):
        assert callable(getattr(_fpkernel_py, name))


def test_unknown_backend():
    with pytest.raises(ValueError):
        fl.use_backend("fortran")


_DEFAULT = fl.BACKEND


def _has_cython():
    return importlib.util.find_spec("foldquiv._fpkernel") is not None


def _restore():
    fl.use_backend(_DEFAULT)
