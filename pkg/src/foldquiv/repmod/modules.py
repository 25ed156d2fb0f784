"""Modules over structure-constant algebras: Hom spaces, isomorphism and locality oracles,
submodules, quotients and duals."""

from __future__ import annotations

import random

import numpy as np

from .. import fplinalg as fl
from ..algkit import StructAlgebra
from ..errors import TooLarge

EXHAUSTIVE_CAP = 1 << 20


def _rows(x, n: int) -> np.ndarray:
    """Reshape to rows of length n; with n = 0 there are no rows."""
    x = np.asarray(x, dtype=np.int64)
    return x.reshape(-1, n) if n else np.zeros((0, 0), dtype=np.int64)


class AlgModule:
    """A left module: act[a] is the d×d matrix of basis element a."""

    def __init__(self, algebra: StructAlgebra, act, check: bool = False):
        self.algebra = algebra
        self.p = algebra.p
        act = np.asarray(act, dtype=np.int64)
        self.dim = act.shape[1] if act.ndim == 3 else 0
        self.act = act.reshape(algebra.dim, self.dim, self.dim) % self.p
        if check:
            problems = self.problems()
            if problems:
                raise ValueError("; ".join(problems))

    def action(self, x) -> np.ndarray:
        """Matrix of an algebra element given by its coordinate vector."""
        return np.einsum("a,aij->ij", np.asarray(x, dtype=np.int64), self.act) % self.p

    def problems(self) -> list[str]:
        a, p = self.algebra, self.p
        out = []
        lhs = np.einsum("aij,bjk->abik", self.act, self.act) % p
        rhs = np.einsum("abc,cik->abik", a.mult, self.act) % p
        if not np.array_equal(lhs, rhs):
            out.append("action is not multiplicative")
        if a.unit is not None and not np.array_equal(self.action(a.unit), np.eye(self.dim, dtype=np.int64)):
            out.append("unit does not act as the identity")
        return out

    def idempotent_space(self, k: int) -> np.ndarray:
        """Row basis of e_k·M for the k-th designated idempotent."""
        return _rows(fl.image_rows(self.action(self.algebra.idempotents[k]), self.p), self.dim)

    def dim_vector(self) -> list[int]:
        return [fl.rank(self.action(e), self.p) for e in self.algebra.idempotents]

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        return f"AlgModule(dim={self.dim}, algebra dim={self.algebra.dim}, p={self.p})"


def zero_module(algebra: StructAlgebra) -> AlgModule:
    return AlgModule(algebra, np.zeros((algebra.dim, 0, 0), dtype=np.int64))


def regular_module(algebra: StructAlgebra) -> AlgModule:
    return AlgModule(algebra, np.array([algebra.left_matrix(algebra.basis_vector(a)) for a in range(algebra.dim)]))


def direct_sum(mods: list[AlgModule]) -> AlgModule:
    alg = mods[0].algebra
    d = sum(m.dim for m in mods)
    act = np.zeros((alg.dim, d, d), dtype=np.int64)
    off = 0
    for m in mods:
        act[:, off:off + m.dim, off:off + m.dim] = m.act
        off += m.dim
    return AlgModule(alg, act)


def submodule(m: AlgModule, rows: np.ndarray) -> AlgModule:
    """The submodule with the given row basis (must be invariant)."""
    rows = _rows(rows, m.dim)
    k = rows.shape[0]
    if k == 0:
        return zero_module(m.algebra)
    imgs = np.einsum("aij,kj->aki", m.act, rows) % m.p
    act = np.array([fl.coords(rows, imgs[a], m.p).T for a in range(m.algebra.dim)], dtype=np.int64)
    return AlgModule(m.algebra, act)


def quotient_module(m: AlgModule, rows: np.ndarray) -> tuple[AlgModule, np.ndarray]:
    """M / S with a standard-vector complement basis; returns (module, projection matrix)."""
    rows = fl.row_basis(_rows(rows, m.dim), m.p, m.dim)
    comp = fl.complement(rows, m.dim, m.p)
    r = comp.shape[0]
    full = np.vstack([comp, rows]) if rows.shape[0] else comp
    proj = fl.coords(full, np.eye(m.dim, dtype=np.int64), m.p)[:, :r].T % m.p if r else \
        np.zeros((0, m.dim), dtype=np.int64)
    act = np.einsum("ki,aij,rj->akr", proj, m.act, comp) % m.p if r else np.zeros((m.algebra.dim, 0, 0))
    return AlgModule(m.algebra, act), proj


def dual_module(m: AlgModule) -> AlgModule:
    """Hom_K(M, K) as a module over the opposite algebra."""
    return AlgModule(m.algebra.opposite(), m.act.transpose(0, 2, 1))


def generated_submodule(m: AlgModule, vecs: np.ndarray) -> np.ndarray:
    """Row basis of A·span(vecs)."""
    vecs = _rows(vecs, m.dim)
    if vecs.shape[0] == 0:
        return np.zeros((0, m.dim), dtype=np.int64)
    imgs = np.einsum("aij,kj->aki", m.act, vecs).reshape(-1, m.dim) % m.p
    return fl.row_basis(imgs, m.p, m.dim)


def radical_submodule(m: AlgModule) -> np.ndarray:
    """rad(A)·M for an algebra with a known radical basis."""
    rad = m.algebra.radical_basis
    if rad is None or rad.shape[0] == 0 or m.dim == 0:
        return np.zeros((0, m.dim), dtype=np.int64)
    mats = np.einsum("ra,aij->rij", rad, m.act) % m.p
    return fl.row_basis(mats.transpose(0, 2, 1).reshape(-1, m.dim), m.p, m.dim)


def hom_space(m: AlgModule, n: AlgModule) -> np.ndarray:
    """Basis of Hom_A(M, N) as an array of shape (k, dim N, dim M)."""
    if m.algebra is not n.algebra and m.algebra.dim != n.algebra.dim:
        raise ValueError("modules over different algebras")
    dm, dn, p = m.dim, n.dim, m.p
    if dm == 0 or dn == 0:
        return np.zeros((0, dn, dm), dtype=np.int64)
    blocks = []
    for x in m.algebra.generator_vectors():
        am, an = m.action(x), n.action(x)
        blocks.append((np.kron(an, np.eye(dm, dtype=np.int64)) - np.kron(np.eye(dn, dtype=np.int64), am.T)) % p)
    ker = fl.nullspace(np.vstack(blocks) % p, p)
    return ker.reshape(-1, dn, dm)


def end_algebra_dim(m: AlgModule) -> int:
    return hom_space(m, m).shape[0]


def _search_invertible(basis: np.ndarray, p: int, cap: int, seed: int):
    k = basis.shape[0]
    if p ** k <= cap:
        return fl.first_invertible(basis, p)
    rng = random.Random(seed)
    n = basis.shape[1]
    for _ in range(4096):
        c = [rng.randrange(p) for _ in range(k)]
        mat = np.einsum("k,kij->ij", np.array(c, dtype=np.int64), basis) % p
        if fl.rank(mat, p) == n:
            return tuple(c)
    raise TooLarge(f"Hom space of dimension {k} over F_{p} exceeds the exhaustive cap and sampling found nothing")


def find_isomorphism(m: AlgModule, n: AlgModule, cap: int = EXHAUSTIVE_CAP, seed: int = 0) -> np.ndarray | None:
    """An invertible intertwiner M -> N, or None."""
    if m.dim != n.dim or m.dim_vector() != n.dim_vector():
        return None
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    basis = hom_space(m, n)
    if basis.shape[0] == 0 or basis.shape[0] != end_algebra_dim(m):
        return None
    c = _search_invertible(basis, m.p, cap, seed)
    if c is None:
        return None
    return np.einsum("k,kij->ij", np.array(c, dtype=np.int64), basis) % m.p


def is_isomorphic(m: AlgModule, n: AlgModule, cap: int = EXHAUSTIVE_CAP, seed: int = 0) -> bool:
    return find_isomorphism(m, n, cap, seed) is not None


def end_is_local(m: AlgModule, cap: int = EXHAUSTIVE_CAP) -> bool:
    """Brute force: the only idempotents of End(M) are 0 and 1."""
    if m.dim == 0:
        return False
    basis = hom_space(m, m)
    k = basis.shape[0]
    if m.p ** k > cap:
        raise TooLarge(f"End algebra of dimension {k} over F_{m.p} exceeds the exhaustive cap")
    return len(fl.idempotent_coefficients(basis, m.p)) == 2


def same_action(m: AlgModule, n: AlgModule) -> bool:
    return m.dim == n.dim and bool(np.array_equal(m.act % m.p, n.act % n.p))
