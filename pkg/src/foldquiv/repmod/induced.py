"""Twisted modules and induced modules M#G over skew group algebras."""

from __future__ import annotations

import numpy as np

from .. import fplinalg as fl
from ..algkit import AlgebraAction, StructAlgebra
from .modules import AlgModule


def twist(m: AlgModule, act: AlgebraAction, g: int) -> AlgModule:
    """^gM: a acts as g(a) acts on M."""
    mats = np.asarray(act.mats[g], dtype=np.int64)
    return AlgModule(m.algebra, np.einsum("ca,cij->aij", mats, m.act) % m.p)


def induce(m: AlgModule, skew: StructAlgebra) -> AlgModule:
    """M#G with (a#g).(m#h) = (gh)^-1(a).m # gh; the vector m#h sits in block h."""
    act = skew.skew_data
    grp = act.group
    no, d, da = grp.order, m.dim, m.algebra.dim
    p = m.p
    out = np.zeros((da, no, no, d, no, d), dtype=np.int64)
    mats = np.asarray(act.mats, dtype=np.int64)
    for g in range(no):
        for h in range(no):
            gh = grp.m(g, h)
            blocks = np.einsum("ca,cij->aij", mats[grp.i(gh)], m.act) % p
            out[:, g, gh, :, h, :] = blocks
    out = out.reshape(da * no, no * d, no * d)
    return AlgModule(skew, out)


def induction_check(m: AlgModule, skew: StructAlgebra) -> dict:
    """Compare M#G with (A#G) ⊗_A M through (a#g) ⊗ m ↦ (a#g).(m#1).

    The tensor product is the quotient of (A#G) ⊗_K M by the balancing relations;
    the map must vanish on them, be A#G-linear and induce a bijection.
    """
    base = m.algebra
    p, d = m.p, m.dim
    ds = skew.dim
    ind = induce(m, skew)
    # Φ: (A#G) ⊗ M -> M#G, basis x ⊗ m_j at index x*d + j
    phi = np.zeros((ind.dim, ds * d), dtype=np.int64)
    for x in range(ds):
        phi[:, x * d:(x + 1) * d] = ind.act[x][:, :d]
    # relations (x·a) ⊗ m - x ⊗ a.m for basis x of A#G, a of A, m_j of M
    rels = []
    for a in range(base.dim):
        a_sk = np.zeros(ds, dtype=np.int64)
        a_sk[np.arange(base.dim) * skew.skew_data.group.order] = base.basis_vector(a)
        right_a = skew.right_matrix(a_sk)
        for x in range(ds):
            xa = right_a[:, x]
            for j in range(d):
                v = np.zeros(ds * d, dtype=np.int64)
                v += np.kron(xa, np.eye(d, dtype=np.int64)[j])
                v[x * d:(x + 1) * d] -= m.act[a][:, j]
                rels.append(v % p)
    rel = fl.row_basis(np.array(rels, dtype=np.int64).reshape(-1, ds * d), p, ds * d)
    vanishes = not np.any((phi @ rel.T) % p) if rel.shape[0] else True
    tensor_dim = ds * d - rel.shape[0]
    linear = True
    for y in skew.generator_vectors():
        left_y = skew.left_matrix(y)
        big = np.kron(left_y, np.eye(d, dtype=np.int64)) % p
        if not np.array_equal(phi @ big % p, ind.action(y) @ phi % p):
            linear = False
    surjective = fl.rank(phi, p) == ind.dim
    return {"dim_induced": ind.dim, "dim_tensor": tensor_dim, "vanishes_on_relations": vanishes,
            "linear": linear, "surjective": surjective,
            "ok": vanishes and linear and surjective and tensor_dim == ind.dim}
