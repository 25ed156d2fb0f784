"""Minimal projective presentations, the transpose and the Auslander-Reiten translates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import fplinalg as fl
from ..algkit import StructAlgebra
from ..errors import NotPresented
from .folding import rank_vector
from .modules import AlgModule, direct_sum, dual_module, quotient_module, regular_module, submodule, zero_module

DEFAULT_TAU_DEPTH = 20


def _require_presented(alg: StructAlgebra) -> None:
    if alg.radical_basis is None:
        raise NotPresented("the algebra has no radical basis (bound quiver presentation) attached")


def _span_in(m_act: np.ndarray, rows: np.ndarray, p: int, n: int) -> np.ndarray:
    """Row basis of the span of x·v for all x in the given matrices and v in rows."""
    if rows.shape[0] == 0 or m_act.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    imgs = np.einsum("rij,kj->rki", m_act, rows).reshape(-1, n) % p
    return fl.row_basis(imgs, p, n)


def top_generators(alg: StructAlgebra, act: np.ndarray, rows: np.ndarray) -> list[tuple[int, np.ndarray]]:
    """Vectors (vertex, v) with v in e_i·N lifting a basis of the top of the submodule N = span(rows).

    `act` holds the action matrices of the ambient module; ties are broken by basis order.
    """
    p = alg.p
    n = act.shape[1]
    rows = fl.row_basis(rows, p, n) if rows.shape[0] else rows.reshape(0, n)
    rad_mats = np.einsum("ra,aij->rij", alg.radical_basis, act) % p if alg.radical_basis.shape[0] else \
        np.zeros((0, n, n), dtype=np.int64)
    rad_n = _span_in(rad_mats, rows, p, n)
    out = []
    for i, e in enumerate(alg.idempotents):
        em = np.einsum("a,aij->ij", np.asarray(e, dtype=np.int64), act) % p
        e_n = fl.row_basis((rows @ em.T) % p, p, n) if rows.shape[0] else rows
        e_rad = fl.row_basis((rad_n @ em.T) % p, p, n) if rad_n.shape[0] else rad_n
        for v in fl.extend_to_basis(e_rad, e_n, p) if e_n.shape[0] else []:
            out.append((i, v % p))
    return out


def projective_left(alg: StructAlgebra, i: int) -> np.ndarray:
    """Row basis of A·e_i inside A."""
    return fl.image_rows(alg.right_matrix(alg.idempotents[i]), alg.p).reshape(-1, alg.dim)


@dataclass
class ProjectivePresentation:
    """P1 -> P0 -> M -> 0 with P0 = ⊕ A e_{tops[k]}, P1 = ⊕ A e_{rels[l]}.

    x[l][k] lies in e_{rels[l]} A e_{tops[k]}.
    """

    module: AlgModule
    tops: list[int]
    images: list[np.ndarray]
    rels: list[int]
    x: list[list[np.ndarray]] = field(default_factory=list)

    def is_projective(self) -> bool:
        return not self.rels


def projective_presentation(m: AlgModule) -> ProjectivePresentation:
    """Minimal presentation from projective covers of M and of the first syzygy."""
    alg, p = m.algebra, m.p
    _require_presented(alg)
    n = alg.dim
    gens = top_generators(alg, m.act, np.eye(m.dim, dtype=np.int64)) if m.dim else []
    tops = [i for i, _ in gens]
    images = [v for _, v in gens]
    if not gens:
        return ProjectivePresentation(m, [], [], [], [])
    # P0 is a subspace of A^k; map π(a_1, ..., a_k) = Σ a_k·v_k
    k = len(gens)
    bases = [projective_left(alg, i) for i in tops]
    p0_dim = sum(b.shape[0] for b in bases)
    pi = np.zeros((m.dim, p0_dim), dtype=np.int64)
    emb = np.zeros((p0_dim, k * n), dtype=np.int64)
    off = 0
    for idx, (b, v) in enumerate(zip(bases, images)):
        for r, row in enumerate(b):
            pi[:, off + r] = m.action(row) @ v % p
            emb[off + r, idx * n:(idx + 1) * n] = row
        off += b.shape[0]
    ker = fl.nullspace(pi, p)
    if ker.shape[0] == 0:
        return ProjectivePresentation(m, tops, images, [], [])
    syz = ker @ emb % p
    # A acts diagonally on A^k by left multiplication
    big = np.zeros((n, k * n, k * n), dtype=np.int64)
    for a in range(n):
        lm = alg.left_matrix(alg.basis_vector(a))
        for idx in range(k):
            big[a, idx * n:(idx + 1) * n, idx * n:(idx + 1) * n] = lm
    rel_gens = top_generators(alg, big, syz)
    rels = [j for j, _ in rel_gens]
    x = [[w[idx * n:(idx + 1) * n] % p for idx in range(k)] for _, w in rel_gens]
    return ProjectivePresentation(m, tops, images, rels, x)


def transpose_from(pres: ProjectivePresentation) -> AlgModule:
    """Tr M = coker(⊕ e_{tops} A -> ⊕ e_{rels} A, (y_k) ↦ (Σ_k x_lk y_k)_l) over the opposite algebra."""
    alg = pres.module.algebra
    op = alg.opposite()
    p, n = alg.p, alg.dim
    if not pres.rels:
        return zero_module(op)
    reg = regular_module(op)
    rights = [fl.image_rows(alg.left_matrix(alg.idempotents[j]), p).reshape(-1, n) for j in pres.rels]
    tgt = direct_sum([submodule(reg, r) for r in rights])
    images = []
    for idx, i in enumerate(pres.tops):
        for y in fl.image_rows(alg.left_matrix(alg.idempotents[i]), p).reshape(-1, n):
            parts = [fl.coords(rights[l], alg.mul(pres.x[l][idx], y), p) for l in range(len(pres.rels))]
            images.append(np.concatenate(parts))
    rows = np.array(images, dtype=np.int64).reshape(-1, tgt.dim)
    out, _ = quotient_module(tgt, rows)
    return out


def transpose(m: AlgModule) -> AlgModule:
    return transpose_from(projective_presentation(m))


def tau(m: AlgModule) -> AlgModule:
    """τ = D Tr; zero on projectives."""
    return dual_module(transpose(m))


def tau_inverse(m: AlgModule) -> AlgModule:
    """τ⁻ = Tr D, computed over the opposite algebra."""
    return transpose(dual_module(m))


@dataclass
class TauCertificate:
    """Rank vectors along the τ- and τ⁻-orbits; failure names (direction, power, vertex, k)."""

    tau_locally_free: bool
    forward: list = field(default_factory=list)
    backward: list = field(default_factory=list)
    failure: tuple | None = None
    exhausted: bool = True


def tau_locally_free(y: AlgModule, depth: int = DEFAULT_TAU_DEPTH) -> TauCertificate:
    """Iterate τ and τ⁻ until zero (or `depth` steps), requiring local freeness at each stage."""
    cert = TauCertificate(True)
    first = rank_vector(y)
    if not first.locally_free:
        return TauCertificate(False, failure=("tau", 0) + tuple(first.failure))
    for name, step, seq in (("tau", tau, cert.forward), ("tau-", tau_inverse, cert.backward)):
        cur = y
        for k in range(depth + 1):
            if cur.dim == 0:
                break
            if k > 0:
                res = rank_vector(cur)
                if not res.locally_free:
                    cert.tau_locally_free = False
                    cert.failure = (name, k) + tuple(res.failure)
                    return cert
                seq.append(res.ranks)
            if k == depth:
                cert.exhausted = False
                break
            cur = step(cur)
    return cert
