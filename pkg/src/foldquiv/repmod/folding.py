"""The functor Ψ from KΔ#G-modules to H-modules, rank vectors and local freeness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import fplinalg as fl
from ..algkit import ThetaResult, category_algebra, path_algebra, path_algebra_action, skew_group_algebra, theta_iso
from ..cartan import EIQuiverIsomorphism, cartan_type_isomorphism
from ..eicat import functor_from_ei_data
from ..errors import SetupViolated
from ..quiver import Quiver, QuiverAction, check_action, quotient_quiver
from ..quotient import Equivalence, equivalence_functor
from ..rootfold import folding_projection
from .induced import induce
from .modules import AlgModule
from .quiverrep import QuiverRep, rep_to_module


def setup_problems(q: Quiver, act: QuiverAction, p: int) -> list[str]:
    """Characteristic p, a cyclic p-group and G_α = G_s(α) ∩ G_t(α) for every arrow."""
    out = []
    if not fl.is_prime(p):
        out.append(f"{p} is not prime")
        return out
    grp = act.group
    if grp.cyclic_generator() is None:
        out.append("group is not cyclic")
    n = grp.order
    while n % p == 0:
        n //= p
    if n != 1:
        out.append(f"group order {grp.order} is not a power of {p}")
    if not check_action(q, act)["stabilizer_flag"]:
        out.append("some arrow stabilizer differs from the intersection of its endpoint stabilizers")
    return out


@dataclass
class RankResult:
    """Rank vector, or the first vertex and power where freeness fails."""

    locally_free: bool
    ranks: list | None
    failure: tuple | None = None


class FoldingPipeline:
    """KΔ, KΔ#G, H and the algebra map φ: H -> KΔ#G defining Ψ by restriction to E·(KΔ#G)·E."""

    def __init__(self, q: Quiver, act: QuiverAction, p: int):
        problems = setup_problems(q, act, p)
        if problems:
            raise SetupViolated("; ".join(problems))
        self.quiver, self.action, self.p = q, act, p
        self.path_alg = path_algebra(q, p)
        self.alg_action = path_algebra_action(self.path_alg, act)
        self.skew = skew_group_algebra(self.alg_action)
        self.iso: EIQuiverIsomorphism = cartan_type_isomorphism(q, act)
        self.triple = self.iso.triple
        self.theta: ThetaResult = theta_iso(self.triple, p)
        self.H = self.theta.source
        self.equivalence: Equivalence = equivalence_functor(self.iso.quotient)
        _, self.pi0, _ = quotient_quiver(q, act)
        self.fold = folding_projection(self.pi0, self.triple.n)
        self.phi = self._build_phi()
        self.E = self.phi @ self.H.unit % p

    def _cartan_to_quotient(self):
        """Functor C(C, D, Ω) -> C(Q̄, Ū_tr) inverting the EI-quiver isomorphism."""
        iso, src = self.iso, self.theta.category
        dst = self.equivalence.src
        vmaps = []
        for v in range(iso.source.quiver.n):
            inv = [0] * len(iso.group_maps[v])
            for x, y in enumerate(iso.group_maps[v]):
                inv[y] = x
            pth = dst.path_index[(v, ())]
            vmaps.append([dst.mor_of[(pth, x)] for x in inv])
        amaps = [None] * iso.target.quiver.num_arrows
        sq = iso.source.quiver
        for a, b in enumerate(iso.arrow_map):
            inv = [0] * len(iso.biset_maps[a])
            for x, y in enumerate(iso.biset_maps[a]):
                inv[y] = x
            pth = dst.path_index[(sq.source(a), (a,))]
            amaps[b] = [dst.mor_of[(pth, x)] for x in inv]
        return functor_from_ei_data(src, dst, list(range(src.n_obj)), vmaps, amaps)

    def _build_phi(self) -> np.ndarray:
        f = self._cartan_to_quotient()
        mor = self.equivalence.mor_map[f.mor_map]
        kc = self.theta.target
        place = np.zeros((self.skew.dim, kc.dim), dtype=np.int64)
        place[mor, np.arange(kc.dim)] = 1
        return place @ self.theta.matrix % self.p

    def checks(self) -> dict:
        """Skew category algebra equals the skew group algebra, the map is multiplicative and hits the corner."""
        skew_cat = self.equivalence.dst
        kcg = category_algebra(skew_cat, self.p)
        skew_equal = kcg.dim == self.skew.dim and bool(np.array_equal(kcg.mult, self.skew.mult))
        p, phi = self.p, self.phi
        lhs = np.einsum("abk,jk->abj", self.H.mult, phi) % p
        rhs = np.einsum("ia,jb,ijk->abk", phi, phi, self.skew.mult) % p
        mult_ok = bool(np.array_equal(lhs, rhs))
        corner = sum(self.skew.basis_vector(self.skew_index(self.path_alg.path_data.category.identities[i], 0))
                     for i in self.iso.quotient.choices.iota0) % p
        injective = fl.rank(phi, p) == self.H.dim
        is_corner = bool(np.array_equal(self.E, corner))
        return {"skew_tables_equal": skew_equal, "map_multiplicative": mult_ok, "map_unit_is_corner": is_corner,
                "map_injective": injective, "ok": skew_equal and mult_ok and injective and is_corner}

    def skew_index(self, base_index: int, g: int) -> int:
        return base_index * self.action.group.order + g

    def module_of(self, rep: QuiverRep) -> AlgModule:
        return rep_to_module(rep, self.path_alg)

    def induce(self, m: AlgModule) -> AlgModule:
        return induce(m, self.skew)

    def psi(self, n: AlgModule) -> AlgModule:
        """Restrict E·N along φ."""
        p = self.p
        space = fl.image_rows(n.action(self.E), p).reshape(-1, n.dim) if n.dim else np.zeros((0, 0), np.int64)
        k = space.shape[0]
        if k == 0:
            return AlgModule(self.H, np.zeros((self.H.dim, 0, 0), dtype=np.int64))
        act = np.zeros((self.H.dim, k, k), dtype=np.int64)
        for h in range(self.H.dim):
            mat = n.action(self.phi[:, h])
            imgs = (mat @ space.T).T % p
            act[h] = fl.coords(space, imgs, p).T
        return AlgModule(self.H, act)

    def folded_module(self, rep: QuiverRep) -> AlgModule:
        """Ψ(M#G) for a representation M."""
        return self.psi(self.induce(self.module_of(rep)))

    def folded_dim(self, rep: QuiverRep) -> list[int]:
        return [int(x) for x in self.fold @ np.array(rep.dims, dtype=np.int64)]


def rank_vector(y: AlgModule) -> RankResult:
    """Freeness of each e_i Y over K[ε_i]/(ε_i^{c_i}) by the rank profile of ε_i."""
    alg = y.algebra
    data = alg.h_data
    p = y.p
    ranks = []
    for i in range(data.ct.n):
        c = data.ct.D[i]
        space = y.idempotent_space(i)
        d = space.shape[0]
        if d % c:
            return RankResult(False, None, (i, 0))
        r = d // c
        if d == 0:
            ranks.append(0)
            continue
        op = fl.coords(space, (y.action(alg.eps[i]) @ space.T).T % p, p).T
        power = np.eye(d, dtype=np.int64)
        for k in range(c + 1):
            if fl.rank(power, p) != (c - k) * r:
                return RankResult(False, None, (i, k))
            power = op @ power % p
        ranks.append(r)
    return RankResult(True, ranks)


def h_module(alg, dims: list[int], eps: list, arrows: list) -> AlgModule:
    """An H-module from block data: e_i acts on coordinates of vertex i, eps[i] and arrows[a] are full matrices."""
    data = alg.h_data
    p = alg.p
    d = sum(dims)
    idem = []
    off = 0
    for k in dims:
        e = np.zeros((d, d), dtype=np.int64)
        e[off:off + k, off:off + k] = np.eye(k, dtype=np.int64)
        idem.append(e)
        off += k
    act = np.zeros((alg.dim, d, d), dtype=np.int64)
    for idx, w in enumerate(alg.h_words):
        m = idem[w.target] @ np.linalg.matrix_power(np.asarray(eps[w.target], dtype=np.int64), w.exps[0]) % p
        for j, a in enumerate(w.arrows):
            s = data.quiver.source(a)
            m = m @ np.asarray(arrows[a], dtype=np.int64) % p
            m = m @ np.linalg.matrix_power(np.asarray(eps[s], dtype=np.int64), w.exps[j + 1]) % p
        src = data.source_of(w)
        act[idx] = m @ idem[src] % p
    return AlgModule(alg, act, check=True)
