"""Quotient EI quiver of a group action on an EI quiver and the comparison functor
C(Q̄, Ū) -> C(Q, U) ⋊ G."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .eicat import (EIAction, EIQuiver, FreeEICategory, Functor, build_free_ei_category, category_action,
                    functor_from_ei_data, is_free_ei, skew_category, unfactorizable_set)
from .errors import InvalidChoices
from .fingroup import Biset, FinGroup, biset_product, direct_product, is_equivariant, restricted_regular, semidirect
from .quiver import quotient_quiver


@dataclass
class QuotientChoices:
    iota0: list  # orbit vertex -> vertex
    iota1: list  # orbit arrow -> arrow
    g_alpha: list  # orbit arrow -> group element
    coset_reps: list  # orbit arrow -> [h_1 = 1, ..., h_m] with G_t = ⊔ h_r G_α


def _coset_reps_within(group: FinGroup, big, sub, pick=min) -> list[int]:
    """Representatives of the cosets hK inside the subgroup `big`, identity first."""
    big, sub = sorted(big), sorted(sub)
    remaining = set(big)
    reps = []
    first = True
    while remaining:
        coset_of = {}
        for h in sorted(remaining):
            c = frozenset(group.m(h, k) for k in sub)
            coset_of.setdefault(c, []).append(h)
        c0 = min(coset_of, key=lambda c: min(c))
        members = sorted(c0)
        r = 0 if first else pick(members)
        first = False
        reps.append(r)
        remaining -= set(members)
    return reps


def default_choices(ea: EIAction) -> QuotientChoices:
    """Least-id sections, least group elements and least coset representatives."""
    q, act = ea.eiquiver.quiver, ea.quiver_act
    qbar, pi0, pi1 = quotient_quiver(q, act)
    return _choices(q, act, qbar, pi0, pi1, random_pick=None)


def random_choices(ea: EIAction, rng: random.Random) -> QuotientChoices:
    """A random valid choice of sections and coset representatives."""
    q, act = ea.eiquiver.quiver, ea.quiver_act
    qbar, pi0, pi1 = quotient_quiver(q, act)
    return _choices(q, act, qbar, pi0, pi1, random_pick=rng)


def _choices(q, act, qbar, pi0, pi1, random_pick):
    grp = act.group
    pick = min if random_pick is None else random_pick.choice
    iota0 = []
    for k in range(qbar.n):
        iota0.append(pick([v for v in range(q.n) if pi0[v] == k]))
    iota1, g_alpha, reps = [], [], []
    for k in range(qbar.num_arrows):
        s_orb, t_orb = qbar.arrows[k]
        cands = [a for a in range(q.num_arrows) if pi1[a] == k and q.target(a) == iota0[t_orb]]
        if not cands:
            raise InvalidChoices(f"no arrow in orbit {k} ends at the chosen target vertex")
        a = pick(cands)
        gs = [g for g in range(grp.order) if act.v(g, iota0[s_orb]) == q.source(a)]
        iota1.append(a)
        g_alpha.append(pick(gs))
        reps.append(_coset_reps_within(grp, act.vertex_stabilizer(q.target(a)), act.arrow_stabilizer(a), pick))
    return QuotientChoices(iota0, iota1, g_alpha, reps)


def choice_problems(ea: EIAction, ch: QuotientChoices) -> list[str]:
    q, act = ea.eiquiver.quiver, ea.quiver_act
    grp = act.group
    qbar, pi0, pi1 = quotient_quiver(q, act)
    out = []
    if len(ch.iota0) != qbar.n or len(ch.iota1) != qbar.num_arrows:
        return ["choice sizes do not match the quotient quiver"]
    for k, v in enumerate(ch.iota0):
        if pi0[v] != k:
            out.append(f"iota0 is not a section at {k}")
    for k, a in enumerate(ch.iota1):
        s_orb, t_orb = qbar.arrows[k]
        if pi1[a] != k:
            out.append(f"iota1 is not a section at {k}")
            continue
        if q.target(a) != ch.iota0[t_orb]:
            out.append(f"target of iota1({k}) is not iota0 of the target orbit")
        if q.source(a) != act.v(ch.g_alpha[k], ch.iota0[s_orb]):
            out.append(f"g_alpha({k}) does not carry iota0 of the source orbit to the source of iota1({k})")
        big = act.vertex_stabilizer(q.target(a))
        sub = act.arrow_stabilizer(a)
        reps = ch.coset_reps[k]
        if not reps or reps[0] != 0:
            out.append(f"coset representatives of {k} do not start with the identity")
        cosets = [frozenset(grp.m(h, x) for x in sub) for h in reps]
        if any(h not in big for h in reps) or len(set(cosets)) != len(cosets) or \
                set().union(*cosets) != set(big):
            out.append(f"coset representatives of {k} do not decompose the target stabilizer")
    return out


class QuotientEIQuiver:
    """(Q̄, Ū) with Ū(i) = U(ι0 i) ⋊ G_ι0(i) and Ū(α) = U(ι1 α) × (G_t ×_{G_ι1(α)} G_s).

    Elements of Ū(i) are (a, k) encoded a*|G_i| + k (k indexes the sorted
    stabilizer); elements of Ū(α) are (u, r, k) encoded (u*m + r)*|G_s| + k.
    """

    def __init__(self, ea: EIAction, choices: QuotientChoices):
        problems = choice_problems(ea, choices)
        if problems:
            raise InvalidChoices("; ".join(problems))
        self.action = ea
        self.choices = choices
        eq, act = ea.eiquiver, ea.quiver_act
        grp = act.group
        q = eq.quiver
        qbar, self.pi0, self.pi1 = quotient_quiver(q, act)
        self.stab, self.stab_emb = [], []
        groups = []
        for k in range(qbar.n):
            i = choices.iota0[k]
            sg, emb = grp.subgroup(act.vertex_stabilizer(i))
            self.stab.append(sg)
            self.stab_emb.append(emb)
            phi = [ea.vmaps[g][i] for g in emb]
            groups.append(semidirect(eq.groups[i], sg, phi))
        self.general_bisets = []
        for k in range(qbar.num_arrows):
            self.general_bisets.append(self._arrow_biset(k, qbar, groups))
        self.base = EIQuiver(qbar, groups, self.general_bisets)
        self.simplified = None
        if self.triviality_conditions():
            self.simplified = self._simplified_bisets(qbar, groups)

    def _arrow_biset(self, k, qbar, groups) -> Biset:
        ea, ch = self.action, self.choices
        eq, act = ea.eiquiver, ea.quiver_act
        grp = act.group
        s_orb, t_orb = qbar.arrows[k]
        a = ch.iota1[k]
        t = ch.iota0[t_orb]
        s0 = ch.iota0[s_orb]
        ga = ch.g_alpha[k]
        reps = ch.coset_reps[k]
        m = len(reps)
        ua = eq.bisets[a]
        ut, us = eq.groups[t], eq.groups[s0]
        gt_emb, gs_emb = self.stab_emb[t_orb], self.stab_emb[s_orb]
        gs_pos = {g: x for x, g in enumerate(gs_emb)}
        ns = len(gs_emb)
        stab_a = act.arrow_stabilizer(a)
        size = ua.size * m * ns

        def enc(u, r, kk):
            return (u * m + r) * ns + kk

        right = np.zeros((groups[s_orb].order, size), dtype=np.int64)
        for ai in range(us.order):
            for gi, g in enumerate(gs_emb):
                y = ai * ns + gi
                for u in range(ua.size):
                    for r in range(m):
                        for kk, kel in enumerate(gs_emb):
                            ga_k = grp.m(ga, kel)
                            img = int(ea.vmaps[ga_k][s0][ai])
                            nu = int(ua.right[img, u])
                            right[y, enc(u, r, kk)] = enc(nu, r, gs_pos[grp.m(kel, g)])
        left = np.zeros((groups[t_orb].order, size), dtype=np.int64)
        ga_inv = grp.i(ga)
        for bi in range(ut.order):
            for hi, h in enumerate(gt_emb):
                y = bi * len(gt_emb) + hi
                for r, hr in enumerate(reps):
                    hhr = grp.m(h, hr)
                    p = next(pp for pp, hp in enumerate(reps) if grp.m(grp.i(hp), hhr) in stab_a)
                    hp = reps[p]
                    kprime = grp.m(grp.i(hp), hhr)
                    b2 = int(ea.vmaps[grp.i(hp)][t][bi])
                    conj = grp.m(grp.m(ga_inv, kprime), ga)
                    for u in range(ua.size):
                        u2 = int(ua.left[b2, ea.amaps[kprime][a][u]])
                        for kk, kel in enumerate(gs_emb):
                            left[y, enc(u, r, kk)] = enc(u2, p, gs_pos[grp.m(conj, kel)])
        return Biset(groups[t_orb], groups[s_orb], size, left, right)

    def triviality_conditions(self) -> bool:
        """G_i fixes U(i) pointwise and G_α fixes U(α) pointwise."""
        ea = self.action
        act = ea.quiver_act
        q = ea.eiquiver.quiver
        for i in range(q.n):
            for g in act.vertex_stabilizer(i):
                if not np.array_equal(ea.vmaps[g][i], np.arange(len(ea.vmaps[g][i]))):
                    return False
        for a in range(q.num_arrows):
            for g in act.arrow_stabilizer(a):
                if not np.array_equal(ea.amaps[g][a], np.arange(len(ea.amaps[g][a]))):
                    return False
        return True

    def _simplified_bisets(self, qbar, groups):
        """Direct-product description valid under the triviality conditions, with the
        comparison maps to the general bisets; returns (bisets, maps)."""
        ea, ch = self.action, self.choices
        eq, act = ea.eiquiver, ea.quiver_act
        grp = act.group
        bisets, maps = [], []
        for k in range(qbar.num_arrows):
            s_orb, t_orb = qbar.arrows[k]
            a = ch.iota1[k]
            ga = ch.g_alpha[k]
            t, s0 = ch.iota0[t_orb], ch.iota0[s_orb]
            gt, gt_emb = self.stab[t_orb], self.stab_emb[t_orb]
            gs, gs_emb = self.stab[s_orb], self.stab_emb[s_orb]
            ka, ka_emb = grp.subgroup(act.arrow_stabilizer(a))
            gt_pos = {g: x for x, g in enumerate(gt_emb)}
            gs_pos = {g: x for x, g in enumerate(gs_emb)}
            left_part = restricted_regular(gt, ka, [gt_pos[x] for x in ka_emb], "right")
            conj = [gs_pos[grp.m(grp.m(grp.i(ga), x), ga)] for x in ka_emb]
            right_part = restricted_regular(gs, ka, conj, "left")
            mid = biset_product(left_part, right_part)
            ua = eq.bisets[a]
            ut, us = eq.groups[t], eq.groups[s0]
            lg = direct_product(ut, gt)
            rg = direct_product(us, gs)
            if lg != groups[t_orb] or rg != groups[s_orb]:
                raise InvalidChoices("vertex groups are not direct products under the triviality conditions")
            size = ua.size * mid.size
            left = np.zeros((lg.order, size), dtype=np.int64)
            right = np.zeros((rg.order, size), dtype=np.int64)
            for u in range(ua.size):
                for c in range(mid.size):
                    x = u * mid.size + c
                    for b in range(ut.order):
                        for gi in range(gt.order):
                            left[b * gt.order + gi, x] = int(ua.left[b, u]) * mid.size + int(mid.left[gi, c])
                    for av in range(us.order):
                        img = int(ea.vmaps[ga][s0][av])
                        for gi in range(gs.order):
                            right[av * gs.order + gi, x] = int(ua.right[img, u]) * mid.size + int(mid.right[gi, c])
            simple = Biset(lg, rg, size, left, right)
            reps = ch.coset_reps[k]
            m = len(reps)
            f = np.zeros(self.general_bisets[k].size, dtype=np.int64)
            for u in range(ua.size):
                for r, hr in enumerate(reps):
                    for kk in range(gs.order):
                        f[(u * m + r) * gs.order + kk] = u * mid.size + int(mid.class_of[gt_pos[hr], kk])
            bisets.append(simple)
            maps.append(f)
        return bisets, maps

    def simplified_agrees(self) -> bool | None:
        """Whether the general bisets match the direct-product formulas (None if they do not apply)."""
        if self.simplified is None:
            return None
        for gen, simple, f in zip(self.general_bisets, *self.simplified):
            if gen.size != simple.size or sorted(f.tolist()) != list(range(simple.size)):
                return False
            if not is_equivariant(f, gen, simple):
                return False
        return True

    def expected_biset_size(self, k: int) -> int:
        ea, ch = self.action, self.choices
        act = ea.quiver_act
        s_orb, t_orb = self.base.quiver.arrows[k]
        a = ch.iota1[k]
        return (ea.eiquiver.bisets[a].size * len(act.vertex_stabilizer(ch.iota0[t_orb]))
                * len(act.vertex_stabilizer(ch.iota0[s_orb])) // len(act.arrow_stabilizer(a)))


def quotient_ei_quiver(ea: EIAction, choices: QuotientChoices | None = None) -> QuotientEIQuiver:
    return QuotientEIQuiver(ea, choices if choices is not None else default_choices(ea))


class Equivalence(Functor):
    """The comparison functor together with the categories it was built from."""

    quotient: QuotientEIQuiver
    base_category: FreeEICategory


def equivalence_functor(qe: QuotientEIQuiver) -> Equivalence:
    """C(Q̄, Ū) -> C(Q, U) ⋊ G: i ↦ ι0(i), (a, k) ↦ (a, k), (u, (h_r, k)) ↦ (h_r(u), h_r g_α k)."""
    ea, ch = qe.action, qe.choices
    act = ea.quiver_act
    grp = act.group
    no = grp.order
    base = build_free_ei_category(ea.eiquiver)
    cact = category_action(base, ea)
    skew = skew_category(base, cact)
    src = build_free_ei_category(qe.base)
    qbar = qe.base.quiver
    vertex_maps = []
    for k in range(qbar.n):
        i = ch.iota0[k]
        emb = qe.stab_emb[k]
        path_k = base.path_index[(i, ())]
        img = []
        for x in range(qe.base.groups[k].order):
            a, gi = divmod(x, len(emb))
            img.append(base.mor_of[(path_k, a)] * no + emb[gi])
        vertex_maps.append(img)
    arrow_maps = []
    for k in range(qbar.num_arrows):
        s_orb, _t = qbar.arrows[k]
        a = ch.iota1[k]
        reps = ch.coset_reps[k]
        m = len(reps)
        gs_emb = qe.stab_emb[s_orb]
        ns = len(gs_emb)
        img = []
        for x in range(qe.base.bisets[k].size):
            rest, kk = divmod(x, ns)
            u, r = divmod(rest, m)
            hr = reps[r]
            moved = act.a(hr, a)
            path = base.path_index[(ea.eiquiver.quiver.source(moved), (moved,))]
            mor = base.mor_of[(path, int(ea.amaps[hr][a][u]))]
            g = grp.m(grp.m(hr, ch.g_alpha[k]), gs_emb[kk])
            img.append(mor * no + g)
        arrow_maps.append(img)
    f = functor_from_ei_data(src, skew, ch.iota0, vertex_maps, arrow_maps)
    eqv = Equivalence(src, skew, f.obj_map, f.mor_map)
    eqv.quotient = qe
    eqv.base_category = base
    return eqv


def verify_equivalence(f: Functor, cap: int = 200) -> dict:
    """Free target, distinct and covering objects, matching generators, plus full faithfulness."""
    src, dst = f.src, f.dst
    report = {}
    if dst.n_mor <= cap:
        report["target_free"] = is_free_ei(dst, cap)
        report["target_free_route"] = "exhaustive on target"
    else:
        base = getattr(dst, "base", None)
        if base is not None and base.n_mor <= cap:
            report["target_free"] = is_free_ei(base, cap)
            report["target_free_route"] = "exhaustive on the underlying category (freeness transfers to the skew category)"
        else:
            report["target_free"] = isinstance(base, FreeEICategory)
            report["target_free_route"] = "underlying category is free by construction"
    objs = f.obj_map
    report["objects_distinct"] = all(not dst.isomorphic(objs[i], objs[j]) for i in range(src.n_obj) for j in range(src.n_obj)
                       if i != j)
    report["essentially_surjective"] = all(any(dst.isomorphic(objs[i], y) for i in range(src.n_obj)) for y in range(dst.n_obj))
    gens_ok = True
    for i in range(src.n_obj):
        auts = sorted(int(f.mor_map[m]) for m in src.hom(i, i))
        if auts != sorted(dst.hom(objs[i], objs[i])):
            gens_ok = False
    unf_dst = unfactorizable_set(dst)
    for i in range(src.n_obj):
        for j in range(src.n_obj):
            if i == j:
                continue
            gens = src.unfactorizable_by_arrows(i, j) if isinstance(src, FreeEICategory) else []
            img = sorted(int(f.mor_map[m]) for m in gens)
            target = sorted(m for m in dst.hom(objs[i], objs[j]) if m in unf_dst)
            if img != target:
                gens_ok = False
    report["generators_match"] = gens_ok
    report["hom_cardinality"] = all(len(src.hom(i, j)) == len(dst.hom(objs[i], objs[j]))
                                    for i in range(src.n_obj) for j in range(src.n_obj))
    report["fully_faithful"] = all(f.hom_bijective(i, j) for i in range(src.n_obj) for j in range(src.n_obj))
    report["functor_laws"] = f.law_witness() is None
    report["ok"] = all(report[k] for k in ("target_free", "objects_distinct", "essentially_surjective", "generators_match"))
    return report

