"""EI quivers, free EI categories, skew group categories and EI/freeness predicates.

Finite categories are stored eagerly: a morphism list with domains and
codomains plus a full composition table comp[b, a] = b∘a (or -1).
"""

from __future__ import annotations

import numpy as np

from .errors import ActionInvalid, ConstructionFailure, NotEI, TooLarge
from .fingroup import Biset, FinGroup, biset_product, is_equivariant, is_group_hom, point_biset, regular_biset, \
    trivial_group
from .quiver import Path, Quiver, QuiverAction, enumerate_paths


class EIQuiver:
    """An acyclic quiver with a group per vertex and a (U(t), U(s))-biset per arrow."""

    def __init__(self, quiver: Quiver, groups: list[FinGroup], bisets: list[Biset]):
        self.quiver = quiver
        self.groups = list(groups)
        self.bisets = list(bisets)
        if len(self.groups) != quiver.n or len(self.bisets) != quiver.num_arrows:
            raise ValueError("assignment sizes do not match the quiver")
        for a, (s, t) in enumerate(quiver.arrows):
            b = self.bisets[a]
            if b.size == 0:
                raise ValueError(f"empty biset on arrow {a}")
            if b.left_group != self.groups[t] or b.right_group != self.groups[s]:
                raise ValueError(f"biset groups on arrow {a} do not match its endpoints")

    @staticmethod
    def trivial(q: Quiver) -> "EIQuiver":
        one = trivial_group()
        return EIQuiver(q, [one] * q.n, [point_biset(one, one) for _ in q.arrows])


class FiniteCategory:
    """A finite category with a full composition table."""

    def __init__(self, n_obj: int, dom, cod, keys, compose, identities, obj_labels=None, mor_labels=None):
        self.n_obj = n_obj
        self.dom = np.array(dom, dtype=np.int64)
        self.cod = np.array(cod, dtype=np.int64)
        self.keys = list(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.identities = list(identities)
        self.obj_labels = obj_labels if obj_labels is not None else [str(i) for i in range(n_obj)]
        self.mor_labels = mor_labels
        n = len(self.keys)
        self.homs = {}
        for m in range(n):
            self.homs.setdefault((int(self.dom[m]), int(self.cod[m])), []).append(m)
        if isinstance(compose, np.ndarray):
            self.comp = compose
        else:
            self.comp = np.full((n, n), -1, dtype=np.int64)
            for a in range(n):
                for b in self.out_of(int(self.cod[a])):
                    self.comp[b, a] = compose(b, a)
        self._inverse = None

    @property
    def n_mor(self) -> int:
        return len(self.keys)

    def hom(self, x: int, y: int) -> list[int]:
        return self.homs.get((x, y), [])

    def out_of(self, x: int) -> list[int]:
        return [m for (s, _), ms in self.homs.items() if s == x for m in ms]

    def into(self, y: int) -> list[int]:
        return [m for (_, t), ms in self.homs.items() if t == y for m in ms]

    def label(self, m: int) -> str:
        return self.mor_labels[m] if self.mor_labels else str(self.keys[m])

    def axiom_problems(self) -> list[str]:
        out = []
        for x in range(self.n_obj):
            e = self.identities[x]
            if self.dom[e] != x or self.cod[e] != x:
                out.append(f"identity of {x} has wrong endpoints")
            for m in self.out_of(x):
                if self.comp[m, e] != m:
                    out.append(f"m∘id != m for {m}")
            for m in self.into(x):
                if self.comp[e, m] != m:
                    out.append(f"id∘m != m for {m}")
        for b in range(self.n_mor):
            ins = np.array(self.into(int(self.dom[b])), dtype=np.int64)
            outs = np.array(self.out_of(int(self.cod[b])), dtype=np.int64)
            if len(ins) == 0 or len(outs) == 0:
                continue
            ba = self.comp[b, ins]
            cb = self.comp[outs, b]
            if np.any(ba < 0) or np.any(cb < 0):
                out.append("composition table has holes")
                continue
            lhs = self.comp[outs[:, None], ba[None, :]]
            rhs = self.comp[cb[:, None], ins[None, :]]
            if not np.array_equal(lhs, rhs):
                out.append(f"associativity fails around {b}")
        return out

    def inverses(self) -> np.ndarray:
        """inv[m] = inverse of m or -1."""
        if self._inverse is None:
            inv = np.full(self.n_mor, -1, dtype=np.int64)
            for m in range(self.n_mor):
                x, y = int(self.dom[m]), int(self.cod[m])
                for n in self.hom(y, x):
                    if self.comp[n, m] == self.identities[x] and self.comp[m, n] == self.identities[y]:
                        inv[m] = n
                        break
            self._inverse = inv
        return self._inverse

    def is_iso(self, m: int) -> bool:
        return self.inverses()[m] >= 0

    def isomorphic(self, x: int, y: int) -> bool:
        return any(self.is_iso(m) for m in self.hom(x, y))

    def hom_profile(self) -> np.ndarray:
        prof = np.zeros((self.n_obj, self.n_obj), dtype=np.int64)
        for (x, y), ms in self.homs.items():
            prof[x, y] = len(ms)
        return prof


class FreeEICategory(FiniteCategory):
    """C(Q, U): morphisms are (path, element of the iterated biset product U(path))."""

    def __init__(self, eq: EIQuiver):
        self.eiquiver = eq
        q = eq.quiver
        self.paths = enumerate_paths(q)
        self.path_index = {(p.source, p.arrows): k for k, p in enumerate(self.paths)}
        self._bisets = {}
        self.mor_path, self.mor_elem = [], []
        keys, dom, cod = [], [], []
        for k, p in enumerate(self.paths):
            for e in range(self.path_biset(p).size):
                keys.append((p.source, p.arrows, e))
                dom.append(p.source)
                cod.append(p.target)
                self.mor_path.append(k)
                self.mor_elem.append(e)
        self.mor_of = {(self.mor_path[m], self.mor_elem[m]): m for m in range(len(keys))}
        identities = [self.mor_of[(self.path_index[(v, ())], 0)] for v in range(q.n)]
        labels = [self._label(m) for m in range(len(keys))]
        super().__init__(q.n, dom, cod, keys, self._compose, identities, q.vertex_labels, labels)

    def path_biset(self, p: Path) -> Biset:
        key = (p.source, p.arrows)
        if key not in self._bisets:
            eq = self.eiquiver
            if not p.arrows:
                b = regular_biset(eq.groups[p.source])
            elif len(p.arrows) == 1:
                b = eq.bisets[p.arrows[0]]
            else:
                rest = Path(p.source, eq.quiver.source(p.arrows[0]), p.arrows[1:])
                b = biset_product(eq.bisets[p.arrows[0]], self.path_biset(rest))
            self._bisets[key] = b
        return self._bisets[key]

    def suffix(self, p: Path, k: int) -> Path:
        """The path made of the last k arrows of p (the first k traversed)."""
        arrows = p.arrows[len(p.arrows) - k:]
        tgt = self.eiquiver.quiver.target(arrows[0]) if arrows else p.source
        return Path(p.source, tgt, arrows)

    def elem_tuple(self, m: int) -> tuple:
        """Canonical component tuple (u_n, ..., u_1) of a morphism (group element for trivial paths)."""
        p = self.paths[self.mor_path[m]]
        return self._tuple(p, self.mor_elem[m])

    def _tuple(self, p: Path, e: int) -> tuple:
        if len(p.arrows) <= 1:
            return (e,)
        a, r = self.path_biset(p).pairs[e]
        return (a,) + self._tuple(Path(p.source, self.eiquiver.quiver.source(p.arrows[0]), p.arrows[1:]), r)

    def fold(self, p: Path, comps: tuple) -> int:
        """Element of U(p) represented by the component tuple (u_n, ..., u_1)."""
        if len(p.arrows) <= 1:
            return comps[0]
        n = len(p.arrows)
        cur = comps[-1]
        for k in range(2, n + 1):
            cur = int(self.path_biset(self.suffix(p, k)).class_of[comps[n - k], cur])
        return cur

    def morphism(self, p: Path, comps: tuple) -> int:
        return self.mor_of[(self.path_index[(p.source, p.arrows)], self.fold(p, comps))]

    def _compose(self, b: int, a: int) -> int:
        pa, pb = self.paths[self.mor_path[a]], self.paths[self.mor_path[b]]
        ea, eb = self.mor_elem[a], self.mor_elem[b]
        if not pb.arrows:
            if not pa.arrows:
                g = self.eiquiver.groups[pa.source]
                return self.mor_of[(self.mor_path[a], g.m(eb, ea))]
            return self.mor_of[(self.mor_path[a], int(self.path_biset(pa).left[eb, ea]))]
        if not pa.arrows:
            return self.mor_of[(self.mor_path[b], int(self.path_biset(pb).right[ea, eb]))]
        p = pb.compose(pa)
        return self.morphism(p, self._tuple(pb, eb) + self._tuple(pa, ea))

    def _label(self, m: int) -> str:
        q = self.eiquiver.quiver
        p = self.paths[self.mor_path[m]]
        if not p.arrows:
            return f"{self.eiquiver.groups[p.source].labels[self.mor_elem[m]]}@{q.vertex_labels[p.source]}"
        return "*".join(q.arrow_labels[a] for a in p.arrows) + f"[{self.mor_elem[m]}]"

    def unfactorizable_by_arrows(self, i: int, j: int) -> list[int]:
        """Morphisms u ∈ U(α) for arrows α: i -> j."""
        q = self.eiquiver.quiver
        out = []
        for a in q.arrows_from(i):
            if q.target(a) == j:
                k = self.path_index[(i, (a,))]
                out.extend(self.mor_of[(k, e)] for e in range(self.eiquiver.bisets[a].size))
        return sorted(out)


def build_free_ei_category(eq: EIQuiver) -> FreeEICategory:
    return FreeEICategory(eq)


class EIAction:
    """A group acting on an EI quiver: a quiver action plus group isomorphisms
    U(i) -> U(g i) and biset bijections U(α) -> U(g α).

    vmaps[g][i] and amaps[g][a] are index arrays.
    """

    def __init__(self, eq: EIQuiver, act: QuiverAction, vmaps, amaps, check=True):
        self.eiquiver = eq
        self.quiver_act = act
        self.group = act.group
        self.vmaps = [[np.asarray(vmaps[g][i], dtype=np.int64) for i in range(eq.quiver.n)]
                      for g in range(act.group.order)]
        self.amaps = [[np.asarray(amaps[g][a], dtype=np.int64) for a in range(eq.quiver.num_arrows)]
                      for g in range(act.group.order)]
        if check:
            problems = self.problems()
            if problems:
                raise ActionInvalid("; ".join(problems))

    def problems(self) -> list[str]:
        eq, act, grp = self.eiquiver, self.quiver_act, self.group
        q = eq.quiver
        out = []
        for g in range(grp.order):
            for i in range(q.n):
                f, j = self.vmaps[g][i], act.v(g, i)
                if sorted(f.tolist()) != list(range(eq.groups[j].order)) or len(f) != eq.groups[i].order:
                    out.append(f"vertex map ({g},{i}) is not a bijection")
                elif not is_group_hom(f, eq.groups[i], eq.groups[j]):
                    out.append(f"vertex map ({g},{i}) is not a homomorphism")
            for a, (s, t) in enumerate(q.arrows):
                f, b = self.amaps[g][a], act.a(g, a)
                if len(f) != eq.bisets[a].size or sorted(f.tolist()) != list(range(eq.bisets[b].size)):
                    out.append(f"arrow map ({g},{a}) is not a bijection")
                elif not is_equivariant(f, eq.bisets[a], eq.bisets[b], self.vmaps[g][t], self.vmaps[g][s]):
                    out.append(f"arrow map ({g},{a}) is not equivariant")
        if out:
            return out
        for g in range(grp.order):
            for h in range(grp.order):
                gh = grp.m(g, h)
                for i in range(q.n):
                    if not np.array_equal(self.vmaps[gh][i], self.vmaps[g][act.v(h, i)][self.vmaps[h][i]]):
                        out.append(f"vertex maps violate the composition law at ({g},{h},{i})")
                for a in range(q.num_arrows):
                    if not np.array_equal(self.amaps[gh][a], self.amaps[g][act.a(h, a)][self.amaps[h][a]]):
                        out.append(f"arrow maps violate the composition law at ({g},{h},{a})")
        return out

    @staticmethod
    def identity_maps(eq: EIQuiver, act: QuiverAction) -> "EIAction":
        """The action moving groups and bisets by the identity; needs equal data along orbits."""
        q = eq.quiver
        vm = [[np.arange(eq.groups[i].order) for i in range(q.n)] for _ in range(act.group.order)]
        am = [[np.arange(eq.bisets[a].size) for a in range(q.num_arrows)] for _ in range(act.group.order)]
        return EIAction(eq, act, vm, am)

    @staticmethod
    def trivial_assignment(act: QuiverAction) -> "EIAction":
        return EIAction.identity_maps(EIQuiver.trivial(act.quiver), act)


class CategoryAction:
    """A group acting on a finite category: obj[g][x] and mor[g][m]."""

    def __init__(self, cat: FiniteCategory, group: FinGroup, obj, mor, check=True):
        self.cat = cat
        self.group = group
        self.obj = np.array(obj, dtype=np.int64).reshape(group.order, cat.n_obj)
        self.mor = np.array(mor, dtype=np.int64).reshape(group.order, cat.n_mor)
        if check:
            problems = self.problems()
            if problems:
                raise ActionInvalid("; ".join(problems))

    def problems(self) -> list[str]:
        c, grp = self.cat, self.group
        out = []
        for g in range(grp.order):
            f = self.mor[g]
            if sorted(f.tolist()) != list(range(c.n_mor)):
                out.append(f"element {g} does not permute morphisms")
                continue
            if not (np.array_equal(c.dom[f], self.obj[g][c.dom]) and np.array_equal(c.cod[f], self.obj[g][c.cod])):
                out.append(f"element {g} does not respect domains/codomains")
                continue
            if [int(f[c.identities[x]]) for x in range(c.n_obj)] != [c.identities[self.obj[g][x]]
                                                                     for x in range(c.n_obj)]:
                out.append(f"element {g} does not preserve identities")
            mask = c.comp >= 0
            lhs = f[c.comp[mask]]
            bb, aa = np.nonzero(mask)
            rhs = c.comp[f[bb], f[aa]]
            if not np.array_equal(lhs, rhs):
                out.append(f"element {g} does not preserve composition")
        if out:
            return out
        if not (np.array_equal(self.obj[0], np.arange(c.n_obj)) and np.array_equal(self.mor[0], np.arange(c.n_mor))):
            out.append("identity acts nontrivially")
        for g in range(grp.order):
            for h in range(grp.order):
                if not np.array_equal(self.mor[grp.m(g, h)], self.mor[g][self.mor[h]]):
                    out.append(f"not a homomorphism at ({g},{h})")
                    return out
        return out


def category_action(cat: FreeEICategory, ea: EIAction) -> CategoryAction:
    """The action on C(Q, U) induced by an action on (Q, U)."""
    grp = ea.group
    act = ea.quiver_act
    mor = np.zeros((grp.order, cat.n_mor), dtype=np.int64)
    for g in range(grp.order):
        for m in range(cat.n_mor):
            p = cat.paths[cat.mor_path[m]]
            comps = cat.elem_tuple(m)
            if not p.arrows:
                gp = Path(act.v(g, p.source), act.v(g, p.source), ())
                new = (int(ea.vmaps[g][p.source][comps[0]]),)
            else:
                arrows = tuple(act.a(g, a) for a in p.arrows)
                gp = Path(act.v(g, p.source), act.v(g, p.target), arrows)
                new = tuple(int(ea.amaps[g][a][u]) for a, u in zip(p.arrows, comps))
            mor[g, m] = cat.morphism(gp, new)
    return CategoryAction(cat, grp, act.vertex_act.perm, mor)


class SkewCategory(FiniteCategory):
    """C ⋊ G with morphisms (α, g), α: g(x) -> y, composed as (β,h)∘(α,g) = (β∘h(α), hg)."""

    def __init__(self, base: FiniteCategory, cact: CategoryAction):
        self.base = base
        self.cact = cact
        grp = cact.group
        no = grp.order
        inv_obj = [cact.obj[grp.i(g)] for g in range(no)]
        keys, dom, cod, labels = [], [], [], []
        for a in range(base.n_mor):
            for g in range(no):
                keys.append((a, g))
                dom.append(int(inv_obj[g][base.dom[a]]))
                cod.append(int(base.cod[a]))
                labels.append(f"({base.label(a)},{grp.labels[g]})")
        n = len(keys)
        comp = np.full((n, n), -1, dtype=np.int64)
        dom_a = np.array(dom)
        cod_a = np.array(cod)
        for b in range(base.n_mor):
            for h in range(no):
                bid = b * no + h
                alphas = [a for a in range(base.n_mor) if base.cod[cact.mor[h][a]] == base.dom[b]]
                for a in alphas:
                    c = base.comp[b, cact.mor[h][a]]
                    for g in range(no):
                        comp[bid, a * no + g] = c * no + grp.m(h, g)
        ids = [base.identities[x] * no for x in range(base.n_obj)]
        super().__init__(base.n_obj, dom_a, cod_a, keys, comp, ids, base.obj_labels, labels)


def skew_category(c: FiniteCategory, cact: CategoryAction) -> SkewCategory:
    problems = cact.problems()
    if problems:
        raise ActionInvalid("; ".join(problems))
    return SkewCategory(c, cact)


def is_ei(c: FiniteCategory) -> bool:
    return all(c.is_iso(m) for x in range(c.n_obj) for m in c.hom(x, x))


def is_admissible(c: FiniteCategory, cact: CategoryAction) -> bool:
    for g in range(cact.group.order):
        for x in range(c.n_obj):
            gx = int(cact.obj[g][x])
            if gx != x and c.hom(gx, x):
                return False
    return True


def unfactorizable_set(c: FiniteCategory) -> set[int]:
    if not is_ei(c):
        raise NotEI("category is not EI")
    noniso = np.array([not c.is_iso(m) for m in range(c.n_mor)])
    comp = c.comp
    mask = (comp >= 0) & noniso[:, None] & noniso[None, :]
    factorizable = set(comp[mask].tolist())
    return {m for m in range(c.n_mor) if noniso[m] and m not in factorizable}


def unfactorizable_morphisms(c: FiniteCategory, i: int, j: int) -> list[int]:
    unf = unfactorizable_set(c)
    return [m for m in c.hom(i, j) if m in unf]


def factorizations(c: FiniteCategory, m: int, unf: set[int] | None = None, _memo=None) -> list[tuple]:
    """All chains (u_1, ..., u_k) of unfactorizable morphisms with u_k∘...∘u_1 = m."""
    if unf is None:
        unf = unfactorizable_set(c)
    memo = {} if _memo is None else _memo
    if m in memo:
        return memo[m]
    out = []
    if m in unf:
        out.append((m,))
    x, y = int(c.dom[m]), int(c.cod[m])
    for u in c.out_of(x):
        if u not in unf:
            continue
        for g in c.hom(int(c.cod[u]), y):
            if c.is_iso(g) or c.comp[g, u] != m:
                continue
            for rest in factorizations(c, g, unf, memo):
                out.append((u,) + rest)
    memo[m] = out
    return out


def ladder_equivalent(c: FiniteCategory, a: tuple, b: tuple) -> bool:
    """Whether two factorizations are related by isomorphisms h_k with
    h_1 a_1 = b_1, h_k a_k = b_k h_{k-1} and a_m = ... ending in h_m = id."""
    if len(a) != len(b):
        return False
    m = len(a)

    def search(k, h_prev):
        # h_prev: iso cod(a_{k-1}) -> cod(b_{k-1}), or None for k = 0 (identity)
        lhs_b = b[k] if h_prev is None else c.comp[b[k], h_prev]
        if lhs_b < 0:
            return False
        if k == m - 1:
            return lhs_b == a[k] and c.cod[a[k]] == c.cod[b[k]]
        for h in c.hom(int(c.cod[a[k]]), int(c.cod[b[k]])):
            if c.is_iso(h) and c.comp[h, a[k]] == lhs_b:
                if search(k + 1, h):
                    return True
        return False

    # with h_k a_k = b_k h_{k-1}: we test b_k h_{k-1} against h_k a_k; at the last step h_m = id
    return search(0, None)


def is_free_ei(c: FiniteCategory, cap: int = 200) -> bool:
    if c.n_mor > cap:
        raise TooLarge(f"{c.n_mor} morphisms exceed the cap {cap}")
    if not is_ei(c):
        return False
    unf = unfactorizable_set(c)
    memo = {}
    for m in range(c.n_mor):
        if c.is_iso(m):
            continue
        chains = factorizations(c, m, unf, memo)
        if not chains:
            return False
        first = chains[0]
        for other in chains[1:]:
            if not ladder_equivalent(c, first, other):
                return False
    return True


def aut_group(c: FiniteCategory, x: int) -> tuple[FinGroup, list[int]]:
    """Aut(x) as a FinGroup; returns (group, morphism ids with identity first)."""
    ends = c.hom(x, x)
    if not all(c.is_iso(m) for m in ends):
        raise NotEI(f"object {x} has a non-invertible endomorphism")
    e = c.identities[x]
    order = [e] + [m for m in ends if m != e]
    pos = {m: k for k, m in enumerate(order)}
    tab = [[pos[int(c.comp[a, b])] for b in order] for a in order]
    labels = [c.label(m) for m in order]
    return FinGroup(tab, labels=labels), order


class Functor:
    """obj_map and mor_map between two finite categories."""

    def __init__(self, src: FiniteCategory, dst: FiniteCategory, obj_map, mor_map):
        self.src = src
        self.dst = dst
        self.obj_map = [int(x) for x in obj_map]
        self.mor_map = np.array(mor_map, dtype=np.int64)

    def law_witness(self):
        s, d = self.src, self.dst
        f = self.mor_map
        if np.any(f < 0):
            return ("undefined image", int(np.nonzero(f < 0)[0][0]))
        for m in range(s.n_mor):
            if d.dom[f[m]] != self.obj_map[s.dom[m]] or d.cod[f[m]] != self.obj_map[s.cod[m]]:
                return ("endpoints", m)
        for x in range(s.n_obj):
            if f[s.identities[x]] != d.identities[self.obj_map[x]]:
                return ("identity", x)
        bb, aa = np.nonzero(s.comp >= 0)
        lhs = f[s.comp[bb, aa]]
        rhs = d.comp[f[bb], f[aa]]
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            return ("composition", (int(bb[bad[0]]), int(aa[bad[0]])))
        return None

    def hom_bijective(self, x: int, y: int) -> bool:
        src = self.src.hom(x, y)
        img = sorted(int(self.mor_map[m]) for m in src)
        return img == sorted(self.dst.hom(self.obj_map[x], self.obj_map[y]))


def functor_from_ei_data(src: FreeEICategory, dst: FiniteCategory, obj_map, vertex_maps, arrow_maps) -> Functor:
    """The functor C(Q, U) -> D determined by images of group and biset elements."""
    mor = np.full(src.n_mor, -1, dtype=np.int64)
    for m in range(src.n_mor):
        p = src.paths[src.mor_path[m]]
        comps = src.elem_tuple(m)
        if not p.arrows:
            mor[m] = vertex_maps[p.source][comps[0]]
            continue
        cur = arrow_maps[p.arrows[-1]][comps[-1]]
        for a, u in zip(reversed(p.arrows[:-1]), reversed(comps[:-1])):
            cur = dst.comp[arrow_maps[a][u], cur]
            if cur < 0:
                raise ConstructionFailure("images are not composable", witness=m)
        mor[m] = cur
    f = Functor(src, dst, obj_map, mor)
    w = f.law_witness()
    if w is not None:
        raise ConstructionFailure(f"functor law fails: {w}", witness=w)
    return f
