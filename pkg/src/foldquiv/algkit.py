"""Finite-dimensional algebras over F_p given by structure constants: category algebras,
skew group algebras, the algebra H of a Cartan triple and its comparison with the
category algebra of the Cartan-type EI category."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd

import numpy as np

from . import fplinalg as fl
from .cartan import CartanTriple, cartan_type_ei_quiver, require_valid
from .eicat import (CategoryAction, EIAction, EIQuiver, FiniteCategory, build_free_ei_category, category_action,
                    skew_category)
from .errors import ActionInvalid, NotAdmissible, NotIso, NotPresented, PrecondViolated, TooLarge
from .fingroup import FinGroup
from .quiver import Quiver, QuiverAction, enumerate_paths


@dataclass
class Presentation:
    """A quiver with relations: vertices, arrows (loops allowed) as (src, dst, label) and relation strings."""

    n_vertices: int
    arrows: list
    relations: list
    vertex_labels: list
    generators: dict = field(default_factory=dict)  # label -> basis vector
    nilpotency: int | None = None  # least N with rad^N = 0


class StructAlgebra:
    """Basis b_0..b_{d-1} over F_p with b_a b_b = Σ_c mult[a, b, c] b_c."""

    def __init__(self, p: int, mult, labels=None, idempotents=None, idempotent_labels=None, presentation=None,
                 radical_basis=None):
        self.p = p
        self.mult = np.asarray(mult, dtype=np.int64) % p
        self.dim = self.mult.shape[0]
        self.labels = list(labels) if labels is not None else [f"b{k}" for k in range(self.dim)]
        self.idempotents = [np.asarray(e, dtype=np.int64) % p for e in (idempotents or [])]
        self.idempotent_labels = (list(idempotent_labels) if idempotent_labels is not None
                                  else [str(k) for k in range(len(self.idempotents))])
        self.presentation = presentation
        self.radical_basis = radical_basis
        self.skew_data = None
        self.gens = None  # vectors generating the algebra; None means the whole basis
        self._op = None
        self._unit = None

    def generator_vectors(self) -> list[np.ndarray]:
        if self.gens is not None:
            return list(self.gens)
        return [self.basis_vector(k) for k in range(self.dim)]

    def basis_vector(self, k: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[k] = 1
        return v

    def mul(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("a,b,abc->c", x, y, self.mult) % self.p

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of y ↦ x·y (columns indexed by basis of y)."""
        return np.einsum("a,abc->cb", np.asarray(x, dtype=np.int64), self.mult) % self.p

    def right_matrix(self, x) -> np.ndarray:
        """Matrix of y ↦ y·x."""
        return np.einsum("b,abc->ca", np.asarray(x, dtype=np.int64), self.mult) % self.p

    @property
    def unit(self) -> np.ndarray | None:
        if self._unit is None:
            eqs = np.concatenate([self.mult.transpose(1, 2, 0).reshape(-1, self.dim),
                                  self.mult.transpose(0, 2, 1).reshape(-1, self.dim)])
            rhs = np.concatenate([np.eye(self.dim, dtype=np.int64).reshape(-1)] * 2)
            self._unit = fl.solve(eqs % self.p, rhs % self.p, self.p)
        return self._unit

    def problems(self) -> list[str]:
        out = []
        m, p, d = self.mult, self.p, self.dim
        for a in range(d):
            lhs = np.einsum("be,ecd->bcd", m[a], m) % p
            rhs = np.einsum("bce,ed->bcd", m, m[a]) % p
            if not np.array_equal(lhs, rhs):
                out.append(f"associativity fails for basis element {self.labels[a]}")
                break
        if self.unit is None:
            out.append("no unit")
        if self.idempotents:
            es = self.idempotents
            for i, e in enumerate(es):
                for j, f in enumerate(es):
                    want = e if i == j else np.zeros(d, dtype=np.int64)
                    if not np.array_equal(self.mul(e, f), want):
                        out.append(f"idempotents {i},{j} are not orthogonal idempotents")
            if self.unit is not None and not np.array_equal(sum(es) % p, self.unit):
                out.append("idempotents do not sum to the unit")
        return out

    def opposite(self) -> "StructAlgebra":
        if self._op is None:
            op = StructAlgebra(self.p, self.mult.transpose(1, 0, 2), [f"{x}^op" for x in self.labels],
                               self.idempotents, self.idempotent_labels, None, self.radical_basis)
            op.gens = self.gens
            op._op = self
            self._op = op
        return self._op

    def span_product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row basis of the span of all products x·y with x in rows of a and y in rows of b."""
        if a.shape[0] == 0 or b.shape[0] == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        prods = np.einsum("ia,jb,abc->ijc", a, b, self.mult).reshape(-1, self.dim) % self.p
        return fl.row_basis(prods, self.p, self.dim)

    def ideal_generated(self, gens: np.ndarray) -> np.ndarray:
        full = np.eye(self.dim, dtype=np.int64)
        left = self.span_product(full, np.asarray(gens, dtype=np.int64).reshape(-1, self.dim))
        return self.span_product(left, full)

    def is_two_sided_ideal(self, basis: np.ndarray) -> bool:
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, self.dim)
        gen = self.ideal_generated(basis) if basis.shape[0] else basis
        return fl.rank(np.vstack([basis, gen]), self.p) == fl.rank(basis, self.p) if basis.shape[0] else True

    def nilpotency_index(self, basis: np.ndarray) -> int | None:
        """Least N with I^N = 0, or None when I is not nilpotent."""
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, self.dim)
        cur, n = fl.row_basis(basis, self.p, self.dim), 1
        while cur.shape[0]:
            nxt = self.span_product(cur, basis)
            if nxt.shape[0] == cur.shape[0]:
                return None
            cur, n = nxt, n + 1
        return n

    def __repr__(self):
        return f"StructAlgebra(p={self.p}, dim={self.dim})"


def is_algebra_hom(a: StructAlgebra, b: StructAlgebra, f: np.ndarray) -> bool:
    """f (dim b × dim a, columns = images of basis vectors) is multiplicative and unital."""
    p = a.p
    f = np.asarray(f, dtype=np.int64) % p
    lhs = np.einsum("abk,jk->abj", a.mult, f) % p
    rhs = np.einsum("ia,jb,ijk->abk", f, f, b.mult) % p
    if not np.array_equal(lhs, rhs):
        return False
    return a.unit is not None and b.unit is not None and np.array_equal(f @ a.unit % p, b.unit)


def is_algebra_iso(a: StructAlgebra, b: StructAlgebra, f: np.ndarray) -> bool:
    return a.dim == b.dim and fl.rank(np.asarray(f) % a.p, a.p) == a.dim and is_algebra_hom(a, b, f)


def category_algebra(c: FiniteCategory, p: int) -> StructAlgebra:
    """Basis = morphisms; x·y = x∘y when composable, else 0."""
    n = c.n_mor
    mult = np.zeros((n, n, n), dtype=np.int64)
    xs, ys = np.nonzero(c.comp >= 0)
    mult[xs, ys, c.comp[xs, ys]] = 1
    ids = []
    for x in range(c.n_obj):
        e = np.zeros(n, dtype=np.int64)
        e[c.identities[x]] = 1
        ids.append(e)
    labels = [c.label(m) for m in range(n)]
    return StructAlgebra(p, mult, labels, ids, list(c.obj_labels))


@dataclass
class AlgebraAction:
    """G acting on an algebra: mats[g] has the image of basis vector a as column a."""

    algebra: StructAlgebra
    group: FinGroup
    mats: list

    def problems(self) -> list[str]:
        a, p = self.algebra, self.algebra.p
        out = []
        for g, m in enumerate(self.mats):
            if not is_algebra_iso(a, a, m):
                out.append(f"element {g} does not act by an algebra automorphism")
        if out:
            return out
        if not np.array_equal(self.mats[0] % p, np.eye(a.dim, dtype=np.int64)):
            out.append("identity acts nontrivially")
        grp = self.group
        for g in range(grp.order):
            for h in range(grp.order):
                if not np.array_equal(self.mats[grp.m(g, h)] % p, self.mats[g] @ self.mats[h] % p):
                    out.append(f"action is not a homomorphism at ({g},{h})")
                    return out
        return out

    @staticmethod
    def from_permutations(algebra: StructAlgebra, group: FinGroup, perms) -> "AlgebraAction":
        mats = []
        for perm in perms:
            m = np.zeros((algebra.dim, algebra.dim), dtype=np.int64)
            m[np.asarray(perm), np.arange(algebra.dim)] = 1
            mats.append(m)
        return AlgebraAction(algebra, group, mats)


def skew_group_algebra(act: AlgebraAction, check: bool = True) -> StructAlgebra:
    """Basis a#g encoded a*|G| + g with (b#h)(a#g) = b·h(a) # hg."""
    if check:
        problems = act.problems()
        if problems:
            raise ActionInvalid("; ".join(problems))
    a, grp = act.algebra, act.group
    p, d, no = a.p, a.dim, act.group.order
    mats = np.array(act.mats, dtype=np.int64) % p
    # prod[b, h, a, :] = coefficients of b·h(a)
    prod = np.einsum("hea,bec->bhac", mats, a.mult) % p
    mult = np.zeros((d, no, d, no, d, no), dtype=np.int64)
    for h in range(no):
        for g in range(no):
            mult[:, h, :, g, :, grp.m(h, g)] = prod[:, h, :, :]
    mult = mult.reshape(d * no, d * no, d * no)
    labels = [f"{a.labels[x]}#{grp.labels[g]}" for x in range(d) for g in range(no)]
    idem = []
    for e in a.idempotents:
        v = np.zeros(d * no, dtype=np.int64)
        v[np.arange(d) * no] = e
        idem.append(v)
    out = StructAlgebra(p, mult, labels, idem, a.idempotent_labels)
    out.skew_data = act
    gens = [embed_in_skew(out, x) for x in a.generator_vectors()]
    for g in grp.generators:
        v = np.zeros(d * no, dtype=np.int64)
        v[np.arange(d) * no + g] = a.unit
        gens.append(v)
    out.gens = gens
    return out


def embed_in_skew(skew: StructAlgebra, x) -> np.ndarray:
    """x ∈ A ↦ x#1."""
    no = skew.skew_data.group.order
    v = np.zeros(skew.dim, dtype=np.int64)
    v[np.arange(len(x)) * no] = np.asarray(x, dtype=np.int64)
    return v


@dataclass
class PathAlgebraData:
    quiver: Quiver
    category: FiniteCategory
    algebra: StructAlgebra


def path_algebra(q: Quiver, p: int) -> StructAlgebra:
    """KQ for an acyclic quiver, basis = paths; radical = span of nontrivial paths."""
    cat = build_free_ei_category(EIQuiver.trivial(q))
    alg = category_algebra(cat, p)
    rad = np.array([alg.basis_vector(m) for m in range(cat.n_mor) if cat.paths[cat.mor_path[m]].length > 0],
                   dtype=np.int64).reshape(-1, alg.dim)
    gens = {q.vertex_labels[v]: alg.basis_vector(cat.identities[v]) for v in range(q.n)}
    for a in range(q.num_arrows):
        pth = cat.path_index[(q.source(a), (a,))]
        gens[q.arrow_labels[a]] = alg.basis_vector(cat.mor_of[(pth, 0)])
    pres = Presentation(q.n, [(s, t, q.arrow_labels[a]) for a, (s, t) in enumerate(q.arrows)], [],
                        list(q.vertex_labels), gens)
    alg.presentation = pres
    alg.radical_basis = rad
    alg.gens = list(gens.values())
    pres.nilpotency = alg.nilpotency_index(rad) if rad.shape[0] else 1
    alg.path_data = PathAlgebraData(q, cat, alg)
    return alg


def path_algebra_action(alg: StructAlgebra, act: QuiverAction) -> AlgebraAction:
    """The quiver action permuting the path basis of KQ."""
    cat = alg.path_data.category
    cact = category_action(cat, EIAction.trivial_assignment(act))
    return AlgebraAction.from_permutations(alg, act.group, cact.mor)


def skew_path_algebra(q: Quiver, act: QuiverAction, p: int) -> StructAlgebra:
    alg = path_algebra(q, p)
    return skew_group_algebra(path_algebra_action(alg, act))


def _skew_pair(cat, cact, p):
    skew = skew_category(cat, cact)
    left = category_algebra(skew, p)
    base = category_algebra(cat, p)
    right = skew_group_algebra(AlgebraAction.from_permutations(base, cact.group, cact.mor))
    f = np.zeros((right.dim, left.dim), dtype=np.int64)
    for m in range(skew.n_mor):
        f[m, m] = 1
    return left, right, f


def skew_isomorphism(cat: FiniteCategory, cact: CategoryAction, p: int) -> dict:
    """Check that (α, g) ↦ α#g is an algebra isomorphism K(C ⋊ G) -> KC # G."""
    left, right, f = _skew_pair(cat, cact, p)
    tables_equal = left.dim == right.dim and bool(np.array_equal(left.mult, right.mult))
    return {"dim_skew_category": left.dim, "dim_skew_algebra": right.dim, "tables_equal": tables_equal,
            "is_iso": is_algebra_iso(left, right, f), "left": left, "right": right, "map": f}


# The algebra H(C, D, Omega)


@dataclass(frozen=True)
class HWord:
    """ε_t^{e_0} α_1 ε^{e_1} ... α_m ε_s^{e_m}; arrows in composition order (α_1 ends at t)."""

    target: int
    arrows: tuple
    exps: tuple


class HAlgebraData:
    def __init__(self, ct: CartanTriple):
        self.ct = ct
        self.eq = cartan_type_ei_quiver(ct)
        self.quiver = self.eq.quiver
        c = ct.D
        self.f_t, self.f_s = [], []
        for a, (s, t) in enumerate(self.quiver.arrows):
            g = gcd(c[t], c[s])
            self.f_t.append(c[t] // g)
            self.f_s.append(c[s] // g)

    def source_of(self, w: HWord) -> int:
        return self.quiver.source(w.arrows[-1]) if w.arrows else w.target

    def normalize(self, target: int, arrows: tuple, exps: list) -> HWord | None:
        exps = list(exps)
        for k, a in enumerate(arrows):
            q, r = divmod(exps[k], self.f_t[a])
            exps[k] = r
            exps[k + 1] += q * self.f_s[a]
        src = self.quiver.source(arrows[-1]) if arrows else target
        if exps[-1] >= self.ct.D[src]:
            return None
        return HWord(target, tuple(arrows), tuple(exps))

    def words(self) -> list[HWord]:
        out = []
        for pth in enumerate_paths(self.quiver):
            ranges = [range(self.f_t[a]) for a in pth.arrows] + [range(self.ct.D[pth.source])]
            for ex in product(*ranges):
                out.append(HWord(pth.target, pth.arrows, tuple(ex)))
        out.sort(key=lambda w: (len(w.arrows), self.quiver.topo_pos[w.target], w.arrows, w.exps))
        return out

    def label(self, w: HWord) -> str:
        lab = self.ct.labels
        parts = []
        for k, e in enumerate(w.exps):
            v = w.target if k == 0 else self.quiver.source(w.arrows[k - 1])
            if e:
                parts.append(f"eps{lab[v]}" + (f"^{e}" if e > 1 else ""))
            if k < len(w.arrows):
                parts.append(self.quiver.arrow_labels[w.arrows[k]])
        return " ".join(parts) if parts else f"e{lab[w.target]}"


def algebra_h(ct: CartanTriple, p: int) -> StructAlgebra:
    """H(C, D, Ω) over F_p with the ε-pushed-right normal form basis."""
    require_valid(ct)
    data = HAlgebraData(ct)
    words = data.words()
    idx = {w: k for k, w in enumerate(words)}
    d = len(words)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for x in words:
        sx = data.source_of(x)
        for y in words:
            if y.target != sx:
                continue
            exps = list(x.exps[:-1]) + [x.exps[-1] + y.exps[0]] + list(y.exps[1:])
            z = data.normalize(x.target, x.arrows + y.arrows, exps)
            if z is not None:
                mult[idx[x], idx[y], idx[z]] = 1
    labels = [data.label(w) for w in words]
    ids = [np.eye(d, dtype=np.int64)[idx[HWord(i, (), (0,))]] for i in range(ct.n)]
    alg = StructAlgebra(p, mult, labels, ids, list(ct.labels))
    gens = {}
    for i in range(ct.n):
        gens[f"e{ct.labels[i]}"] = ids[i]
        w = HWord(i, (), (1,))
        gens[f"eps{ct.labels[i]}"] = alg.basis_vector(idx[w]) if w in idx else np.zeros(d, dtype=np.int64)
    q = data.quiver
    for a in range(q.num_arrows):
        gens[q.arrow_labels[a]] = alg.basis_vector(idx[HWord(q.target(a), (a,), (0, 0))])
    arrows = [(i, i, f"eps{ct.labels[i]}") for i in range(ct.n)]
    arrows += [(s, t, q.arrow_labels[a]) for a, (s, t) in enumerate(q.arrows)]
    rels = [f"eps{ct.labels[i]}^{ct.D[i]}" for i in range(ct.n)]
    for a, (s, t) in enumerate(q.arrows):
        rels.append(f"eps{ct.labels[t]}^{data.f_t[a]} {q.arrow_labels[a]} - "
                    f"{q.arrow_labels[a]} eps{ct.labels[s]}^{data.f_s[a]}")
    rad = np.array([alg.basis_vector(k) for k, w in enumerate(words) if w.arrows or w.exps[0] > 0],
                   dtype=np.int64).reshape(-1, d)
    pres = Presentation(ct.n, arrows, rels, list(ct.labels), gens)
    alg.presentation = pres
    alg.radical_basis = rad
    alg.gens = list(gens.values())
    alg.h_data = data
    alg.eps = [gens[f"eps{ct.labels[i]}"] for i in range(ct.n)]
    alg.h_words = words
    nil = alg.nilpotency_index(rad) if rad.shape[0] else 1
    if nil is None:
        raise NotAdmissible("arrow ideal is not nilpotent")
    pres.nilpotency = nil
    return alg


def _is_p_power(c: int, p: int) -> bool:
    while c % p == 0:
        c //= p
    return c == 1


@dataclass
class ThetaResult:
    source: StructAlgebra
    target: StructAlgebra
    matrix: np.ndarray
    category: FiniteCategory


def theta_iso(ct: CartanTriple, p: int) -> ThetaResult:
    """H(C, D, Ω) -> K·C(C, D, Ω): e ↦ Id, ε ↦ η - Id, α ↦ the class of (1, 1).

    The result is checked to be an algebra isomorphism.
    """
    if not fl.is_prime(p):
        raise PrecondViolated(f"{p} is not prime")
    bad = [c for c in ct.D if not _is_p_power(c, p)]
    if bad:
        raise PrecondViolated(f"symmetrizer entries {bad} are not powers of {p}")
    h = algebra_h(ct, p)
    data = h.h_data
    cat = build_free_ei_category(data.eq)
    kc = category_algebra(cat, p)
    q = data.quiver

    def morph(v, elem):
        pth = cat.path_index[(v, ())]
        return kc.basis_vector(cat.mor_of[(pth, elem)])

    eps_img = [(morph(i, 1 % ct.D[i]) - morph(i, 0)) % p for i in range(ct.n)]
    arrow_img = []
    for a in range(q.num_arrows):
        pth = cat.path_index[(q.source(a), (a,))]
        arrow_img.append(kc.basis_vector(cat.mor_of[(pth, 0)]))

    def power(x, e, v):
        out = morph(v, 0)
        for _ in range(e):
            out = kc.mul(out, x)
        return out

    f = np.zeros((kc.dim, h.dim), dtype=np.int64)
    for k, w in enumerate(h.h_words):
        v = w.target
        img = power(eps_img[v], w.exps[0], v)
        for j, a in enumerate(w.arrows):
            img = kc.mul(img, arrow_img[a])
            s = q.source(a)
            img = kc.mul(img, power(eps_img[s], w.exps[j + 1], s))
        f[:, k] = img
    if not is_algebra_iso(h, kc, f):
        raise NotIso("the generator assignment does not give an algebra isomorphism")
    return ThetaResult(h, kc, f, cat)


# Radicals and semisimplicity


def radical(alg: StructAlgebra) -> np.ndarray:
    """Radical of a presented algebra (arrow ideal) or of a skew path algebra."""
    if alg.skew_data is not None and hasattr(alg.skew_data.algebra, "path_data"):
        return radical_skew(alg)
    if alg.presentation is None or alg.radical_basis is None:
        raise NotPresented("radical needs a presented algebra or a skew path algebra")
    if alg.nilpotency_index(alg.radical_basis) is None:
        raise NotAdmissible("arrow ideal is not nilpotent")
    return alg.radical_basis


def radical_skew(skew: StructAlgebra) -> np.ndarray:
    """rad(KQ)#G + span{e_i#(g - 1) : g in G_i}; valid for p-groups in characteristic p."""
    act = skew.skew_data
    base = act.algebra
    grp = act.group
    p, no = skew.p, grp.order
    order = grp.order
    while order % p == 0:
        order //= p
    if order != 1:
        raise PrecondViolated("the acting group is not a p-group")
    rows = []
    for r in base.radical_basis:
        for g in range(no):
            v = np.zeros(skew.dim, dtype=np.int64)
            v[np.arange(base.dim) * no + g] = r
            rows.append(v)
    cat = base.path_data.category
    for x in range(cat.n_obj):
        e = cat.identities[x]
        for g in range(1, no):
            if act.mats[g][e, e] % p == 1:
                v = np.zeros(skew.dim, dtype=np.int64)
                v[e * no + g] = 1
                v[e * no] = p - 1
                rows.append(v)
    return fl.row_basis(np.array(rows, dtype=np.int64).reshape(-1, skew.dim), p, skew.dim)


def quotient_algebra(alg: StructAlgebra, ideal: np.ndarray) -> tuple[StructAlgebra, np.ndarray]:
    """A/I with basis given by standard vectors complementing I; returns (A/I, projection matrix)."""
    p, d = alg.p, alg.dim
    ideal = np.asarray(ideal, dtype=np.int64).reshape(-1, d)
    comp = fl.complement(ideal, d, p)
    full = np.vstack([comp, ideal]) if ideal.shape[0] else comp
    r = comp.shape[0]
    proj = fl.coords(full, np.eye(d, dtype=np.int64), p)[:, :r].T % p
    prods = np.einsum("ia,jb,abc->ijc", comp, comp, alg.mult) % p
    mult = np.einsum("ijc,kc->ijk", prods, proj) % p
    labels = [alg.labels[int(np.nonzero(v)[0][0])] for v in comp]
    idem = [proj @ e % p for e in alg.idempotents]
    return StructAlgebra(p, mult, labels, idem, alg.idempotent_labels), proj


def is_semisimple_bruteforce(alg: StructAlgebra, max_elements: int = 1 << 16) -> bool:
    """No nonzero element generates a nilpotent two-sided ideal (exhaustive over F_p^dim)."""
    p, d = alg.p, alg.dim
    if d == 0:
        return True
    if p ** d > max_elements:
        raise TooLarge(f"{p}^{d} elements exceed the search budget")
    for coeffs in product(range(p), repeat=d):
        lead = next((c for c in coeffs if c), 0)
        if lead != 1:
            continue
        ideal = alg.ideal_generated(np.array([coeffs], dtype=np.int64))
        if alg.nilpotency_index(ideal) is not None:
            return False
    return True


def radical_report(alg: StructAlgebra, rad: np.ndarray | None = None) -> dict:
    """Nilpotency of the radical and semisimplicity of the quotient."""
    rad = radical(alg) if rad is None else rad
    quot, _ = quotient_algebra(alg, rad)
    return {"dim": alg.dim, "radical_dim": int(rad.shape[0]), "is_ideal": alg.is_two_sided_ideal(rad),
            "nilpotency": alg.nilpotency_index(rad) if rad.shape[0] else 1,
            "quotient_dim": quot.dim, "quotient_semisimple": is_semisimple_bruteforce(quot)}
