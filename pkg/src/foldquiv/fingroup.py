"""Finite groups as multiplication tables, group actions, cosets and bisets."""

from __future__ import annotations

from collections import Counter
from math import gcd

import numpy as np

from .errors import GroupMismatch, NotASubgroup, NotAutomorphism, ActionInvalid


class FinGroup:
    """A finite group on elements 0..n-1 with 0 the identity.

    mul[a][b] is the product ab. Construction validates the table.
    """

    def __init__(self, mul, labels=None, generators=None, check=True):
        self.mul = np.array(mul, dtype=np.int64)
        n = self.mul.shape[0]
        if self.mul.shape != (n, n) or n == 0:
            raise ValueError("multiplication table must be square and nonempty")
        self.order = n
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if check:
            self._validate()
        self.inv = np.array([int(np.nonzero(self.mul[a] == 0)[0][0]) for a in range(n)], dtype=np.int64)
        if generators is None:
            generators = self._greedy_generators()
        self.generators = list(generators)
        if check and self.closure(self.generators) != frozenset(range(n)):
            raise ValueError("generators do not generate the group")

    def _validate(self):
        m = self.mul
        n = self.order
        if m.min() < 0 or m.max() >= n:
            raise ValueError("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(m[0], ar) and np.array_equal(m[:, 0], ar)):
            raise ValueError("0 is not a two-sided identity")
        for row in m:
            if len(set(row.tolist())) != n:
                raise ValueError("table is not a Latin square")
        left = m[m]  # left[a, b, c] = m[m[a, b], c]
        right = m[:, m]  # right[a, b, c] = m[a, m[b, c]]
        if not np.array_equal(left, right):
            raise ValueError("table is not associative")

    def _greedy_generators(self):
        gens, span = [], frozenset([0])
        for g in range(self.order):
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
        return gens

    def __eq__(self, other):
        return isinstance(other, FinGroup) and np.array_equal(self.mul, other.mul)

    def __hash__(self):
        return hash(self.mul.tobytes())

    def __repr__(self):
        return f"FinGroup(order={self.order})"

    def m(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def i(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.i(a), -k
        r = 0
        for _ in range(k):
            r = self.m(r, a)
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.m(x, a)
            k += 1
        return k

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.m(self.m(g, x), self.i(g))

    def closure(self, gens) -> frozenset:
        span = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for s in gens:
                y = self.m(x, s)
                if y not in span:
                    span.add(y)
                    frontier.append(y)
        return frozenset(span)

    def is_subgroup(self, elems) -> bool:
        s = set(elems)
        if 0 not in s:
            return False
        return all(self.m(a, b) in s for a in s for b in s) and all(self.i(a) in s for a in s)

    def subgroup(self, elems) -> tuple["FinGroup", list[int]]:
        """The subgroup on a closed element set, reindexed in increasing order; returns (group, embedding)."""
        if not self.is_subgroup(elems):
            raise NotASubgroup(sorted(elems))
        emb = sorted(elems)
        pos = {g: k for k, g in enumerate(emb)}
        tab = [[pos[self.m(a, b)] for b in emb] for a in emb]
        return FinGroup(tab, labels=[self.labels[g] for g in emb], check=False), emb

    def is_abelian(self) -> bool:
        return np.array_equal(self.mul, self.mul.T)

    def cyclic_generator(self) -> int | None:
        for g in range(self.order):
            if self.element_order(g) == self.order:
                return g
        return None


def cyclic(n: int) -> FinGroup:
    """Cyclic group of order n; element k stands for the k-th power of the generator."""
    ar = np.arange(n)
    labels = ["1"] + [f"s^{k}" if k > 1 else "s" for k in range(1, n)]
    return FinGroup((ar[:, None] + ar[None, :]) % n, labels=labels, generators=[1] if n > 1 else [], check=False)


def trivial_group() -> FinGroup:
    return cyclic(1)


def direct_product(g: FinGroup, h: FinGroup) -> FinGroup:
    """Elements (a, b) encoded as a*|h| + b."""
    return semidirect(g, h, [np.arange(g.order)] * h.order, check=False)


def semidirect(n: FinGroup, h: FinGroup, phi, check=True) -> FinGroup:
    """N ⋊ H with (a,g)(b,k) = (a·phi(g)(b), gk); element (a, g) encoded as a*|H| + g.

    phi[g] is the permutation of N given by the automorphism attached to g.
    """
    phi = np.array(phi, dtype=np.int64).reshape(h.order, n.order)
    if check:
        for g in range(h.order):
            f = phi[g]
            if sorted(f.tolist()) != list(range(n.order)):
                raise NotAutomorphism(f"phi({g}) is not a bijection")
            if not np.array_equal(f[n.mul], n.mul[f[:, None], f[None, :]]):
                raise NotAutomorphism(f"phi({g}) is not a homomorphism")
        for g in range(h.order):
            for k in range(h.order):
                if not np.array_equal(phi[h.m(g, k)], phi[g][phi[k]]):
                    raise NotAutomorphism("phi is not a homomorphism of groups")
    no, ho = n.order, h.order
    tab = np.zeros((no * ho, no * ho), dtype=np.int64)
    for a in range(no):
        for g in range(ho):
            x = a * ho + g
            prod_n = n.mul[a, phi[g]]
            for b in range(no):
                tab[x, b * ho: (b + 1) * ho] = prod_n[b] * ho + h.mul[g]
    labels = [f"({n.labels[a]},{h.labels[g]})" for a in range(no) for g in range(ho)]
    return FinGroup(tab, labels=labels, check=check)


class GSetAction:
    """A left action of a finite group on {0..n-1}; perm[g][x] = g(x)."""

    def __init__(self, group: FinGroup, n: int, perm, check=True):
        self.group = group
        self.n = n
        self.perm = np.array(perm, dtype=np.int64).reshape(group.order, n)
        if check:
            problems = self.problems()
            if problems:
                raise ActionInvalid("; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        ar = np.arange(self.n)
        for g in range(self.group.order):
            if sorted(self.perm[g].tolist()) != ar.tolist():
                out.append(f"element {g} does not act by a permutation")
        if out:
            return out
        if not np.array_equal(self.perm[0], ar):
            out.append("identity does not act trivially")
        for g in range(self.group.order):
            for h in range(self.group.order):
                if not np.array_equal(self.perm[self.group.m(g, h)], self.perm[g][self.perm[h]]):
                    out.append(f"perm({g}*{h}) != perm({g})perm({h})")
        return out

    def __call__(self, g: int, x: int) -> int:
        return int(self.perm[g, x])

    def orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for x in range(self.n):
            if x not in seen:
                orb = sorted(set(self.perm[:, x].tolist()))
                seen.update(orb)
                out.append(orb)
        return out

    @staticmethod
    def trivial(group: FinGroup, n: int) -> "GSetAction":
        return GSetAction(group, n, np.tile(np.arange(n), (group.order, 1)), check=False)


def orbit_stabilizer(act: GSetAction, point: int) -> tuple[frozenset, frozenset]:
    if not 0 <= point < act.n:
        raise IndexError(point)
    orbit = frozenset(act.perm[:, point].tolist())
    stab = frozenset(int(g) for g in np.nonzero(act.perm[:, point] == point)[0])
    return orbit, stab


def coset_reps(group: FinGroup, subgroup, side: str = "left") -> list[int]:
    """Least representatives of the cosets gH (side="left") or Hg (side="right").

    The first representative is the identity.
    """
    sub = sorted(set(subgroup))
    if not group.is_subgroup(sub):
        raise NotASubgroup(sub)
    covered, reps = set(), []
    for g in range(group.order):
        if g in covered:
            continue
        reps.append(g)
        if side == "left":
            covered.update(group.m(g, h) for h in sub)
        elif side == "right":
            covered.update(group.m(h, g) for h in sub)
        else:
            raise ValueError(side)
    return reps


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller index as root so roots are least representatives
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


class Biset:
    """A finite (L, R)-biset.

    left[g][x] = g.x and right[h][x] = x.h. `pairs` is set for biset products:
    the canonical (least) pair representing each element.
    """

    def __init__(self, left_group: FinGroup, right_group: FinGroup, size: int, left, right, labels=None,
                 check=True):
        self.left_group = left_group
        self.right_group = right_group
        self.size = size
        self.left = np.array(left, dtype=np.int64).reshape(left_group.order, size)
        self.right = np.array(right, dtype=np.int64).reshape(right_group.order, size)
        self.labels = labels
        self.pairs = None
        self.class_of = None
        if check:
            problems = self.problems()
            if problems:
                raise ActionInvalid("; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        if self.size == 0:
            out.append("empty biset")
            return out
        ar = np.arange(self.size)
        lg, rg = self.left_group, self.right_group
        for g in range(lg.order):
            if sorted(self.left[g].tolist()) != ar.tolist():
                out.append(f"left element {g} is not a permutation")
        for h in range(rg.order):
            if sorted(self.right[h].tolist()) != ar.tolist():
                out.append(f"right element {h} is not a permutation")
        if out:
            return out
        if not (np.array_equal(self.left[0], ar) and np.array_equal(self.right[0], ar)):
            out.append("identity acts nontrivially")
        for g in range(lg.order):
            for k in range(lg.order):
                if not np.array_equal(self.left[lg.m(g, k)], self.left[g][self.left[k]]):
                    out.append("left action is not an action")
                    return out
        for h in range(rg.order):
            for k in range(rg.order):
                if not np.array_equal(self.right[rg.m(h, k)], self.right[k][self.right[h]]):
                    out.append("right action is not an action")
                    return out
        for g in range(lg.order):
            for h in range(rg.order):
                if not np.array_equal(self.right[h][self.left[g]], self.left[g][self.right[h]]):
                    out.append("left and right actions do not commute")
                    return out
        return out

    def act(self, g: int, x: int, h: int = 0) -> int:
        """g.x.h"""
        return int(self.right[h, self.left[g, x]])

    def __repr__(self):
        return f"Biset(size={self.size}, |L|={self.left_group.order}, |R|={self.right_group.order})"

    def orbit_profile(self) -> tuple:
        """Sorted sizes of the L×R-orbits, left orbits and right orbits."""
        def sizes(perms):
            seen, out = set(), []
            for x in range(self.size):
                if x in seen:
                    continue
                orb, stack = {x}, [x]
                while stack:
                    y = stack.pop()
                    for p in perms:
                        z = int(p[y])
                        if z not in orb:
                            orb.add(z)
                            stack.append(z)
                seen |= orb
                out.append(len(orb))
            return tuple(sorted(out))

        both = list(self.left) + list(self.right)
        return sizes(both), sizes(list(self.left)), sizes(list(self.right))


def regular_biset(g: FinGroup) -> Biset:
    """G as a (G, G)-biset by multiplication on both sides."""
    return Biset(g, g, g.order, g.mul, g.mul.T, check=False)


def restricted_regular(g: FinGroup, k: FinGroup, emb, side: str) -> Biset:
    """G as a (G, K)-biset (side="right": x.k = x·emb(k)) or a (K, G)-biset (side="left": k.x = emb(k)·x)."""
    emb = list(emb)
    if side == "right":
        right = [g.mul[:, emb[c]] for c in range(k.order)]
        return Biset(g, k, g.order, g.mul, right)
    left = [g.mul[emb[c], :] for c in range(k.order)]
    return Biset(k, g, g.order, left, g.mul.T)


def point_biset(left_group: FinGroup, right_group: FinGroup) -> Biset:
    return Biset(left_group, right_group, 1, np.zeros((left_group.order, 1)), np.zeros((right_group.order, 1)),
                 check=False)


def product_biset(left_group: FinGroup, right_group: FinGroup) -> Biset:
    """L × R with L multiplying the first factor and R the second; element (a, b) is a*|R| + b."""
    lo, ro = left_group.order, right_group.order
    idx = np.arange(lo * ro).reshape(lo, ro)
    left = [idx[left_group.mul[g], :].reshape(-1) for g in range(lo)]
    right = [idx[:, right_group.mul[:, h]].reshape(-1) for h in range(ro)]
    return Biset(left_group, right_group, lo * ro, left, right, check=False)


def biset_product(x: Biset, y: Biset) -> Biset:
    """X ×_H Y: pairs modulo (x.h, y) ~ (x, h.y), with least-pair canonical representatives."""
    if x.right_group != y.left_group:
        raise GroupMismatch("right group of X differs from left group of Y")
    h = y.left_group
    nx, ny = x.size, y.size
    uf = UnionFind(nx * ny)
    gens = h.generators
    for s in gens:
        xs = x.right[s]
        sy = y.left[s]
        for a in range(nx):
            for b in range(ny):
                uf.union(int(xs[a]) * ny + b, a * ny + int(sy[b]))
    roots = [uf.find(k) for k in range(nx * ny)]
    reps = sorted(set(roots))
    cls = {r: c for c, r in enumerate(reps)}
    class_of = np.array([cls[r] for r in roots], dtype=np.int64).reshape(nx, ny)
    pairs = [divmod(r, ny) for r in reps]
    lg, rg = x.left_group, y.right_group
    left = np.array([[class_of[x.left[g, a], b] for (a, b) in pairs] for g in range(lg.order)])
    right = np.array([[class_of[a, y.right[k, b]] for (a, b) in pairs] for k in range(rg.order)])
    out = Biset(lg, rg, len(reps), left, right, check=False)
    out.pairs = pairs
    out.class_of = class_of
    return out


def biset_associator(x: Biset, y: Biset, z: Biset) -> tuple[Biset, Biset, np.ndarray]:
    """(X×Y)×Z, X×(Y×Z) and the map between them induced by ((x,y),z) ↦ (x,(y,z)).

    The map is checked to be a well-defined equivariant bijection.
    """
    xy = biset_product(x, y)
    left_first = biset_product(xy, z)
    yz = biset_product(y, z)
    right_first = biset_product(x, yz)
    f = np.full(left_first.size, -1, dtype=np.int64)
    for a in range(x.size):
        for b in range(y.size):
            for c in range(z.size):
                src = left_first.class_of[xy.class_of[a, b], c]
                dst = right_first.class_of[a, yz.class_of[b, c]]
                if f[src] == -1:
                    f[src] = dst
                elif f[src] != dst:
                    raise ActionInvalid("associator not well defined")
    if sorted(f.tolist()) != list(range(right_first.size)):
        raise ActionInvalid("associator not bijective")
    if not is_equivariant(f, left_first, right_first):
        raise ActionInvalid("associator not equivariant")
    return left_first, right_first, f


def is_equivariant(f, a: Biset, b: Biset, left_map=None, right_map=None) -> bool:
    """Whether f: A -> B satisfies f(g.x.h) = lm(g).f(x).rm(h)."""
    f = np.asarray(f)
    lm = left_map if left_map is not None else list(range(a.left_group.order))
    rm = right_map if right_map is not None else list(range(a.right_group.order))
    for g in range(a.left_group.order):
        if not np.array_equal(f[a.left[g]], b.left[lm[g]][f]):
            return False
    for h in range(a.right_group.order):
        if not np.array_equal(f[a.right[h]], b.right[rm[h]][f]):
            return False
    return True


def is_group_hom(f, g: FinGroup, h: FinGroup) -> bool:
    f = np.asarray(f)
    return bool(np.array_equal(f[g.mul], h.mul[f[:, None], f[None, :]]))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def orbit_type_multiset(act: GSetAction) -> Counter:
    """Multiset of (orbit size, stabilizer size) pairs."""
    c = Counter()
    for orb in act.orbits():
        _, stab = orbit_stabilizer(act, orb[0])
        c[(len(orb), len(stab))] += 1
    return c
