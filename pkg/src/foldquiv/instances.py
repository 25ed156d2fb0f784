"""Standard examples and seeded random generators of group actions."""

from __future__ import annotations

import random

import numpy as np

from .cartan import CartanTriple
from .eicat import EIAction, EIQuiver
from .fingroup import Biset, FinGroup, GSetAction, cyclic, direct_product, regular_biset, semidirect
from .quiver import Quiver, QuiverAction


def a3_c2() -> tuple[Quiver, QuiverAction]:
    """2 -a-> 1 <-b- 3 with the involution swapping 2, 3 and a, b."""
    q = Quiver(3, [(1, 0), (2, 0)], ["1", "2", "3"], ["a", "b"])
    g = cyclic(2)
    return q, QuiverAction.from_generators(q, g, {1: [0, 2, 1]}, {1: [1, 0]})


def kronecker_c2() -> tuple[Quiver, QuiverAction]:
    """Two arrows 1 -> 2 swapped by an involution fixing both vertices."""
    q = Quiver(2, [(0, 1), (0, 1)], ["1", "2"], ["a", "b"])
    g = cyclic(2)
    return q, QuiverAction.from_generators(q, g, {1: [0, 1]}, {1: [1, 0]})


def a2_trivial() -> tuple[Quiver, QuiverAction]:
    q = Quiver(2, [(1, 0)], ["1", "2"], ["a"])
    return q, QuiverAction.trivial(q)


def b2_triple() -> CartanTriple:
    return CartanTriple([[2, -1], [-2, 2]], [2, 1], {(0, 1)})


def a2_triple() -> CartanTriple:
    return CartanTriple([[2, -1], [-1, 2]], [1, 1], {(0, 1)})


def g2_triple() -> CartanTriple:
    return CartanTriple([[2, -1], [-3, 2]], [3, 1], {(0, 1)})


def symmetric_group3() -> FinGroup:
    """S3 as C3 ⋊ C2 with inversion."""
    c3, c2 = cyclic(3), cyclic(2)
    return semidirect(c3, c2, [np.arange(3), np.array([0, 2, 1])])


def small_groups() -> list[FinGroup]:
    c2 = cyclic(2)
    return [cyclic(1), cyclic(2), cyclic(3), cyclic(4), direct_product(c2, c2), symmetric_group3()]


def subgroups(g: FinGroup) -> list[frozenset]:
    """All subgroups generated by at most two elements, sorted by (size, elements)."""
    subs = {g.closure([x, y]) for x in range(g.order) for y in range(g.order)}
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def action_from_cosets(g: FinGroup, vertex_subgroups: list, arrow_specs: list) -> tuple[Quiver, QuiverAction]:
    """Vertices G/H_i per orbit type; each tuple (i, j, K, x) adds arrows gK: gH_i -> g x H_j.

    K must lie in H_i ∩ x H_j x^-1; acyclicity is ensured by requiring i < j.
    """
    vertices, vid = [], {}
    for i, h in enumerate(vertex_subgroups):
        seen = set()
        for r in range(g.order):
            c = frozenset(g.m(r, y) for y in h)
            if c not in seen:
                seen.add(c)
                vid[(c, i)] = len(vertices)
                vertices.append((r, i))

    def vertex_of(x, i):
        return vid[(frozenset(g.m(x, y) for y in vertex_subgroups[i]), i)]

    arrows, keys = [], []
    for n, (i, j, k, x) in enumerate(arrow_specs):
        if i >= j:
            raise ValueError("arrow orbits must go from a lower to a higher orbit type")
        seen = set()
        for r in range(g.order):
            c = frozenset(g.m(r, y) for y in k)
            if c not in seen:
                seen.add(c)
                keys.append((c, n))
                arrows.append((vertex_of(r, i), vertex_of(g.m(r, x), j)))
    aid = {key: m for m, key in enumerate(keys)}
    vperm = [[vertex_of(g.m(y, r), i) for (r, i) in vertices] for y in range(g.order)]
    aperm = [[aid[(frozenset(g.m(y, z) for z in c), n)] for (c, n) in keys] for y in range(g.order)]
    q = Quiver(len(vertices), arrows, [f"v{k}" for k in range(len(vertices))],
               [f"e{k}" for k in range(len(arrows))])
    act = QuiverAction(q, g, GSetAction(g, q.n, vperm), GSetAction(g, q.num_arrows, aperm))
    return q, act


def random_action(rng: random.Random, max_order: int = 6, max_types: int = 3) -> tuple[Quiver, QuiverAction]:
    """A random small acyclic quiver with a group action."""
    g = rng.choice([x for x in small_groups() if x.order <= max_order])
    subs = subgroups(g)
    ntypes = rng.randint(1, max_types)
    vsubs = [rng.choice(subs) for _ in range(ntypes)]
    specs = []
    for i in range(ntypes):
        for j in range(i + 1, ntypes):
            for _ in range(rng.randint(0, 2)):
                x = rng.randrange(g.order)
                conj = frozenset(g.conj(x, y) for y in vsubs[j])
                inside = [k for k in subs if k <= (vsubs[i] & conj)]
                specs.append((i, j, rng.choice(inside), x))
    return action_from_cosets(g, vsubs, specs)


def twisted_cyclic_action(q: Quiver, act: QuiverAction, m: int, unit: int) -> EIAction:
    """U(i) = C_m and U(α) = C_m everywhere, with the generator of a cyclic G acting by x ↦ unit·x."""
    g = act.group
    gen = g.cyclic_generator()
    if gen is None:
        raise ValueError("twisted assignment needs a cyclic group")
    if pow(unit, g.order, m) != 1 % m:
        raise ValueError("unit order must divide |G|")
    cm = cyclic(m)
    eq = EIQuiver(q, [cm] * q.n, [regular_biset(cm) for _ in q.arrows])
    scale = {}
    for k in range(g.order):
        scale[g.power(gen, k)] = pow(unit, k, m)
    vm = [[np.array([(scale[x] * y) % m for y in range(m)]) for _ in range(q.n)] for x in range(g.order)]
    am = [[np.array([(scale[x] * y) % m for y in range(m)]) for _ in q.arrows] for x in range(g.order)]
    return EIAction(eq, act, vm, am)


def random_ei_action(rng: random.Random, max_order: int = 4) -> EIAction:
    """A random action on an EI quiver; sometimes with a nontrivial twisted assignment."""
    q, act = random_action(rng, max_order=max_order)
    if act.group.cyclic_generator() is not None and act.group.order % 2 == 0 and rng.random() < 0.5:
        return twisted_cyclic_action(q, act, 3, 2)
    if rng.random() < 0.3:
        return twisted_cyclic_action(q, act, 2, 1) if act.group.cyclic_generator() is not None \
            else EIAction.trivial_assignment(act)
    return EIAction.trivial_assignment(act)


def b2_mixed_module(p: int = 2):
    """The 3-dimensional H(B2)-module with ε·v1 = w and α·v2 = w: locally free, not τ-locally free."""
    from .algkit import algebra_h
    from .repmod.folding import h_module

    alg = algebra_h(b2_triple(), p)
    # basis v1, w at vertex 1 and v2 at vertex 2
    eps1 = np.zeros((3, 3), dtype=np.int64)
    eps1[1, 0] = 1
    alpha = np.zeros((3, 3), dtype=np.int64)
    alpha[1, 2] = 1
    return h_module(alg, [2, 1], [eps1, np.zeros((3, 3), dtype=np.int64)], [alpha])


def free_biset(left: FinGroup, right: FinGroup) -> Biset:
    """L × R with both groups acting by multiplication on their own factor."""
    lo, ro = left.order, right.order
    idx = np.arange(lo * ro).reshape(lo, ro)
    lact = [idx[left.mul[g], :].reshape(-1) for g in range(lo)]
    ract = [idx[:, right.mul[:, h]].reshape(-1) for h in range(ro)]
    return Biset(left, right, lo * ro, lact, ract)
