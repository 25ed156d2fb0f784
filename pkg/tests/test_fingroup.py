import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldquiv.errors import GroupMismatch, NotASubgroup, NotAutomorphism
from foldquiv.fingroup import (FinGroup, GSetAction, biset_associator, biset_product, coset_reps, cyclic,
                               direct_product, is_equivariant, is_group_hom, orbit_stabilizer, regular_biset,
                               restricted_regular, semidirect, trivial_group)
from foldquiv.instances import free_biset, random_action, small_groups, subgroups, symmetric_group3


def test_cyclic_tables():
    g = cyclic(4)
    assert g.order == 4 and g.m(3, 3) == 2 and g.i(1) == 3 and g.element_order(2) == 2
    assert g.cyclic_generator() == 1 and g.is_abelian()


def test_bad_table_rejected():
    with pytest.raises(Exception):
        FinGroup(np.array([[0, 1], [1, 1]]))


def test_orbit_stabilizer_swap():
    g = cyclic(2)
    act = GSetAction(g, 3, [[0, 1, 2], [0, 2, 1]])
    orbit, stab = orbit_stabilizer(act, 1)
    assert orbit == {1, 2} and stab == {0}


def test_orbit_stabilizer_trivial():
    g = cyclic(3)
    orbit, stab = orbit_stabilizer(GSetAction.trivial(g, 4), 2)
    assert orbit == {2} and stab == {0, 1, 2}


def test_orbit_stabilizer_c4_regular():
    g = cyclic(4)
    act = GSetAction(g, 4, [[(x + k) % 4 for x in range(4)] for k in range(4)])
    orbit, stab = orbit_stabilizer(act, 0)
    assert len(orbit) == 4 and stab == {0} and len(orbit) * len(stab) == 4


def test_orbit_stabilizer_property_100_seeds():
    for seed in range(100):
        q, act = random_action(random.Random(seed))
        for a in (act.vertex_act, act.arrow_act):
            for x in range(a.n):
                orbit, stab = orbit_stabilizer(a, x)
                assert len(orbit) * len(stab) == act.group.order


def test_coset_reps_examples():
    c2 = cyclic(2)
    assert coset_reps(c2, {0, 1}) == [0]
    assert coset_reps(c2, {0}) == [0, 1]
    c4 = cyclic(4)
    reps = coset_reps(c4, {0, 2})
    assert len(reps) == 2 and reps[0] == 0
    cosets = [frozenset(c4.m(r, h) for h in (0, 2)) for r in reps]
    assert set().union(*cosets) == set(range(4)) and len(set(cosets)) == 2


def test_coset_reps_partition_all_subgroups():
    for g in small_groups():
        for h in subgroups(g):
            for side in ("left", "right"):
                reps = coset_reps(g, h, side)
                assert reps[0] == 0 and len(reps) * len(h) == g.order
                cover = [g.m(r, x) if side == "left" else g.m(x, r) for r in reps for x in h]
                assert sorted(cover) == list(range(g.order))


def test_coset_reps_rejects_non_subgroup():
    with pytest.raises(NotASubgroup):
        coset_reps(cyclic(4), {0, 1})


def test_semidirect_trivial_is_direct():
    c2 = cyclic(2)
    g = semidirect(c2, c2, [[0, 1], [0, 1]])
    assert g.order == 4 and all(g.m(x, x) == 0 for x in range(4))
    assert np.array_equal(g.mul, direct_product(c2, c2).mul)


def test_semidirect_trivial_group():
    g = semidirect(trivial_group(), cyclic(3), [[0]] * 3)
    assert g.order == 3 and is_group_hom(list(range(3)), g, cyclic(3))


def test_semidirect_inversion_nonabelian():
    c3 = cyclic(3)
    g = semidirect(c3, cyclic(2), [[0, 1, 2], [0, 2, 1]])
    assert g.order == 6
    witness = [(a, b) for a in range(6) for b in range(6) if g.m(a, b) != g.m(b, a)]
    assert witness


def test_semidirect_rejects_non_automorphism():
    with pytest.raises(NotAutomorphism):
        semidirect(cyclic(3), cyclic(2), [[0, 1, 2], [0, 0, 0]])


def test_regular_biset_is_unit():
    h = cyclic(3)
    y = restricted_regular(h, cyclic(1), [0], "right")
    prod = biset_product(regular_biset(h), y)
    assert prod.size == y.size
    f = [int(prod.class_of[0, b]) for b in range(y.size)]
    assert sorted(f) == list(range(prod.size))
    inv = np.argsort(f)
    assert is_equivariant(inv, prod, y)


def test_cartan_sized_product():
    # X(1) = C2 and X(2) = trivial glued over the trivial group
    c2, c1 = cyclic(2), cyclic(1)
    x1 = restricted_regular(c2, c1, [0], "right")
    x2 = restricted_regular(c1, c1, [0], "left")
    assert biset_product(x1, x2).size == 2


def test_product_over_subgroup_size():
    g = cyclic(4)
    h, emb = g.subgroup({0, 2})
    prod = biset_product(restricted_regular(g, h, emb, "right"), restricted_regular(g, h, emb, "left"))
    assert prod.size == 8
    assert not prod.problems()


def test_group_mismatch():
    with pytest.raises(GroupMismatch):
        biset_product(regular_biset(cyclic(2)), regular_biset(cyclic(3)))


def test_canonical_representatives_are_least():
    g = cyclic(4)
    h, emb = g.subgroup({0, 2})
    prod = biset_product(restricted_regular(g, h, emb, "right"), restricted_regular(g, h, emb, "left"))
    for c, (a, b) in enumerate(prod.pairs):
        members = [(x, y) for x in range(4) for y in range(4) if prod.class_of[x, y] == c]
        assert min(members) == (a, b)


def test_biset_associativity_profiles_100_seeds():
    groups = small_groups()
    for seed in range(100):
        rng = random.Random(seed)
        g1, g2, g3 = (rng.choice(groups) for _ in range(3))
        h2, e2 = g2.subgroup(rng.choice(subgroups(g2)))
        h3, e3 = g3.subgroup(rng.choice(subgroups(g3)))
        x = restricted_regular(g2, h2, e2, "left") if rng.random() < 0.5 else free_biset(g1, g2)
        y = free_biset(x.right_group, g3)
        z = restricted_regular(g3, h3, e3, "right")
        lf, rf, f = biset_associator(x, y, z)
        assert lf.size == rf.size
        assert lf.orbit_profile() == rf.orbit_profile()
        assert is_equivariant(f, lf, rf)


def test_identity_fixes_every_element():
    for seed in range(30):
        rng = random.Random(seed)
        g = rng.choice(small_groups())
        h, emb = g.subgroup(rng.choice(subgroups(g)))
        for b in (regular_biset(g), restricted_regular(g, h, emb, "right"), restricted_regular(g, h, emb, "left")):
            assert np.array_equal(b.left[0], np.arange(b.size))
            assert np.array_equal(b.right[0], np.arange(b.size))


@given(st.integers(1, 12), st.integers(0, 11), st.integers(0, 11), st.integers(0, 11))
def test_cyclic_associative(n, a, b, c):
    g = cyclic(n)
    a, b, c = a % n, b % n, c % n
    assert g.m(g.m(a, b), c) == g.m(a, g.m(b, c))
    assert g.m(a, g.i(a)) == 0


def test_symmetric_group3():
    s3 = symmetric_group3()
    assert s3.order == 6 and not s3.is_abelian() and s3.cyclic_generator() is None
    assert sorted(len(h) for h in subgroups(s3)) == [1, 2, 2, 2, 3, 6]
