import random

import numpy as np
import pytest

from foldquiv.cartan import (CartanTriple, DaggerData, associated_cartan_triple, cartan_type_ei_quiver,
                             cartan_type_isomorphism, check_dagger, realizing_quiver, stabilizer_condition_holds,
                             unfold_triple, validate)
from foldquiv.errors import InvalidTriple, NotIsomorphic
from foldquiv.fingroup import cyclic
from foldquiv.instances import a2_triple, a3_c2, b2_triple, g2_triple, kronecker_c2, random_action
from foldquiv.quiver import coset_quiver

A3 = [[2, 0, -1], [0, 2, -1], [-1, -1, 2]]
D4 = [[2, 0, 0, -1], [0, 2, 0, -1], [0, 0, 2, -1], [-1, -1, -1, 2]]
B3 = CartanTriple([[2, -1, 0], [-2, 2, -1], [0, -2, 2]], [4, 2, 1], {(0, 1), (2, 1)})
AFFINE = CartanTriple([[2, -2], [-2, 2]], [2, 2], {(0, 1)})


def test_validate_standard_triples():
    for ct in (a2_triple(), b2_triple(), g2_triple(), B3, AFFINE):
        rep = validate(ct)
        assert rep["valid"] and rep["failures"] == []


@pytest.mark.parametrize("ct,flag", [
    (CartanTriple([[1, -1], [-1, 2]], [1, 1], {(0, 1)}), "C1"),
    (CartanTriple([[2, 1], [1, 2]], [1, 1], {(0, 1)}), "C2"),
    (CartanTriple([[2, -1], [0, 2]], [1, 1], {(0, 1)}), "C2"),
    (CartanTriple([[2, -1], [-2, 2]], [1, 1], {(0, 1)}), "C3"),
    (CartanTriple([[2, -1], [-1, 2]], [1, 1], {(0, 1), (1, 0)}), "O1"),
    (CartanTriple([[2, -1], [-1, 2]], [1, 1], set()), "O1"),
    (CartanTriple([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], [1, 1, 1], {(0, 1), (1, 2), (2, 0)}), "O2"),
])
def test_validate_rejects(ct, flag):
    rep = validate(ct)
    assert not rep[flag] and not rep["valid"] and rep["failures"]


def test_a3_associated_triple():
    q, act = a3_c2()
    ct = associated_cartan_triple(q, act)
    assert ct.same_as(b2_triple())
    assert ct.labels == ["{1}", "{2,3}"]


def test_dagger_examples():
    q, act = a3_c2()
    rep = check_dagger(q, act)
    assert rep["ok"] and rep["xi"] == [1, 0, 0] and rep["orders"] == [2, 1, 1]
    bad = check_dagger(q, act, DaggerData([0, 0, 0]))
    assert not bad["dagger1"] and not bad["ok"]
    q, act = kronecker_c2()
    rep = check_dagger(q, act)
    assert rep["dagger1"] and not rep["dagger2"] and rep["dagger3"]
    assert not stabilizer_condition_holds(q, act)


def test_gcd_identity_under_dagger_100_seeds():
    hits = 0
    for seed in range(100):
        q, act = random_action(random.Random(seed))
        if not check_dagger(q, act)["ok"]:
            continue
        ct = associated_cartan_triple(q, act)
        hits += 1
        assert validate(ct)["valid"]
        assert ct.gcd_identity_failures() == []
    assert hits >= 20


def test_cartan_type_biset_sizes():
    assert [b.size for b in cartan_type_ei_quiver(b2_triple()).bisets] == [2]
    assert [b.size for b in cartan_type_ei_quiver(a2_triple()).bisets] == [1]
    assert [b.size for b in cartan_type_ei_quiver(g2_triple()).bisets] == [3]
    eq = cartan_type_ei_quiver(AFFINE)
    assert eq.quiver.num_arrows == 2 and [b.size for b in eq.bisets] == [2, 2]


def test_cartan_type_isomorphism_a3():
    q, act = a3_c2()
    iso = cartan_type_isomorphism(q, act)
    assert iso.verify() and iso.triple.same_as(b2_triple())
    assert iso.group_maps[0] == [0, 1] and iso.arrow_map == [0]


def test_cartan_type_isomorphism_kronecker_witness():
    q, act = kronecker_c2()
    with pytest.raises(NotIsomorphic) as err:
        cartan_type_isomorphism(q, act)
    assert err.value.witness == {"arrow": "{a,b}", "quotient_size": 4, "cartan_size": 2}


@pytest.mark.parametrize("ct", [a2_triple(), b2_triple(), g2_triple(), B3, AFFINE])
def test_realizing_round_trip(ct):
    q, act = realizing_quiver(ct)
    assert associated_cartan_triple(q, act).same_as(ct)
    assert check_dagger(q, act)["ok"]
    assert cartan_type_isomorphism(q, act).verify()


def test_round_trip_from_random_actions():
    for seed in range(60):
        q, act = random_action(random.Random(seed))
        if act.group.cyclic_generator() is None or not check_dagger(q, act)["ok"]:
            continue
        ct = associated_cartan_triple(q, act)
        q2, act2 = realizing_quiver(ct)
        assert associated_cartan_triple(q2, act2).same_as(ct)


def test_coset_quiver_realizes_cartan_type():
    q, act = coset_quiver(cyclic(4), [1, 2])
    ct = associated_cartan_triple(q, act)
    assert ct.D == [4, 2] and ct.C.tolist() == [[2, -1], [-2, 2]]
    assert cartan_type_isomorphism(q, act).verify()


@pytest.mark.parametrize("ct,char,c_expected,d_expected", [
    (b2_triple(), 0, A3, [1, 1, 1]),
    (b2_triple(), 2, [[2, -1], [-2, 2]], [2, 1]),
    (b2_triple(), 3, A3, [1, 1, 1]),
    (g2_triple(), 0, D4, [1, 1, 1, 1]),
    (g2_triple(), 2, D4, [1, 1, 1, 1]),
    (g2_triple(), 3, [[2, -1], [-3, 2]], [3, 1]),
    (a2_triple(), 5, [[2, -1], [-1, 2]], [1, 1]),
])
def test_unfold_examples(ct, char, c_expected, d_expected):
    u = unfold_triple(ct, char)
    assert u.C.tolist() == c_expected and u.D == d_expected
    assert validate(u)["valid"]


def test_unfold_mixed_characteristic():
    # D = (4, 2, 1) with p = 2 is already a p-power symmetrizer
    assert unfold_triple(B3, 2).same_as(B3)
    u = unfold_triple(B3, 3)
    assert u.n == 7 and u.D == [1] * 7
    assert np.array_equal(u.C, u.C.T)


def test_unfold_rejects_composite_characteristic():
    with pytest.raises(InvalidTriple):
        unfold_triple(b2_triple(), 4)


def test_unfold_vertex_count_property():
    for ct in (a2_triple(), b2_triple(), g2_triple(), B3, AFFINE):
        for p in (2, 3, 5):
            u = unfold_triple(ct, p)
            prime_to_p = []
            for c in ct.D:
                while c % p == 0:
                    c //= p
                prime_to_p.append(c)
            assert u.n == sum(prime_to_p)
            assert all(ct.D[i] == u.D[k] * prime_to_p[i] for k, (i, _) in
                       enumerate((i, l) for i in range(ct.n) for l in range(prime_to_p[i])))
