import random

import numpy as np
import pytest

from foldquiv.algkit import (StructAlgebra, algebra_h, category_algebra, is_algebra_hom, is_algebra_iso,
                             is_semisimple_bruteforce, path_algebra, path_algebra_action, radical, radical_report,
                             skew_group_algebra, skew_isomorphism, skew_path_algebra, theta_iso)
from foldquiv.cartan import CartanTriple, cartan_type_ei_quiver
from foldquiv.eicat import EIAction, build_free_ei_category, category_action
from foldquiv.errors import NotPresented, PrecondViolated
from foldquiv.instances import a2_triple, a3_c2, b2_triple, g2_triple, kronecker_c2, random_action
from foldquiv.quiver import enumerate_paths

B3 = CartanTriple([[2, -1, 0], [-2, 2, -1], [0, -2, 2]], [4, 2, 1], {(0, 1), (2, 1)})


def _dual_numbers(p):
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = 1
    return StructAlgebra(p, mult, ["1", "x"], [np.array([1, 0])])


def _product_field(p):
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[1, 1, 1] = 1
    return StructAlgebra(p, mult, ["e", "f"], [np.array([1, 0]), np.array([0, 1])])


def test_a3_dimensions():
    q, act = a3_c2()
    pa = path_algebra(q, 2)
    assert pa.dim == 5 and not pa.problems()
    assert pa.unit.tolist() == [1, 0, 1, 0, 1]
    sk = skew_path_algebra(q, act, 2)
    assert sk.dim == 10 and not sk.problems()
    h = algebra_h(b2_triple(), 2)
    assert h.dim == 5 and not h.problems()
    assert h.presentation.nilpotency == 3


def test_h_dimensions():
    assert algebra_h(CartanTriple([[2]], [4], set()), 2).dim == 4
    assert algebra_h(a2_triple(), 3).dim == 3
    assert algebra_h(g2_triple(), 3).dim == 7


def test_h_dimension_matches_category_size():
    for ct, p in ((b2_triple(), 2), (g2_triple(), 3), (B3, 2), (a2_triple(), 5)):
        cat = build_free_ei_category(cartan_type_ei_quiver(ct))
        assert algebra_h(ct, p).dim == cat.n_mor


def test_path_algebra_dimension_random():
    for seed in range(25):
        q, _ = random_action(random.Random(seed))
        alg = path_algebra(q, 3)
        assert alg.dim == len(enumerate_paths(q))
        assert not alg.problems()


def test_skew_tables_equal():
    for q, act in (a3_c2(), kronecker_c2()):
        ea = EIAction.trivial_assignment(act)
        c = build_free_ei_category(ea.eiquiver)
        rep = skew_isomorphism(c, category_action(c, ea), 2)
        assert rep["tables_equal"] and rep["is_iso"]
        assert rep["dim_skew_category"] == rep["dim_skew_algebra"] == 2 * c.n_mor


@pytest.mark.parametrize("ct,p", [(b2_triple(), 2), (g2_triple(), 3), (B3, 2), (a2_triple(), 7)])
def test_theta_isomorphism(ct, p):
    t = theta_iso(ct, p)
    assert t.source.dim == t.target.dim
    assert is_algebra_iso(t.source, t.target, t.matrix)


def test_theta_preconditions():
    with pytest.raises(PrecondViolated):
        theta_iso(b2_triple(), 3)
    with pytest.raises(PrecondViolated):
        theta_iso(b2_triple(), 4)


def test_radical_reports():
    q, act = a3_c2()
    rep = radical_report(algebra_h(b2_triple(), 2))
    assert (rep["radical_dim"], rep["quotient_dim"]) == (3, 2)
    assert rep["is_ideal"] and rep["nilpotency"] == 3 and rep["quotient_semisimple"]
    rep = radical_report(skew_path_algebra(q, act, 2))
    assert (rep["radical_dim"], rep["quotient_dim"]) == (5, 5)
    assert rep["is_ideal"] and rep["quotient_semisimple"]
    rep = radical_report(path_algebra(q, 2))
    assert (rep["radical_dim"], rep["nilpotency"]) == (2, 2)


def test_skew_radical_random_p_groups():
    done = 0
    for seed in range(200):
        q, act = random_action(random.Random(seed), max_order=4)
        order = act.group.order
        if order not in (2, 3, 4) or act.group.cyclic_generator() is None:
            continue
        p = 3 if order == 3 else 2
        sk = skew_path_algebra(q, act, p)
        rad = radical(sk)
        if sk.dim - rad.shape[0] > 8:
            continue
        rep = radical_report(sk, rad)
        assert rep["is_ideal"] and rep["nilpotency"] is not None and rep["quotient_semisimple"]
        done += 1
        if done == 10:
            break
    assert done >= 5


def test_semisimple_bruteforce():
    assert not is_semisimple_bruteforce(_dual_numbers(2))
    assert is_semisimple_bruteforce(_product_field(3))


def test_radical_needs_presentation():
    with pytest.raises(NotPresented):
        radical(_product_field(2))


def test_opposite_round_trip():
    h = algebra_h(b2_triple(), 2)
    op = h.opposite()
    assert op.opposite() is h
    assert np.array_equal(op.mult, h.mult.transpose(1, 0, 2))


def test_non_homomorphism():
    a = _dual_numbers(2)
    assert is_algebra_hom(a, a, np.eye(2, dtype=np.int64))
    # x -> 1 breaks x^2 = 0
    assert not is_algebra_hom(a, a, np.array([[1, 1], [0, 0]]))


def test_category_algebra_unit():
    c = build_free_ei_category(cartan_type_ei_quiver(b2_triple()))
    kc = category_algebra(c, 2)
    for x in range(kc.dim):
        v = kc.basis_vector(x)
        assert np.array_equal(kc.mul(kc.unit, v), v) and np.array_equal(kc.mul(v, kc.unit), v)


def test_path_algebra_action_permutes_basis():
    q, act = a3_c2()
    pa = path_algebra(q, 2)
    aa = path_algebra_action(pa, act)
    assert not aa.problems()
    sk = skew_group_algebra(aa)
    assert sk.dim == pa.dim * 2
