import itertools
import random

import numpy as np
import pytest

from foldquiv.algkit import algebra_h
from foldquiv.errors import NotSink, RootNotPositive, SetupViolated
from foldquiv.instances import a3_c2, b2_mixed_module, b2_triple, kronecker_c2
from foldquiv.repmod.artrans import projective_presentation, tau, tau_inverse, tau_locally_free, transpose
from foldquiv.repmod.folding import FoldingPipeline, h_module, rank_vector, setup_problems
from foldquiv.repmod.induced import induction_check, twist
from foldquiv.repmod.modules import (dual_module, end_algebra_dim, end_is_local, hom_space, is_isomorphic,
                                     same_action)
from foldquiv.repmod.quiverrep import (QuiverRep, indecomposable_for_root, module_to_rep, reflect_at_sink,
                                       simple_rep)
from foldquiv.rootfold import positive_roots, quiver_lattice

A3_ROOTS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (1, 1, 1)]


@pytest.fixture(scope="module")
def fp():
    q, act = a3_c2()
    return FoldingPipeline(q, act, 2)


@pytest.fixture(scope="module")
def indecs(fp):
    return {r: indecomposable_for_root(fp.quiver, r, 2) for r in A3_ROOTS}


def test_indecomposables_have_root_dims(indecs, fp):
    for r, rep in indecs.items():
        assert tuple(rep.dims) == r
        m = fp.module_of(rep)
        assert not m.problems() and end_algebra_dim(m) == 1


def test_roots_are_a3_roots():
    q, _ = a3_c2()
    assert sorted(positive_roots(quiver_lattice(q)).roots) == sorted(A3_ROOTS)


def test_indecomposable_rejects_non_root():
    q, _ = a3_c2()
    with pytest.raises(RootNotPositive):
        indecomposable_for_root(q, (0, 1, 1), 2)


def test_reflection_requires_sink():
    q, _ = a3_c2()
    with pytest.raises(NotSink):
        reflect_at_sink(simple_rep(q, 2, 1), 1)


def test_module_rep_round_trip(indecs, fp):
    for rep in indecs.values():
        back = module_to_rep(fp.module_of(rep))
        assert back.dims == rep.dims
        assert same_action(fp.module_of(back), fp.module_of(rep))


def test_twist_swaps_simples(fp, indecs):
    s2, s3 = fp.module_of(indecs[(0, 1, 0)]), fp.module_of(indecs[(0, 0, 1)])
    assert same_action(twist(s2, fp.alg_action, 0), s2)
    tw = twist(s2, fp.alg_action, 1)
    assert tw.dim_vector() == [0, 0, 1] and is_isomorphic(tw, s3)


def test_induced_dimensions(fp, indecs):
    assert fp.induce(fp.module_of(indecs[(1, 0, 0)])).dim == 2
    assert fp.induce(fp.module_of(indecs[(1, 1, 0)])).dim == 4
    for rep in indecs.values():
        m = fp.module_of(rep)
        ind = fp.induce(m)
        assert ind.dim == 2 * m.dim and not ind.problems()


def test_induction_matches_tensor_product(fp, indecs):
    for rep in indecs.values():
        rep_ = induction_check(fp.module_of(rep), fp.skew)
        assert rep_["ok"] and rep_["dim_tensor"] == rep_["dim_induced"]


def test_induced_simple_at_fixed_vertex(fp, indecs):
    ind = fp.induce(fp.module_of(indecs[(1, 0, 0)]))
    assert end_algebra_dim(ind) == 2 and end_is_local(ind)


def test_induced_from_orbit_partners_agree(fp, indecs):
    for a, b in (((0, 1, 0), (0, 0, 1)), ((1, 1, 0), (1, 0, 1))):
        ma, mb = fp.module_of(indecs[a]), fp.module_of(indecs[b])
        assert is_isomorphic(fp.induce(ma), fp.induce(mb))
        assert is_isomorphic(fp.induce(ma), fp.induce(twist(ma, fp.alg_action, 1)))


def test_induced_hom_dimension_identity(fp, indecs):
    # dim Hom(M#G, N#G) = sum over g of dim Hom(M, gN)
    mods = [fp.module_of(indecs[r]) for r in A3_ROOTS]
    for m, n in itertools.product(mods, mods):
        lhs = hom_space(fp.induce(m), fp.induce(n)).shape[0]
        rhs = sum(hom_space(m, twist(n, fp.alg_action, g)).shape[0] for g in range(2))
        assert lhs == rhs


def test_pipeline_checks(fp):
    chk = fp.checks()
    assert chk == {"skew_tables_equal": True, "map_multiplicative": True, "map_unit_is_corner": True,
                   "map_injective": True, "ok": True}


@pytest.mark.parametrize("root,dims", [
    ((1, 0, 0), [2, 0]), ((0, 1, 0), [0, 1]), ((0, 0, 1), [0, 1]),
    ((1, 1, 0), [2, 1]), ((1, 0, 1), [2, 1]), ((1, 1, 1), [2, 2]),
])
def test_psi_dimension_vectors(fp, indecs, root, dims):
    y = fp.folded_module(indecs[root])
    assert y.dim_vector() == dims and not y.problems()


def test_rank_vectors_equal_folded_dims(fp, indecs):
    for rep in indecs.values():
        res = rank_vector(fp.folded_module(rep))
        assert res.locally_free and res.ranks == fp.folded_dim(rep)


def test_psi_images_bijection_with_orbits(fp, indecs):
    imgs = {r: fp.folded_module(rep) for r, rep in indecs.items()}
    classes = []
    for r in A3_ROOTS:
        for c in classes:
            if is_isomorphic(imgs[c[0]], imgs[r]):
                c.append(r)
                break
        else:
            classes.append([r])
    assert sorted(map(sorted, classes)) == [[(0, 0, 1), (0, 1, 0)], [(1, 0, 0)], [(1, 0, 1), (1, 1, 0)],
                                            [(1, 1, 1)]]
    assert all(end_is_local(imgs[c[0]]) for c in classes)


def test_rank_vector_hand_modules():
    alg = algebra_h(b2_triple(), 2)
    eps = np.array([[0, 0], [1, 0]])
    y = h_module(alg, [2, 0], [eps, np.zeros((2, 2), dtype=np.int64)], [np.zeros((2, 2), dtype=np.int64)])
    assert rank_vector(y).ranks == [1, 0]
    simple = h_module(alg, [1, 0], [np.zeros((1, 1)), np.zeros((1, 1))], [np.zeros((1, 1))])
    res = rank_vector(simple)
    assert not res.locally_free and res.failure == (0, 0)
    flat = h_module(alg, [2, 0], [np.zeros((2, 2)), np.zeros((2, 2))], [np.zeros((2, 2))])
    res = rank_vector(flat)
    assert not res.locally_free and res.failure == (0, 1)


def test_tau_path_algebra_examples(fp, indecs):
    s2 = fp.module_of(indecs[(0, 1, 0)])
    assert tau(s2).dim_vector() == [1, 0, 1]
    for r in ((1, 0, 0), (1, 1, 0), (1, 0, 1)):
        assert tau(fp.module_of(indecs[r])).dim == 0
    for r in ((0, 1, 0), (0, 0, 1), (1, 1, 1)):
        m = fp.module_of(indecs[r])
        assert is_isomorphic(tau_inverse(tau(m)), m)


def test_projective_presentation_shapes(fp, indecs):
    pres = projective_presentation(fp.module_of(indecs[(0, 1, 0)]))
    assert pres.tops == [1] and pres.rels == [0]
    assert projective_presentation(fp.module_of(indecs[(1, 0, 0)])).is_projective()


def test_transpose_twice(fp, indecs):
    m = fp.module_of(indecs[(1, 1, 1)])
    assert is_isomorphic(transpose(transpose(m)), m)
    assert dual_module(dual_module(m)).algebra is m.algebra


def test_tau_commutes_with_folding(fp, indecs):
    count = 0
    for r, rep in indecs.items():
        m = fp.module_of(rep)
        tm = tau(m)
        if tm.dim == 0:
            continue
        count += 1
        assert is_isomorphic(fp.psi(fp.induce(tm)), tau(fp.folded_module(rep)))
    assert count == 3


def test_h_tau_example(fp, indecs):
    assert tau(fp.folded_module(indecs[(0, 1, 0)])).dim_vector() == [2, 1]


def test_theta_images_tau_locally_free(fp, indecs):
    for rep in indecs.values():
        cert = tau_locally_free(fp.folded_module(rep))
        assert cert.tau_locally_free and cert.exhausted


def test_mixed_module_negative_control():
    y = b2_mixed_module()
    assert rank_vector(y).ranks == [1, 1]
    cert = tau_locally_free(y)
    assert not cert.tau_locally_free and cert.failure == ("tau", 1, 0, 0)


def test_setup_problems():
    q, act = a3_c2()
    assert setup_problems(q, act, 2) == []
    assert setup_problems(q, act, 3) == ["group order 2 is not a power of 3"]
    assert setup_problems(q, act, 4) == ["4 is not prime"]
    q, act = kronecker_c2()
    assert len(setup_problems(q, act, 2)) == 1
    with pytest.raises(SetupViolated):
        FoldingPipeline(q, act, 2)


def test_random_reps_induction_property():
    q, act = a3_c2()
    fp = FoldingPipeline(q, act, 2)
    for seed in range(30):
        rng = random.Random(seed)
        dims = [rng.randint(0, 2) for _ in range(3)]
        mats = [[[rng.randrange(2) for _ in range(dims[s])] for _ in range(dims[t])] for s, t in q.arrows]
        rep = QuiverRep(q, 2, dims, mats)
        m = fp.module_of(rep)
        assert not m.problems()
        y = fp.folded_module(rep)
        assert y.dim_vector() == [2 * dims[0], dims[1] + dims[2]]
        res = rank_vector(y)
        assert res.locally_free and res.ranks == fp.folded_dim(rep)


def test_zero_module(fp):
    z = fp.module_of(QuiverRep(fp.quiver, 2, [0, 0, 0], [[], []]))
    assert z.dim_vector() == [0, 0, 0] and tau(z).dim == 0 and tau_inverse(z).dim == 0
    y = fp.psi(fp.induce(z))
    assert y.dim == 0 and rank_vector(y).ranks == [0, 0]
    assert tau_locally_free(y).tau_locally_free
