import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldquiv.errors import ImageNotRoot
from foldquiv.instances import a3_c2, b2_triple, g2_triple
from foldquiv.quiver import Quiver, quotient_quiver
from foldquiv.rootfold import (RootLattice, fold_roots, folding_projection, positive_roots, quiver_lattice,
                               replay_word, tits_form, triple_lattice)


def _linear(n):
    return Quiver(n, [(i, i + 1) for i in range(n - 1)])


def _d(n):
    return Quiver(n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)])


def _e6():
    return Quiver(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)])


def _tits_oracle(q, bound):
    """Positive vectors with Tits form 1, found by exhaustive search in a box."""
    c = q.symmetric_cartan()
    out = set()
    for v in itertools.product(range(bound + 1), repeat=q.n):
        if any(v) and tits_form(c, v) == 1:
            out.add(v)
    return out


@pytest.mark.parametrize("q,count", [
    (_linear(1), 1), (_linear(2), 3), (_linear(3), 6), (_linear(4), 10), (_linear(5), 15),
    (_d(4), 12), (_d(5), 20), (_e6(), 36),
])
def test_simply_laced_root_counts(q, count):
    roots = positive_roots(quiver_lattice(q))
    assert len(roots) == count and not roots.cap_reached


@pytest.mark.parametrize("q,bound", [(_linear(4), 1), (_d(4), 2), (_d(5), 2), (_e6(), 3)])
def test_roots_match_tits_form(q, bound):
    roots = positive_roots(quiver_lattice(q))
    assert set(roots.roots) == _tits_oracle(q, bound)


@pytest.mark.parametrize("c,d,count", [
    ([[2, -1], [-2, 2]], [2, 1], 4),
    ([[2, -1], [-3, 2]], [3, 1], 6),
    ([[2, -1, 0], [-1, 2, -1], [0, -2, 2]], [2, 2, 1], 9),
    ([[2, -1, 0], [-1, 2, -2], [0, -1, 2]], [1, 1, 2], 9),
    ([[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]], [1, 1, 2, 2], 24),
])
def test_symmetrizable_root_counts(c, d, count):
    assert len(positive_roots(RootLattice(c, d))) == count


def test_words_replay():
    for lat in (triple_lattice(b2_triple()), triple_lattice(g2_triple()), quiver_lattice(_e6())):
        roots = positive_roots(lat)
        for r in roots.roots:
            assert replay_word(lat, roots.words[r]) == r


def test_affine_cap():
    lat = RootLattice([[2, -2], [-2, 2]], [1, 1])
    roots = positive_roots(lat, max_height=9)
    assert roots.cap_reached
    assert set(roots.roots) == {(n, n + 1) for n in range(5)} | {(n + 1, n) for n in range(5)}


def test_bad_height():
    with pytest.raises(ValueError):
        positive_roots(quiver_lattice(_linear(2)), max_height=0)


def test_nonsymmetric_gram_rejected():
    with pytest.raises(ValueError):
        RootLattice([[2, -1], [-2, 2]], [1, 1])


def test_a3_folds_onto_b2():
    q, act = a3_c2()
    _, pi0, _ = quotient_quiver(q, act)
    f = folding_projection(pi0)
    assert f.tolist() == [[1, 0, 0], [0, 1, 1]]
    dst = positive_roots(triple_lattice(b2_triple()))
    assert dst.roots == [(1, 0), (0, 1), (1, 1), (1, 2)]
    res = fold_roots(positive_roots(quiver_lattice(q)).roots, dst.roots, f)
    assert res.surjective
    assert res.fiber_sizes(dst.roots) == [1, 2, 2, 1]


def test_d4_folds_onto_g2():
    q = Quiver(4, [(1, 0), (2, 0), (3, 0)])
    f = folding_projection([0, 1, 1, 1])
    dst = positive_roots(triple_lattice(g2_triple()))
    res = fold_roots(positive_roots(quiver_lattice(q)).roots, dst.roots, f)
    assert res.surjective and sum(res.fiber_sizes()) == 12


def test_fold_rejects_non_root_image():
    f = folding_projection([0, 0, 1])
    with pytest.raises(ImageNotRoot):
        fold_roots(positive_roots(quiver_lattice(_linear(3))).roots, [(1, 0), (0, 1), (1, 1)], f)


@given(st.integers(1, 7), st.data())
def test_reflections_preserve_form(n, data):
    lat = quiver_lattice(_linear(n))
    v = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n)))
    i = data.draw(st.integers(0, n - 1))
    w = lat.reflect(i, v)
    assert lat.form(v, v) == lat.form(w, w)
    assert lat.reflect(i, w) == v


@given(st.integers(1, 8))
def test_type_a_count_property(n):
    assert len(positive_roots(quiver_lattice(_linear(n)))) == n * (n + 1) // 2


@given(st.integers(4, 7))
def test_type_d_count_property(n):
    assert len(positive_roots(quiver_lattice(_d(n)))) == n * (n - 1)


def test_folding_projection_columns():
    f = folding_projection([1, 0, 1, 2])
    assert f.shape == (3, 4) and np.all(f.sum(axis=0) == 1)
