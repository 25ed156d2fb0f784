import random

import numpy as np
import pytest

from foldquiv.eicat import EIAction, build_free_ei_category
from foldquiv.errors import InvalidChoices
from foldquiv.instances import a3_c2, kronecker_c2, random_ei_action, twisted_cyclic_action
from foldquiv.quotient import (QuotientChoices, choice_problems, default_choices, equivalence_functor,
                               quotient_ei_quiver, random_choices, verify_equivalence)


def _report(ea, choices=None):
    qe = quotient_ei_quiver(ea, choices)
    return qe, verify_equivalence(equivalence_functor(qe), cap=400)


def test_a3_quotient_sizes():
    qe, rep = _report(EIAction.trivial_assignment(a3_c2()[1]))
    assert [g.order for g in qe.base.groups] == [2, 1]
    assert [b.size for b in qe.base.bisets] == [2]
    assert rep["ok"] and rep["fully_faithful"] and rep["functor_laws"]


def test_kronecker_quotient_sizes():
    qe, rep = _report(EIAction.trivial_assignment(kronecker_c2()[1]))
    assert [g.order for g in qe.base.groups] == [2, 2]
    assert [b.size for b in qe.base.bisets] == [4]
    assert rep["ok"]


def test_simplified_bisets_agree_under_triviality():
    qe = quotient_ei_quiver(EIAction.trivial_assignment(a3_c2()[1]))
    assert qe.triviality_conditions() and qe.simplified_agrees()


def test_twisted_assignment_breaks_triviality():
    q, act = kronecker_c2()
    qe = quotient_ei_quiver(twisted_cyclic_action(q, act, 3, 2))
    assert not qe.triviality_conditions() and qe.simplified_agrees() is None
    assert verify_equivalence(equivalence_functor(qe), cap=400)["ok"]


def test_equivalence_random_instances():
    for seed in range(25):
        ea = random_ei_action(random.Random(seed))
        qe, rep = _report(ea)
        assert rep["ok"], (seed, rep)
        assert rep["hom_cardinality"] and rep["fully_faithful"] and rep["functor_laws"]


def test_biset_size_formula_100_seeds():
    for seed in range(100):
        qe = quotient_ei_quiver(random_ei_action(random.Random(seed)))
        for k, b in enumerate(qe.base.bisets):
            assert b.size == qe.expected_biset_size(k)
            assert not b.problems()


def test_choice_invariance():
    for seed in range(20):
        ea = random_ei_action(random.Random(seed))
        ref = build_free_ei_category(quotient_ei_quiver(ea).base)
        for t in range(3):
            ch = random_choices(ea, random.Random(1000 * seed + t))
            assert not choice_problems(ea, ch)
            qe, rep = _report(ea, ch)
            assert rep["ok"]
            cat = build_free_ei_category(qe.base)
            assert np.array_equal(cat.hom_profile(), ref.hom_profile())
            assert [g.order for g in qe.base.groups] == [g.order for g in quotient_ei_quiver(ea).base.groups]


def test_invalid_choices_rejected():
    ea = EIAction.trivial_assignment(a3_c2()[1])
    ch = default_choices(ea)
    bad = QuotientChoices([1, 1], ch.iota1, ch.g_alpha, ch.coset_reps)
    assert choice_problems(ea, bad)
    with pytest.raises(InvalidChoices):
        quotient_ei_quiver(ea, bad)
    bad = QuotientChoices(ch.iota0, ch.iota1, ch.g_alpha, [[1]])
    with pytest.raises(InvalidChoices):
        quotient_ei_quiver(ea, bad)
