"""Quivers with finite group actions, their quotient EI quivers, Cartan triples and root folding."""

from .cartan import CartanTriple, associated_cartan_triple, cartan_type_isomorphism, realizing_quiver, unfold_triple
from .eicat import EIAction, EIQuiver, build_free_ei_category, category_action, skew_category
from .fingroup import Biset, FinGroup, cyclic
from .fplinalg import BACKEND
from .quiver import Quiver, QuiverAction
from .quotient import equivalence_functor, quotient_ei_quiver, verify_equivalence
from .rootfold import folding_projection, positive_roots

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Biset", "CartanTriple", "EIAction", "EIQuiver", "FinGroup", "Quiver", "QuiverAction",
    "associated_cartan_triple", "build_free_ei_category", "cartan_type_isomorphism", "category_action", "cyclic",
    "equivalence_functor", "folding_projection", "positive_roots", "quotient_ei_quiver", "realizing_quiver",
    "skew_category", "unfold_triple", "verify_equivalence",
]
