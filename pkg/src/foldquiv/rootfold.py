"""Root lattices, positive real roots by reflection closure and the folding projection."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import ImageNotRoot
from .quiver import Quiver

DEFAULT_MAX_HEIGHT = 60


@dataclass
class RootLattice:
    """Z^n with simple roots e_i, Cartan matrix C and bilinear form gram = D·C."""

    cartan: np.ndarray
    D: list
    labels: list = field(default=None)

    def __post_init__(self):
        self.cartan = np.array(self.cartan, dtype=np.int64)
        self.D = [int(x) for x in self.D]
        if self.labels is None:
            self.labels = [f"e{i + 1}" for i in range(self.rank)]
        g = self.gram
        if not np.array_equal(g, g.T):
            raise ValueError("D·C is not symmetric")

    @property
    def rank(self) -> int:
        return self.cartan.shape[0]

    @property
    def gram(self) -> np.ndarray:
        return np.diag(self.D) @ self.cartan

    def form(self, a, b) -> int:
        return int(np.asarray(a) @ self.gram @ np.asarray(b))

    def reflect(self, i: int, v) -> tuple:
        """s_i(v) = v - (Σ_j c_ij v_j) e_i."""
        v = list(v)
        v[i] -= int(self.cartan[i] @ np.asarray(v, dtype=np.int64))
        return tuple(v)

    def simple(self, i: int) -> tuple:
        return tuple(1 if k == i else 0 for k in range(self.rank))


def quiver_lattice(q: Quiver) -> RootLattice:
    return RootLattice(q.symmetric_cartan(), [1] * q.n, list(q.vertex_labels))


def triple_lattice(ct) -> RootLattice:
    return RootLattice(ct.C, ct.D, list(ct.labels))


@dataclass
class RootSet:
    """Positive real roots with a reflection word reaching each from a simple root."""

    roots: list
    words: dict
    cap_reached: bool

    def __len__(self):
        return len(self.roots)

    def __contains__(self, v):
        return tuple(v) in self.words


def positive_roots(lat: RootLattice, max_height: int = DEFAULT_MAX_HEIGHT) -> RootSet:
    """Closure of the simple roots under simple reflections, kept positive and of height <= max_height.

    words[r] = (i, k1, ..., km) means r = s_km ... s_k1 (e_i).
    """
    if max_height < 1:
        raise ValueError("max_height must be at least 1")
    words = {}
    frontier = []
    for i in range(lat.rank):
        e = lat.simple(i)
        words[e] = (i,)
        frontier.append(e)
    capped = False
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(lat.rank):
                w = lat.reflect(i, v)
                if w in words or min(w) < 0:
                    continue
                if sum(w) > max_height:
                    capped = True
                    continue
                words[w] = words[v] + (i,)
                nxt.append(w)
        frontier = nxt
    roots = sorted(words, key=lambda r: (sum(r), tuple(-x for x in r)))
    return RootSet(roots, words, capped)


def replay_word(lat: RootLattice, word: tuple) -> tuple:
    v = lat.simple(word[0])
    for i in word[1:]:
        v = lat.reflect(i, v)
    return v


def tits_form(cartan, v) -> int:
    """½ vᵀCv for a symmetric Cartan matrix: Σ v_i² - Σ_edges v_i v_j."""
    c = np.asarray(cartan, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return int(v @ c @ v) // 2


def folding_projection(pi0, n_orbits: int | None = None) -> np.ndarray:
    """Matrix of f: Z^{Δ0} -> Z^{Δ0/G}, f(e_i) = E_{π(i)}."""
    pi0 = list(pi0)
    m = (max(pi0) + 1) if n_orbits is None else n_orbits
    f = np.zeros((m, len(pi0)), dtype=np.int64)
    for i, k in enumerate(pi0):
        f[k, i] = 1
    return f


@dataclass
class FoldResult:
    images: dict
    fibers: dict
    surjective: bool

    def fiber_sizes(self, order=None) -> list[int]:
        keys = order if order is not None else sorted(self.fibers)
        return [len(self.fibers.get(tuple(k), [])) for k in keys]


def fold_roots(src_roots, dst_roots, f) -> FoldResult:
    """Apply f to every source root; every image must be a target root."""
    f = np.asarray(f, dtype=np.int64)
    dst = {tuple(r) for r in dst_roots}
    images = {}
    fibers = defaultdict(list)
    for r in src_roots:
        img = tuple(int(x) for x in f @ np.asarray(r, dtype=np.int64))
        if img not in dst:
            raise ImageNotRoot(f"f{tuple(r)} = {img} is not a root")
        images[tuple(r)] = img
        fibers[img].append(tuple(r))
    return FoldResult(images, dict(fibers), set(fibers) == dst)
