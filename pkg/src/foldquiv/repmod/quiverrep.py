"""Quiver representations over F_p, their path-algebra modules and BGP reflection functors."""

from __future__ import annotations

import numpy as np

from .. import fplinalg as fl
from ..algkit import StructAlgebra, path_algebra
from ..errors import NotSink, NotSource, RootNotPositive
from ..quiver import Quiver
from ..rootfold import quiver_lattice
from .modules import AlgModule


class QuiverRep:
    """dims[v] and mats[a] of shape (dims[target], dims[source])."""

    def __init__(self, quiver: Quiver, p: int, dims, mats):
        self.quiver = quiver
        self.p = p
        self.dims = [int(x) for x in dims]
        self.mats = [np.asarray(m, dtype=np.int64).reshape(self.dims[t], self.dims[s]) % p
                     for m, (s, t) in zip(mats, quiver.arrows)]
        if len(self.mats) != quiver.num_arrows:
            raise ValueError("one matrix per arrow required")

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def offsets(self) -> list[int]:
        out, k = [], 0
        for d in self.dims:
            out.append(k)
            k += d
        return out

    def path_matrix(self, arrows: tuple) -> np.ndarray:
        """Matrix of a path given in composition order."""
        q = self.quiver
        src = q.source(arrows[-1])
        m = np.eye(self.dims[src], dtype=np.int64)
        for a in reversed(arrows):
            m = self.mats[a] @ m % self.p
        return m

    def __repr__(self):
        return f"QuiverRep(dims={self.dims})"


def simple_rep(q: Quiver, p: int, v: int) -> QuiverRep:
    dims = [1 if k == v else 0 for k in range(q.n)]
    return QuiverRep(q, p, dims, [np.zeros((dims[t], dims[s])) for s, t in q.arrows])


def rep_to_module(rep: QuiverRep, alg: StructAlgebra | None = None) -> AlgModule:
    """The module over the path algebra (basis = paths of the path category)."""
    alg = alg if alg is not None else path_algebra(rep.quiver, rep.p)
    cat = alg.path_data.category
    off = rep.offsets()
    d = rep.dim
    act = np.zeros((alg.dim, d, d), dtype=np.int64)
    for m in range(cat.n_mor):
        pth = cat.paths[cat.mor_path[m]]
        s, t = pth.source, pth.target
        block = np.eye(rep.dims[s], dtype=np.int64) if not pth.arrows else rep.path_matrix(pth.arrows)
        act[m, off[t]:off[t] + rep.dims[t], off[s]:off[s] + rep.dims[s]] = block
    return AlgModule(alg, act)


def module_to_rep(m: AlgModule) -> QuiverRep:
    """Read a path-algebra module back as a representation in the bases of e_v M."""
    alg = m.algebra
    cat = alg.path_data.category
    q = alg.path_data.quiver
    spaces = [m.idempotent_space(v) for v in range(q.n)]
    mats = []
    for a, (s, t) in enumerate(q.arrows):
        mor = cat.mor_of[(cat.path_index[(s, (a,))], 0)]
        imgs = (m.act[mor] @ spaces[s].T).T % m.p
        mats.append(fl.coords(spaces[t], imgs, m.p).T if spaces[s].shape[0] else
                    np.zeros((spaces[t].shape[0], 0), dtype=np.int64))
    return QuiverRep(q, m.p, [sp.shape[0] for sp in spaces], mats)


def reflect_at_sink(rep: QuiverRep, i: int) -> QuiverRep:
    """F+ at a sink: V(i) becomes ker(⊕ V(s(a)) -> V(i)) and incident arrows reverse."""
    q, p = rep.quiver, rep.p
    if not q.is_sink(i):
        raise NotSink(f"vertex {q.vertex_labels[i]} is not a sink")
    inc = q.arrows_to(i)
    widths = [rep.dims[q.source(a)] for a in inc]
    total = sum(widths)
    big = np.hstack([rep.mats[a] for a in inc]) if inc else np.zeros((rep.dims[i], 0), dtype=np.int64)
    ker = fl.nullspace(big % p, p) if total else np.zeros((0, 0), dtype=np.int64)
    new_q = q.reversed_at(i)
    dims = list(rep.dims)
    dims[i] = ker.shape[0]
    mats = list(rep.mats)
    off = 0
    for a, w in zip(inc, widths):
        mats[a] = ker[:, off:off + w].T % p
        off += w
    return QuiverRep(new_q, p, dims, mats)


def reflect_at_source(rep: QuiverRep, i: int) -> QuiverRep:
    """F- at a source: V(i) becomes coker(V(i) -> ⊕ V(t(a))) and incident arrows reverse."""
    q, p = rep.quiver, rep.p
    if not q.is_source(i):
        raise NotSource(f"vertex {q.vertex_labels[i]} is not a source")
    out = q.arrows_from(i)
    heights = [rep.dims[q.target(a)] for a in out]
    total = sum(heights)
    big = np.vstack([rep.mats[a] for a in out]) if out else np.zeros((0, rep.dims[i]), dtype=np.int64)
    img = fl.image_rows(big, p) if total and rep.dims[i] else np.zeros((0, total), dtype=np.int64)
    # cokernel coordinates: a linear map killing the image, rows = basis of the annihilator
    proj = fl.nullspace(img, p) if img.shape[0] else np.eye(total, dtype=np.int64)
    new_q = q.reversed_at(i)
    dims = list(rep.dims)
    dims[i] = proj.shape[0]
    mats = list(rep.mats)
    off = 0
    for a, h in zip(out, heights):
        mats[a] = proj[:, off:off + h] % p
        off += h
    return QuiverRep(new_q, p, dims, mats)


def indecomposable_for_root(q: Quiver, root, p: int, max_steps: int | None = None) -> QuiverRep:
    """The indecomposable with dimension vector `root` (finite type), built with BGP reflections.

    Reflections run along the sink sequence given by the reversed topological
    order, repeated; the module is rebuilt from the simple reached by F-.
    """
    root = tuple(int(x) for x in root)
    if len(root) != q.n or min(root) < 0 or sum(root) == 0:
        raise RootNotPositive(f"{root} is not a positive vector")
    lat = quiver_lattice(q)
    order = list(reversed(q.topo))
    steps = max_steps if max_steps is not None else 4 * q.n * (sum(root) + q.n)
    quivers, seq = [q], []
    cur = root
    for t in range(steps):
        i = order[t % q.n]
        if cur == lat.simple(i):
            rep = simple_rep(quivers[-1], p, i)
            for j, qq in zip(reversed(seq), reversed(quivers[:-1])):
                rep = reflect_at_source(rep, j)
                rep.quiver = qq
            return rep
        nxt = lat.reflect(i, cur)
        if min(nxt) < 0:
            raise RootNotPositive(f"{root} is not a real root")
        seq.append(i)
        quivers.append(quivers[-1].reversed_at(i))
        cur = nxt
    raise RootNotPositive(f"{root} did not reduce to a simple root in {steps} steps")
