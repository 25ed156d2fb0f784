"""Finite acyclic quivers, paths, group actions on quivers and quotient quivers."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import ActionInvalid, CyclicQuiver
from .fingroup import FinGroup, GSetAction, coset_reps, orbit_stabilizer


class Quiver:
    """Vertices 0..n-1 and arrows 0..m-1 with arrows[a] = (src, dst)."""

    def __init__(self, n: int, arrows, vertex_labels=None, arrow_labels=None):
        self.n = n
        self.arrows = [(int(s), int(t)) for s, t in arrows]
        for s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"arrow endpoint out of range: {(s, t)}")
        self.vertex_labels = list(vertex_labels) if vertex_labels is not None else [str(i) for i in range(n)]
        self.arrow_labels = (list(arrow_labels) if arrow_labels is not None
                             else [f"a{k}" for k in range(len(self.arrows))])
        self.topo = self._topological_order()
        self.topo_pos = {v: k for k, v in enumerate(self.topo)}

    def _topological_order(self) -> list[int]:
        indeg = [0] * self.n
        out = [[] for _ in range(self.n)]
        for s, t in self.arrows:
            indeg[t] += 1
            out[s].append(t)
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for t in out[v]:
                indeg[t] -= 1
                if indeg[t] == 0:
                    heapq.heappush(heap, t)
        if len(order) != self.n:
            raise CyclicQuiver("quiver has an oriented cycle")
        return order

    @property
    def num_arrows(self) -> int:
        return len(self.arrows)

    def source(self, a: int) -> int:
        return self.arrows[a][0]

    def target(self, a: int) -> int:
        return self.arrows[a][1]

    def arrows_from(self, v: int) -> list[int]:
        return [a for a, (s, _) in enumerate(self.arrows) if s == v]

    def arrows_to(self, v: int) -> list[int]:
        return [a for a, (_, t) in enumerate(self.arrows) if t == v]

    def is_sink(self, v: int) -> bool:
        return not self.arrows_from(v)

    def is_source(self, v: int) -> bool:
        return not self.arrows_to(v)

    def adjacency(self) -> np.ndarray:
        """A[s, t] = number of arrows s -> t."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for s, t in self.arrows:
            a[s, t] += 1
        return a

    def reversed_at(self, v: int) -> "Quiver":
        """Reverse every arrow incident to v (arrow ids and labels kept)."""
        arrows = [(t, s) if v in (s, t) else (s, t) for s, t in self.arrows]
        return Quiver(self.n, arrows, self.vertex_labels, self.arrow_labels)

    def symmetric_cartan(self) -> np.ndarray:
        a = self.adjacency()
        return 2 * np.eye(self.n, dtype=np.int64) - a - a.T

    def __repr__(self):
        return f"Quiver(n={self.n}, arrows={self.arrows})"


@dataclass(frozen=True)
class Path:
    """A path; `arrows` lists α_n, ..., α_1 in composition order (α_1 is traversed first)."""

    source: int
    target: int
    arrows: tuple

    @property
    def length(self) -> int:
        return len(self.arrows)

    def compose(self, other: "Path") -> "Path":
        """self ∘ other (other first)."""
        if other.target != self.source:
            raise ValueError("paths not composable")
        return Path(other.source, self.target, self.arrows + other.arrows)


def trivial_path(v: int) -> Path:
    return Path(v, v, ())


def enumerate_paths(q: Quiver, frm: int | None = None, to: int | None = None) -> list[Path]:
    """All paths (trivial ones included), ordered by topological position of the
    source and then lexicographically by the arrows in traversal order."""
    out = []
    starts = q.topo if frm is None else [frm]
    out_arrows = [q.arrows_from(v) for v in range(q.n)]

    def dfs(src, cur, trail):
        if to is None or cur == to:
            out.append(Path(src, cur, tuple(reversed(trail))))
        for a in out_arrows[cur]:
            trail.append(a)
            dfs(src, q.target(a), trail)
            trail.pop()

    for v in starts:
        dfs(v, v, [])
    out.sort(key=lambda p: (q.topo_pos[p.source], tuple(reversed(p.arrows))))
    return out


class QuiverAction:
    """A group acting on a quiver by automorphisms."""

    def __init__(self, quiver: Quiver, group: FinGroup, vertex_act: GSetAction, arrow_act: GSetAction,
                 check=True):
        self.quiver = quiver
        self.group = group
        self.vertex_act = vertex_act
        self.arrow_act = arrow_act
        if check:
            problems = action_problems(quiver, self)
            if problems:
                raise ActionInvalid("; ".join(problems))

    def v(self, g: int, x: int) -> int:
        return int(self.vertex_act.perm[g, x])

    def a(self, g: int, x: int) -> int:
        return int(self.arrow_act.perm[g, x])

    def vertex_stabilizer(self, x: int) -> frozenset:
        return orbit_stabilizer(self.vertex_act, x)[1]

    def arrow_stabilizer(self, x: int) -> frozenset:
        return orbit_stabilizer(self.arrow_act, x)[1]

    @staticmethod
    def trivial(q: Quiver, group: FinGroup | None = None) -> "QuiverAction":
        from .fingroup import trivial_group

        g = group if group is not None else trivial_group()
        return QuiverAction(q, g, GSetAction.trivial(g, q.n), GSetAction.trivial(g, q.num_arrows), check=False)

    @staticmethod
    def from_generators(q: Quiver, group: FinGroup, vertex_images: dict, arrow_images: dict) -> "QuiverAction":
        """Extend permutations given on some group elements to the whole group.

        Elements of `group.generators` that are not listed act trivially; the
        extension must be a homomorphism, otherwise ActionInvalid is raised.
        """
        ident_v = list(range(q.n))
        ident_a = list(range(q.num_arrows))
        gens = list(dict.fromkeys(list(vertex_images) + list(arrow_images) + list(group.generators)))
        vimg = {g: list(vertex_images.get(g, ident_v)) for g in gens}
        aimg = {g: list(arrow_images.get(g, ident_a)) for g in gens}
        vperm = {0: ident_v}
        aperm = {0: ident_a}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for s in gens:
                y = group.m(s, x)
                nv = [vimg[s][vperm[x][i]] for i in range(q.n)]
                na = [aimg[s][aperm[x][i]] for i in range(q.num_arrows)]
                if y in vperm:
                    if vperm[y] != nv or aperm[y] != na:
                        raise ActionInvalid("generator images do not define a homomorphism")
                else:
                    vperm[y], aperm[y] = nv, na
                    frontier.append(y)
        if len(vperm) != group.order:
            raise ActionInvalid("listed elements do not generate the group")
        va = GSetAction(group, q.n, [vperm[g] for g in range(group.order)])
        aa = GSetAction(group, q.num_arrows, [aperm[g] for g in range(group.order)])
        return QuiverAction(q, group, va, aa)


def action_problems(q: Quiver, act: QuiverAction) -> list[str]:
    out = act.vertex_act.problems() + act.arrow_act.problems()
    if out:
        return out
    if act.vertex_act.n != q.n or act.arrow_act.n != q.num_arrows:
        return ["action sizes do not match the quiver"]
    for g in range(act.group.order):
        for a, (s, t) in enumerate(q.arrows):
            b = act.a(g, a)
            if q.source(b) != act.v(g, s) or q.target(b) != act.v(g, t):
                out.append(f"element {g} maps arrow {q.arrow_labels[a]} to an arrow with mismatched endpoints")
    return out


def check_action(q: Quiver, act: QuiverAction) -> dict:
    """Validity of the action plus the per-arrow stabilizer flag G_α = G_s(α) ∩ G_t(α)."""
    problems = action_problems(q, act)
    report = {"valid": not problems, "problems": problems, "stabilizer_flag": False, "stabilizer_failures": []}
    if problems:
        return report
    fails = []
    for a, (s, t) in enumerate(q.arrows):
        if act.arrow_stabilizer(a) != act.vertex_stabilizer(s) & act.vertex_stabilizer(t):
            fails.append(a)
    report["stabilizer_flag"] = not fails
    report["stabilizer_failures"] = fails
    return report


def quotient_quiver(q: Quiver, act: QuiverAction) -> tuple[Quiver, list[int], list[int]]:
    """Quiver of orbits; orbits are numbered by their least element."""
    problems = action_problems(q, act)
    if problems:
        raise ActionInvalid("; ".join(problems))
    vorb = act.vertex_act.orbits()
    aorb = act.arrow_act.orbits()
    pi0 = [0] * q.n
    for k, orb in enumerate(vorb):
        for v in orb:
            pi0[v] = k
    pi1 = [0] * q.num_arrows
    for k, orb in enumerate(aorb):
        for a in orb:
            pi1[a] = k
    arrows = [(pi0[q.source(orb[0])], pi0[q.target(orb[0])]) for orb in aorb]
    vl = ["{" + ",".join(q.vertex_labels[v] for v in orb) + "}" for orb in vorb]
    al = ["{" + ",".join(q.arrow_labels[a] for a in orb) + "}" for orb in aorb]
    return Quiver(len(vorb), arrows, vl, al), pi0, pi1


def coset_quiver(g: FinGroup, xis: list[int], check: bool = True) -> tuple[Quiver, QuiverAction]:
    """Quiver on ⊔_i G/<ξ_i> × {i} with arrows g(H_i ∩ H_j): (gH_i, i) -> (gH_j, j)."""
    subs = [g.closure([x]) for x in xis]
    orders = [g.element_order(x) for x in xis]
    vertices, vid = [], {}
    for i, h in enumerate(subs):
        for r in coset_reps(g, h, "left"):
            vid[(frozenset(g.m(r, x) for x in h), i)] = len(vertices)
            vertices.append((r, i))

    def vertex_of(x, i):
        return vid[(frozenset(g.m(x, y) for y in subs[i]), i)]

    arrows, keys = [], []
    for i in range(len(xis)):
        for j in range(i + 1, len(xis)):
            d = gcd(orders[i], orders[j])
            if g.power(xis[i], orders[i] // d) != g.power(xis[j], orders[j] // d):
                continue
            inter = subs[i] & subs[j]
            for r in coset_reps(g, inter, "left"):
                keys.append((frozenset(g.m(r, x) for x in inter), i, j))
                arrows.append((vertex_of(r, i), vertex_of(r, j)))
    aid = {k: n for n, k in enumerate(keys)}
    vperm = [[vertex_of(g.m(x, r), i) for (r, i) in vertices] for x in range(g.order)]
    aperm = [[aid[(frozenset(g.m(x, y) for y in c), i, j)] for (c, i, j) in keys] for x in range(g.order)]
    vl = [f"({g.labels[r]}H{i + 1},{i + 1})" for (r, i) in vertices]
    al = [f"{vl[s]}->{vl[t]}#{k}" for k, (s, t) in enumerate(arrows)]
    q = Quiver(len(vertices), arrows, vl, al)
    act = QuiverAction(q, g, GSetAction(g, q.n, vperm), GSetAction(g, q.num_arrows, aperm))
    if check:
        from .cartan import DaggerData, check_dagger

        xi_v = [g.conj(r, xis[i]) for (r, i) in vertices]
        report = check_dagger(q, act, DaggerData(xi_v))
        if not report["ok"]:
            raise AssertionError(f"coset quiver violates the cyclic-stabilizer conditions: {report}")
    return q, act
