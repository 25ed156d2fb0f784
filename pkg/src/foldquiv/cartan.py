"""Cartan triples, the triple attached to a group action on a quiver, cyclic-stabilizer
conditions, EI quivers of Cartan type and the constructions relating them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd

import numpy as np

from .eicat import EIAction, EIQuiver
from .errors import DaggerViolated, InvalidTriple, NonIntegerEntry, NotIsomorphic
from .fingroup import Biset, FinGroup, biset_product, cyclic, is_equivariant, is_group_hom, lcm, restricted_regular
from .quiver import Quiver, QuiverAction, check_action, quotient_quiver


@dataclass
class CartanTriple:
    """Cartan matrix C, symmetrizer D = diag(c_1..c_n) and orientation Omega (0-based pairs)."""

    C: np.ndarray
    D: list
    omega: frozenset
    labels: list = field(default=None)

    def __post_init__(self):
        self.C = np.array(self.C, dtype=np.int64)
        self.D = [int(x) for x in self.D]
        self.omega = frozenset((int(i), int(j)) for i, j in self.omega)
        if self.labels is None:
            self.labels = [str(i + 1) for i in range(self.n)]

    @property
    def n(self) -> int:
        return self.C.shape[0]

    def same_as(self, other: "CartanTriple") -> bool:
        """Exact equality of (C, D, Omega), labels ignored."""
        return (self.C.shape == other.C.shape and bool(np.array_equal(self.C, other.C))
                and self.D == other.D and self.omega == other.omega)

    def gcd_identity_failures(self) -> list[tuple]:
        """Pairs violating -c_ij / gcd(c_ij, c_ji) = c_j / gcd(c_i, c_j)."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                cij, cji = int(self.C[i, j]), int(self.C[j, i])
                if i == j or cij == 0:
                    continue
                if -cij * gcd(self.D[i], self.D[j]) != self.D[j] * gcd(cij, cji):
                    out.append((i, j))
        return out

    def to_dict(self) -> dict:
        return {"C": self.C.tolist(), "D": list(self.D), "Omega": sorted([list(p) for p in self.omega]),
                "labels": list(self.labels)}

    def __repr__(self):
        return f"CartanTriple(C={self.C.tolist()}, D={self.D}, Omega={sorted(self.omega)})"


def validate(ct: CartanTriple) -> dict:
    """Per-condition verdicts for (C1)-(C3) and (O1)-(O2)."""
    c, n = ct.C, ct.n
    fails = []
    shape_ok = c.shape == (n, n) and len(ct.D) == n
    if not shape_ok:
        return {"C1": False, "C2": False, "C3": False, "O1": False, "O2": False, "valid": False,
                "failures": ["shape mismatch"]}
    c1 = all(int(c[i, i]) == 2 for i in range(n))
    if not c1:
        fails.append("diagonal entries must be 2")
    c2 = all(int(c[i, j]) <= 0 and (c[i, j] < 0) == (c[j, i] < 0) for i in range(n) for j in range(n) if i != j)
    if not c2:
        fails.append("off-diagonal entries must be non-positive with symmetric zero pattern")
    dc = np.diag(ct.D) @ c
    c3 = all(x >= 1 for x in ct.D) and bool(np.array_equal(dc, dc.T))
    if not c3:
        fails.append("DC is not symmetric with positive D")
    o1 = all(0 <= i < n and 0 <= j < n and i != j for i, j in ct.omega)
    if o1:
        for i in range(n):
            for j in range(i + 1, n):
                hits = ((i, j) in ct.omega) + ((j, i) in ct.omega)
                if hits != (1 if c[i, j] < 0 else 0):
                    o1 = False
    if not o1:
        fails.append("orientation does not pick exactly one direction per edge")
    o2 = _acyclic(n, ct.omega)
    if not o2:
        fails.append("orientation has a cycle")
    ok = c1 and c2 and c3 and o1 and o2
    return {"C1": c1, "C2": c2, "C3": c3, "O1": o1, "O2": o2, "valid": ok, "failures": fails}


def _acyclic(n: int, omega) -> bool:
    pairs = [(i, j) for i, j in omega if 0 <= i < n and 0 <= j < n]
    indeg = [0] * n
    for _, j in pairs:
        indeg[j] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for i, j in pairs:
            if i == v:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
    return seen == n


def require_valid(ct: CartanTriple) -> None:
    rep = validate(ct)
    if not rep["valid"]:
        raise InvalidTriple("; ".join(rep["failures"]))


def associated_cartan_triple(q: Quiver, act: QuiverAction) -> CartanTriple:
    """c_i = |G|/|orbit i|, c_ij = -N_ij/|orbit j|; (j, i) in Omega iff the orbit quiver has i -> j."""
    qbar, pi0, _ = quotient_quiver(q, act)
    n, order = qbar.n, act.group.order
    sizes = [pi0.count(k) for k in range(n)]
    counts = np.zeros((n, n), dtype=np.int64)
    for s, t in q.arrows:
        counts[pi0[s], pi0[t]] += 1
        counts[pi0[t], pi0[s]] += 1 if pi0[s] != pi0[t] else 0
    c = 2 * np.eye(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if counts[i, j] % sizes[j]:
                raise NonIntegerEntry(f"{counts[i, j]} arrows between orbits {i} and {j} not divisible by {sizes[j]}")
            c[i, j] = -(counts[i, j] // sizes[j])
    d = []
    for k in range(n):
        if order % sizes[k]:
            raise NonIntegerEntry(f"orbit size {sizes[k]} does not divide |G| = {order}")
        d.append(order // sizes[k])
    omega = {(t, s) for s, t in qbar.arrows}
    ct = CartanTriple(c, d, omega, list(qbar.vertex_labels))
    require_valid(ct)
    bad = ct.gcd_identity_failures()
    if bad:
        raise InvalidTriple(f"gcd identity fails at {bad}")
    return ct


@dataclass
class DaggerData:
    """A chosen generator of each vertex stabilizer."""

    xi: list

    def orders(self, group: FinGroup) -> list[int]:
        return [group.element_order(x) for x in self.xi]


def _dagger_report(q: Quiver, act: QuiverAction, xi: list) -> dict:
    grp = act.group
    orders = [grp.element_order(x) for x in xi]
    fails = {"dagger1": [], "dagger2": [], "dagger3": []}
    for i in range(q.n):
        if grp.closure([xi[i]]) != act.vertex_stabilizer(i):
            fails["dagger1"].append(i)
    for a, (s, t) in enumerate(q.arrows):
        d = gcd(orders[s], orders[t])
        x = grp.power(xi[s], orders[s] // d)
        if x != grp.power(xi[t], orders[t] // d) or x not in act.arrow_stabilizer(a):
            fails["dagger2"].append(a)
    for g in range(grp.order):
        for i in range(q.n):
            if xi[act.v(g, i)] != grp.conj(g, xi[i]):
                fails["dagger3"].append((g, i))
                break
    rep = {k: not v for k, v in fails.items()}
    rep["ok"] = all(rep.values())
    rep["xi"] = list(xi)
    rep["orders"] = orders
    rep["failures"] = fails
    return rep


def _auto_candidates(q: Quiver, act: QuiverAction):
    """Generator choices propagated from orbit representatives by conjugation."""
    grp = act.group
    gen = grp.cyclic_generator()
    if gen is not None:
        a = grp.order
        xi = []
        for i in range(q.n):
            ai = len(act.vertex_stabilizer(i))
            xi.append(grp.power(gen, a // ai))
        yield xi
        return
    reps = [orb[0] for orb in act.vertex_act.orbits()]
    options = []
    for r in reps:
        stab = act.vertex_stabilizer(r)
        options.append(sorted(x for x in stab if grp.closure([x]) == stab))
    if any(not o for o in options):
        return
    for pick in product(*options):
        xi = [None] * q.n
        for r, x in zip(reps, pick):
            for g in range(grp.order):
                xi[act.v(g, r)] = grp.conj(g, x)
        yield xi


def check_dagger(q: Quiver, act: QuiverAction, data: DaggerData | str | None = "auto", max_tries: int = 4096) -> dict:
    """Verify the cyclic-stabilizer conditions for supplied or automatically derived generators.

    Auto mode: for cyclic G with least generator ξ, ξ_i = ξ^(|G|/|G_i|); otherwise
    generators of representative stabilizers are searched and spread by conjugation.
    """
    if isinstance(data, DaggerData):
        return _dagger_report(q, act, list(data.xi))
    first = None
    for k, xi in enumerate(_auto_candidates(q, act)):
        if k >= max_tries:
            break
        rep = _dagger_report(q, act, xi)
        if rep["ok"]:
            return rep
        first = first or rep
    if first is None:
        fails = {"dagger1": [i for i in range(q.n) if not _cyclic_set(act.group, act.vertex_stabilizer(i))],
                 "dagger2": [], "dagger3": []}
        return {"dagger1": False, "dagger2": False, "dagger3": False, "ok": False, "xi": None, "orders": None,
                "failures": fails}
    return first


def _cyclic_set(grp: FinGroup, elems) -> bool:
    return any(grp.closure([x]) == elems for x in elems)


def _cyclic_arrow_biset(xi: FinGroup, xj: FinGroup, ci: int, cj: int) -> Biset:
    d = gcd(ci, cj)
    gij = cyclic(d)
    left = restricted_regular(xi, gij, [k * (ci // d) for k in range(d)], "right")
    right = restricted_regular(xj, gij, [k * (cj // d) for k in range(d)], "left")
    return biset_product(left, right)


def cartan_type_ei_quiver(ct: CartanTriple) -> EIQuiver:
    """Arrows j -> i for (i, j) in Omega with multiplicity gcd(c_ij, c_ji); X(i) cyclic of order c_i."""
    require_valid(ct)
    arrows, labels, bisets = [], [], []
    groups = [cyclic(c) for c in ct.D]
    for i, j in sorted(ct.omega):
        mult = gcd(int(ct.C[i, j]), int(ct.C[j, i]))
        for g in range(1, mult + 1):
            arrows.append((j, i))
            labels.append(f"alpha{g}_{ct.labels[i]},{ct.labels[j]}")
            bisets.append(_cyclic_arrow_biset(groups[i], groups[j], ct.D[i], ct.D[j]))
    q = Quiver(ct.n, arrows, ct.labels, labels)
    return EIQuiver(q, groups, bisets)


def _p_split(c: int, p: int) -> tuple[int, int]:
    """c = p^r * d with p not dividing d; returns (r, d)."""
    r = 0
    while c % p == 0:
        c //= p
        r += 1
    return r, c


def unfold_triple(ct: CartanTriple, char: int) -> CartanTriple:
    """Unfold the prime-to-p part of D: index set (i, l) with 0 <= l < d_i.

    char 0 unfolds all of D (d_i = c_i) and yields D' = identity.
    """
    require_valid(ct)
    if char == 0:
        r = [0] * ct.n
        d = list(ct.D)
        p = 1
    else:
        from .fplinalg import is_prime

        if not is_prime(char):
            raise InvalidTriple(f"characteristic {char} is neither 0 nor prime")
        p = char
        r, d = zip(*[_p_split(c, p) for c in ct.D])
    index = [(i, l) for i in range(ct.n) for l in range(d[i])]
    pos = {x: k for k, x in enumerate(index)}
    m = len(index)
    c2 = 2 * np.eye(m, dtype=np.int64)
    for (i, li), (j, lj) in product(index, index):
        if i == j or ct.C[i, j] == 0:
            continue
        if (li * p ** r[i] - lj * p ** r[j]) % gcd(d[i], d[j]) == 0:
            c2[pos[(i, li)], pos[(j, lj)]] = -gcd(int(ct.C[i, j]), int(ct.C[j, i])) * p ** (r[j] - min(r[i], r[j]))
    d2 = [p ** r[i] for i, _ in index]
    omega = {(pos[(i, li)], pos[(j, lj)]) for (i, j) in ct.omega for li in range(d[i]) for lj in range(d[j])
             if c2[pos[(i, li)], pos[(j, lj)]] < 0}
    labels = [f"({ct.labels[i]},{l})" for i, l in index]
    out = CartanTriple(c2, d2, omega, labels)
    require_valid(out)
    return out


def realizing_quiver(ct: CartanTriple) -> tuple[Quiver, QuiverAction]:
    """A quiver with a cyclic group action whose associated triple is ct."""
    require_valid(ct)
    c = 1
    for x in ct.D:
        c = lcm(c, x)
    d = [c // x for x in ct.D]
    index = [(i, l) for i in range(ct.n) for l in range(d[i])]
    pos = {x: k for k, x in enumerate(index)}
    arrows, labels, keys = [], [], []
    for i, j in sorted(ct.omega):
        mult = gcd(int(ct.C[i, j]), int(ct.C[j, i]))
        for li in range(d[i]):
            for lj in range(d[j]):
                if (li - lj) % gcd(d[i], d[j]):
                    continue
                for g in range(1, mult + 1):
                    keys.append((i, li, j, lj, g))
                    arrows.append((pos[(j, lj)], pos[(i, li)]))
                    labels.append(f"alpha{g}_({ct.labels[i]},{li}),({ct.labels[j]},{lj})")
    kid = {k: n for n, k in enumerate(keys)}
    q = Quiver(len(index), arrows, [f"({ct.labels[i]},{l})" for i, l in index], labels)
    grp = cyclic(c)
    if c == 1:
        return q, QuiverAction.trivial(q, grp)
    vimg = [pos[(i, (l + 1) % d[i])] for i, l in index]
    aimg = [kid[(i, (li + 1) % d[i], j, (lj + 1) % d[j], g)] for (i, li, j, lj, g) in keys]
    act = QuiverAction.from_generators(q, grp, {1: vimg}, {1: aimg})
    return q, act


@dataclass
class EIQuiverIsomorphism:
    """Identification of the quotient EI quiver (trivial assignment) with the Cartan-type one."""

    source: EIQuiver
    target: EIQuiver
    triple: CartanTriple
    vertex_map: list
    arrow_map: list
    group_maps: list
    biset_maps: list
    dagger: dict
    quotient: object = None

    def verify(self) -> bool:
        """Exhaustive check of every group isomorphism and equivariant biset bijection."""
        sq, tq = self.source.quiver, self.target.quiver
        if sorted(self.arrow_map) != list(range(tq.num_arrows)) or sq.num_arrows != tq.num_arrows:
            return False
        for v in range(sq.n):
            f = self.group_maps[v]
            if sorted(f) != list(range(self.target.groups[self.vertex_map[v]].order)):
                return False
            if not is_group_hom(f, self.source.groups[v], self.target.groups[self.vertex_map[v]]):
                return False
        for a, (s, t) in enumerate(sq.arrows):
            b = self.arrow_map[a]
            if tq.arrows[b] != (self.vertex_map[s], self.vertex_map[t]):
                return False
            f = self.biset_maps[a]
            if sorted(f) != list(range(self.target.bisets[b].size)):
                return False
            if not is_equivariant(f, self.source.bisets[a], self.target.bisets[b], self.group_maps[t],
                                  self.group_maps[s]):
                return False
        return True


def _equivariant_bijection(a: Biset, b: Biset, lm, rm):
    """An equivariant bijection a -> b along the group maps, found orbit by orbit."""
    if a.size != b.size:
        return None
    lgens = a.left_group.generators
    rgens = a.right_group.generators
    f = [-1] * a.size
    used = set()
    for x0 in range(a.size):
        if f[x0] != -1:
            continue
        for y0 in range(b.size):
            if y0 in used:
                continue
            trial = {x0: y0}
            stack = [x0]
            ok = True
            while stack and ok:
                x = stack.pop()
                y = trial[x]
                moves = [(int(a.left[g, x]), int(b.left[lm[g], y])) for g in lgens]
                moves += [(int(a.right[h, x]), int(b.right[rm[h], y])) for h in rgens]
                for nx, ny in moves:
                    if nx in trial:
                        if trial[nx] != ny:
                            ok = False
                            break
                    else:
                        trial[nx] = ny
                        stack.append(nx)
            if ok and len(set(trial.values())) == len(trial) and not (set(trial.values()) & used):
                for x, y in trial.items():
                    f[x] = y
                used |= set(trial.values())
                break
        else:
            return None
    if not is_equivariant(f, a, b, lm, rm):
        return None
    return f


def cartan_type_isomorphism(q: Quiver, act: QuiverAction) -> EIQuiverIsomorphism:
    """Identify (quotient quiver, trivial-assignment quotient) with the Cartan-type EI quiver.

    Biset cardinalities and arrow counts are compared first; a mismatch raises
    NotIsomorphic with a witness. Then the cyclic-stabilizer conditions are
    required and every identification is built and checked exhaustively.
    """
    from .quotient import quotient_ei_quiver

    ct = associated_cartan_triple(q, act)
    qe = quotient_ei_quiver(EIAction.trivial_assignment(act))
    src = qe.base
    tgt = cartan_type_ei_quiver(ct)
    sq, tq = src.quiver, tgt.quiver
    by_ends: dict = {}
    for b, ends in enumerate(tq.arrows):
        by_ends.setdefault(ends, []).append(b)
    for a, (s, t) in enumerate(sq.arrows):
        size_t = _cyclic_size(ct, t, s)
        if src.bisets[a].size != size_t:
            w = {"arrow": sq.arrow_labels[a], "quotient_size": src.bisets[a].size, "cartan_size": size_t}
            raise NotIsomorphic(f"|quotient biset({sq.arrow_labels[a]})| = {w['quotient_size']} != "
                                f"{size_t} = |Cartan-type biset|", w)
    src_ends: dict = {}
    for a, ends in enumerate(sq.arrows):
        src_ends.setdefault(ends, []).append(a)
    for ends in set(src_ends) | set(by_ends):
        ns, nt = len(src_ends.get(ends, [])), len(by_ends.get(ends, []))
        if ns != nt:
            w = {"endpoints": ends, "quotient_arrows": ns, "cartan_arrows": nt}
            raise NotIsomorphic(f"{ns} quotient arrows vs {nt} Cartan-type arrows between {ends}", w)
    rep = check_dagger(q, act, "auto")
    if not rep["ok"]:
        raise DaggerViolated(f"cyclic-stabilizer conditions fail: {rep['failures']}")
    grp = act.group
    group_maps = []
    for v in range(sq.n):
        xi = rep["xi"][qe.choices.iota0[v]]
        emb = qe.stab_emb[v]
        pos = {grp.power(xi, e): e for e in range(ct.D[v])}
        # with a trivial vertex group, element k of the quotient group is the k-th stabilizer element
        group_maps.append([pos[emb[k]] for k in range(src.groups[v].order)])
    arrow_map = [-1] * sq.num_arrows
    biset_maps = [None] * sq.num_arrows
    for ends, arrs in src_ends.items():
        for a, b in zip(arrs, by_ends[ends]):
            s, t = ends
            f = _equivariant_bijection(src.bisets[a], tgt.bisets[b], group_maps[t], group_maps[s])
            if f is None:
                raise NotIsomorphic(f"no equivariant bijection on arrow {sq.arrow_labels[a]}",
                                    {"arrow": sq.arrow_labels[a]})
            arrow_map[a] = b
            biset_maps[a] = f
    iso = EIQuiverIsomorphism(src, tgt, ct, list(range(sq.n)), arrow_map, group_maps, biset_maps, rep, qe)
    if not iso.verify():
        raise NotIsomorphic("constructed identification failed verification")
    return iso


def _cyclic_size(ct: CartanTriple, i: int, j: int) -> int:
    return ct.D[i] * ct.D[j] // gcd(ct.D[i], ct.D[j])


def stabilizer_condition_holds(q: Quiver, act: QuiverAction) -> bool:
    return check_action(q, act)["stabilizer_flag"]
