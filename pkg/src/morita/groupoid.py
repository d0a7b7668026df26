"""Finite groupoids, their actions, and bibundles.

Arrows compose right to left: ``compose(x, y)`` is ``x y`` and is defined iff
``s(x) == t(y)``.  Everything is stored by integer index; names are kept for
witnesses and serialization.  A left action of G on M along tau: M -> G0 is
defined on pairs with ``s(x) == tau(m)`` and lands over ``t(x)``; a right action
of H along sigma is defined on pairs with ``sigma(m) == t(h)`` and lands over
``s(h)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .errors import AxiomViolation, GroupoidMismatch, NotAFunctor
from .groups import FiniteGroup

UNDEF = -1


def _index(names, what):
    out = {}
    for i, n in enumerate(names):
        n = str(n)
        if n in out:
            raise ValueError(f"duplicate {what} name {n!r}")
        out[n] = i
    return out


class FiniteGroupoid:
    """A finite groupoid with dense composition table ``comp[x, y]`` (UNDEF off G2)."""

    def __init__(self, objects, arrows, source, target, comp, inverse, unit,
                 name: str = "", check: bool = True):
        self.objects = tuple(str(o) for o in objects)
        self.arrows = tuple(str(a) for a in arrows)
        self.name = name
        self.obj_index = _index(self.objects, "object")
        self.arrow_index = _index(self.arrows, "arrow")
        self.s = tuple(int(v) for v in source)
        self.t = tuple(int(v) for v in target)
        self.inv = tuple(int(v) for v in inverse)
        self.unit = tuple(int(v) for v in unit)
        c = np.array(comp, dtype=np.int64).reshape(len(self.arrows), len(self.arrows))
        c.setflags(write=False)
        self.comp = c
        if check:
            self._validate()

    # -- structure ---------------------------------------------------------------
    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def compose(self, x: int, y: int) -> int:
        z = int(self.comp[x, y])
        if z == UNDEF:
            raise ValueError(f"{self.arrows[x]} and {self.arrows[y]} are not composable")
        return z

    def hom(self, a: int, b: int) -> list[int]:
        """Arrows a -> b (source a, target b)."""
        return [x for x in range(self.n_arrows) if self.s[x] == a and self.t[x] == b]

    def out_of(self, a: int) -> list[int]:
        return [x for x in range(self.n_arrows) if self.s[x] == a]

    def into(self, b: int) -> list[int]:
        return [x for x in range(self.n_arrows) if self.t[x] == b]

    def _validate(self):
        n, no = self.n_arrows, self.n_objects
        A = self.arrows
        for seq, what, bound in ((self.s, "source", no), (self.t, "target", no),
                                 (self.inv, "inverse", n), (self.unit, "unit", n)):
            expected = no if what == "unit" else n
            if len(seq) != expected or any(not 0 <= v < bound for v in seq):
                raise ValueError(f"{what} table is malformed")
        for x, y in iproduct(range(n), range(n)):
            z = int(self.comp[x, y])
            if (self.s[x] == self.t[y]) != (z != UNDEF):
                raise AxiomViolation("composable-domain", (A[x], A[y]))
            if z == UNDEF:
                continue
            if not 0 <= z < n or self.t[z] != self.t[x] or self.s[z] != self.s[y]:
                raise AxiomViolation("composition-endpoints", (A[x], A[y]))
        for x, y, w in iproduct(range(n), range(n), range(n)):
            xy, yw = self.comp[x, y], self.comp[y, w]
            if xy == UNDEF or yw == UNDEF:
                continue
            if self.comp[xy, w] != self.comp[x, yw]:
                raise AxiomViolation("associativity", (A[x], A[y], A[w]))
        for q, e in enumerate(self.unit):
            if self.s[e] != q or self.t[e] != q:
                raise AxiomViolation("unit-endpoints", (self.objects[q],))
        for x in range(n):
            if self.comp[x, self.unit[self.s[x]]] != x or self.comp[self.unit[self.t[x]], x] != x:
                raise AxiomViolation("unit-law", (A[x],))
            i = self.inv[x]
            if self.s[i] != self.t[x] or self.t[i] != self.s[x] \
                    or self.comp[x, i] != self.unit[self.t[x]] \
                    or self.comp[i, x] != self.unit[self.s[x]]:
                raise AxiomViolation("inverse-law", (A[x],))

    # -- invariants --------------------------------------------------------------
    def components(self) -> list[list[int]]:
        """Orbits of G0 under the arrows, each sorted, ordered by least element."""
        parent = list(range(self.n_objects))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in range(self.n_arrows):
            a, b = find(self.s[x]), find(self.t[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for q in range(self.n_objects):
            groups.setdefault(find(q), []).append(q)
        return [groups[k] for k in sorted(groups)]

    def isotropy(self, q: int) -> tuple[list[int], FiniteGroup]:
        """Isotropy group at q: its arrows and the group on their positions."""
        arrows = self.hom(q, q)
        pos = {x: i for i, x in enumerate(arrows)}
        table = tuple(tuple(pos[int(self.comp[x, y])] for y in arrows) for x in arrows)
        return arrows, FiniteGroup(table, tuple(self.arrows[x] for x in arrows))

    # -- identity ----------------------------------------------------------------
    def _key(self):
        return (self.objects, self.arrows, self.s, self.t, self.inv, self.unit,
                self.comp.tobytes())

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"FiniteGroupoid({label}{self.n_objects} objects, {self.n_arrows} arrows)"

    def to_payload(self) -> dict:
        O, A = self.objects, self.arrows
        return {
            "objects": list(O),
            "arrows": list(A),
            "source": {A[x]: O[self.s[x]] for x in range(self.n_arrows)},
            "target": {A[x]: O[self.t[x]] for x in range(self.n_arrows)},
            "compose": [[A[x], A[y], A[int(self.comp[x, y])]]
                        for x in range(self.n_arrows) for y in range(self.n_arrows)
                        if self.comp[x, y] != UNDEF],
            "inverse": {A[x]: A[self.inv[x]] for x in range(self.n_arrows)},
            "unit": {O[q]: A[self.unit[q]] for q in range(self.n_objects)},
        }


def validate_groupoid(objects, arrows, source, target, comp, inverse, unit,
                      name: str = "") -> FiniteGroupoid:
    return FiniteGroupoid(objects, arrows, source, target, comp, inverse, unit, name)


# -- constructors -------------------------------------------------------------------

def group_groupoid(group: FiniteGroup, name: str = "", obj: str = "*") -> FiniteGroupoid:
    """A group as a one-object groupoid; arrow names are the group labels."""
    n = group.order
    e = group.identity
    inverse = [next(y for y in range(n) if group.mul(x, y) == e) for x in range(n)]
    return FiniteGroupoid([obj], group.labels, [0] * n, [0] * n, group.table,
                          inverse, [e], name)


def point_groupoid(name: str = "pt") -> FiniteGroupoid:
    return FiniteGroupoid(["*"], ["1"], [0], [0], [[0]], [0], [0], name)


def pair_groupoid(n: int, name: str = "") -> FiniteGroupoid:
    """Objects 0..n-1, one arrow j -> i for every pair; arrow "i<j" has target i, source j."""
    idx = lambda i, j: i * n + j
    arrows = [f"{i}<{j}" for i in range(n) for j in range(n)]
    source = [j for i in range(n) for j in range(n)]
    target = [i for i in range(n) for j in range(n)]
    comp = np.full((n * n, n * n), UNDEF, dtype=np.int64)
    for i, j, k in iproduct(range(n), repeat=3):
        comp[idx(i, j), idx(j, k)] = idx(i, k)
    inverse = [idx(j, i) for i in range(n) for j in range(n)]
    unit = [idx(i, i) for i in range(n)]
    return FiniteGroupoid([str(i) for i in range(n)], arrows, source, target, comp,
                          inverse, unit, name or f"P{n}")


def discrete_groupoid(n: int, name: str = "") -> FiniteGroupoid:
    objs = [str(i) for i in range(n)]
    return FiniteGroupoid(objs, [f"1_{i}" for i in range(n)], range(n), range(n),
                          np.where(np.eye(n, dtype=bool), np.arange(n)[:, None], UNDEF),
                          range(n), range(n), name or f"D{n}")


def disjoint_union(g: FiniteGroupoid, h: FiniteGroupoid, name: str = "") -> FiniteGroupoid:
    no, na = g.n_objects, g.n_arrows
    objs = [f"{o}.0" for o in g.objects] + [f"{o}.1" for o in h.objects]
    arrows = [f"{a}.0" for a in g.arrows] + [f"{a}.1" for a in h.arrows]
    n = na + h.n_arrows
    comp = np.full((n, n), UNDEF, dtype=np.int64)
    comp[:na, :na] = g.comp
    hc = np.array(h.comp)
    comp[na:, na:] = np.where(hc == UNDEF, UNDEF, hc + na)
    return FiniteGroupoid(objs, arrows,
                          list(g.s) + [v + no for v in h.s], list(g.t) + [v + no for v in h.t],
                          comp, list(g.inv) + [v + na for v in h.inv],
                          list(g.unit) + [v + na for v in h.unit], name)


def action_groupoid(group: FiniteGroup, points: int, act, name: str = "") -> FiniteGroupoid:
    """Transformation groupoid of a group acting on 0..points-1 via act(g, i).

    Arrow (g, i) goes from i to act(g, i).
    """
    n = group.order
    e = group.identity
    arrows = [(g, i) for g in range(n) for i in range(points)]
    idx = {a: k for k, a in enumerate(arrows)}
    comp = np.full((len(arrows), len(arrows)), UNDEF, dtype=np.int64)
    for (g, i), (h, j) in iproduct(arrows, arrows):
        if act(h, j) == i:
            comp[idx[(g, i)], idx[(h, j)]] = idx[(group.mul(g, h), j)]
    inv_el = [next(y for y in range(n) if group.mul(x, y) == e) for x in range(n)]
    return FiniteGroupoid([str(i) for i in range(points)],
                          [f"{group.labels[g]}@{i}" for g, i in arrows],
                          [i for _, i in arrows], [act(g, i) for g, i in arrows], comp,
                          [idx[(inv_el[g], act(g, i))] for g, i in arrows],
                          [idx[(e, i)] for i in range(points)], name)


# -- functors -------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    on_objects: tuple[int, ...]
    on_arrows: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "on_objects", tuple(int(v) for v in self.on_objects))
        object.__setattr__(self, "on_arrows", tuple(int(v) for v in self.on_arrows))
        check_functor(self)

    def to_payload(self) -> dict:
        G, H = self.source, self.target
        return {"source": G.to_payload(), "target": H.to_payload(),
                "objects": {G.objects[q]: H.objects[v] for q, v in enumerate(self.on_objects)},
                "arrows": {G.arrows[x]: H.arrows[v] for x, v in enumerate(self.on_arrows)}}


def check_functor(f: GroupoidFunctor) -> None:
    G, H = f.source, f.target
    p0, p1 = f.on_objects, f.on_arrows
    if len(p0) != G.n_objects or len(p1) != G.n_arrows:
        raise NotAFunctor(("shape",))
    for x in range(G.n_arrows):
        if H.s[p1[x]] != p0[G.s[x]] or H.t[p1[x]] != p0[G.t[x]]:
            raise NotAFunctor(("endpoints", G.arrows[x]))
    for q in range(G.n_objects):
        if p1[G.unit[q]] != H.unit[p0[q]]:
            raise NotAFunctor(("unit", G.objects[q]))
    for x, y in iproduct(range(G.n_arrows), repeat=2):
        z = G.comp[x, y]
        if z != UNDEF and p1[z] != H.comp[p1[x], p1[y]]:
            raise NotAFunctor(("composition", G.arrows[x], G.arrows[y]))


# -- actions and bibundles ---------------------------------------------------------

class GroupoidAction:
    """A left or right action of a groupoid on a finite set over a base map.

    ``table[x, m]`` is the acted point (left: x.m, right: m.x) or UNDEF.
    """

    def __init__(self, groupoid: FiniteGroupoid, carrier, base, table, side: str = "left",
                 check: bool = True):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.groupoid = groupoid
        self.carrier = tuple(str(c) for c in carrier)
        self.point_index = _index(self.carrier, "carrier point")
        self.base = tuple(int(v) for v in base)
        T = np.array(table, dtype=np.int64).reshape(groupoid.n_arrows, len(self.carrier))
        T.setflags(write=False)
        self.table = T
        self.side = side
        if check:
            self._validate()

    @property
    def size(self) -> int:
        return len(self.carrier)

    def defined(self, x: int, m: int) -> bool:
        G = self.groupoid
        anchor = G.s[x] if self.side == "left" else G.t[x]
        return self.base[m] == anchor

    def _validate(self):
        G, T = self.groupoid, self.table
        if len(self.base) != self.size or any(not 0 <= b < G.n_objects for b in self.base):
            raise ValueError("base map is malformed")
        left = self.side == "left"
        land = G.t if left else G.s
        for x, m in iproduct(range(G.n_arrows), range(self.size)):
            v = int(T[x, m])
            if self.defined(x, m) != (v != UNDEF):
                raise AxiomViolation("action-domain", (G.arrows[x], self.carrier[m]))
            if v == UNDEF:
                continue
            if not 0 <= v < self.size or self.base[v] != land[x]:
                raise AxiomViolation("action-base", (G.arrows[x], self.carrier[m]))
        for m in range(self.size):
            if T[G.unit[self.base[m]], m] != m:
                raise AxiomViolation("action-unit", (self.carrier[m],))
        for x, y in iproduct(range(G.n_arrows), repeat=2):
            xy = G.comp[x, y]
            if xy == UNDEF:
                continue
            for m in range(self.size):
                if left:
                    # x.(y.m) == (xy).m
                    ym = T[y, m]
                    if ym != UNDEF and T[x, ym] != T[xy, m]:
                        raise AxiomViolation("action-composition",
                                             (G.arrows[x], G.arrows[y], self.carrier[m]))
                else:
                    # (m.x).y == m.(xy)
                    mx = T[x, m]
                    if mx != UNDEF and T[y, mx] != T[xy, m]:
                        raise AxiomViolation("action-composition",
                                             (self.carrier[m], G.arrows[x], G.arrows[y]))

    def __eq__(self, other):
        if not isinstance(other, GroupoidAction):
            return NotImplemented
        return (self.side == other.side and self.groupoid == other.groupoid
                and self.carrier == other.carrier and self.base == other.base
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.side, self.carrier, self.base, self.table.tobytes()))

    def __repr__(self):
        return f"GroupoidAction({self.side}, {self.size} points over {self.groupoid!r})"

    def to_payload(self) -> dict:
        G, C = self.groupoid, self.carrier
        pairs = []
        for x, m in iproduct(range(G.n_arrows), range(self.size)):
            v = int(self.table[x, m])
            if v != UNDEF:
                pairs.append([G.arrows[x], C[m], C[v]] if self.side == "left"
                             else [C[m], G.arrows[x], C[v]])
        return {"groupoid": G.to_payload(), "side": self.side, "carrier": list(C),
                "base": {C[m]: G.objects[self.base[m]] for m in range(self.size)},
                "act": pairs}


def validate_action(groupoid, carrier, base, table, side="left") -> GroupoidAction:
    return GroupoidAction(groupoid, carrier, base, table, side)


class Bibundle:
    """G -> M <- H: commuting left G-action along tau and right H-action along sigma."""

    def __init__(self, left: GroupoidAction, right: GroupoidAction, name: str = "",
                 check: bool = True):
        if left.side != "left" or right.side != "right":
            raise ValueError("need a left action and a right action")
        if left.carrier != right.carrier:
            raise ValueError("actions must share a carrier")
        self.left = left
        self.right = right
        self.name = name
        if check:
            self._validate()

    G = property(lambda self: self.left.groupoid)
    H = property(lambda self: self.right.groupoid)
    carrier = property(lambda self: self.left.carrier)
    tau = property(lambda self: self.left.base)
    sigma = property(lambda self: self.right.base)
    size = property(lambda self: self.left.size)

    def act_left(self, x: int, m: int) -> int:
        return int(self.left.table[x, m])

    def act_right(self, m: int, h: int) -> int:
        return int(self.right.table[h, m])

    def _validate(self):
        G, H = self.G, self.H
        for x, m in iproduct(range(G.n_arrows), range(self.size)):
            xm = self.act_left(x, m)
            if xm == UNDEF:
                continue
            # left action moves within sigma-fibres
            if self.sigma[xm] != self.sigma[m]:
                raise AxiomViolation("sigma-invariance", (G.arrows[x], self.carrier[m]))
        for h, m in iproduct(range(H.n_arrows), range(self.size)):
            mh = self.act_right(m, h)
            if mh == UNDEF:
                continue
            if self.tau[mh] != self.tau[m]:
                raise AxiomViolation("tau-invariance", (self.carrier[m], H.arrows[h]))
            for x in range(G.n_arrows):
                xm = self.act_left(x, m)
                if xm == UNDEF:
                    continue
                if self.act_right(xm, h) != self.act_left(x, mh):
                    raise AxiomViolation("actions-commute",
                                         (G.arrows[x], self.carrier[m], H.arrows[h]))

    def _key(self):
        return (self.carrier, self.tau, self.sigma, self.left.table.tobytes(),
                self.right.table.tobytes())

    def __eq__(self, other):
        if not isinstance(other, Bibundle):
            return NotImplemented
        return (self is other or (self._key() == other._key() and self.G == other.G
                                  and self.H == other.H))

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Bibundle({self.G!r} -> {self.size} points <- {self.H!r})"

    def describe(self) -> dict:
        return {"carrier": list(self.carrier),
                "tau": [self.G.objects[q] for q in self.tau],
                "sigma": [self.H.objects[q] for q in self.sigma]}

    def to_payload(self) -> dict:
        C = self.carrier
        lp, rp = self.left.to_payload(), self.right.to_payload()
        return {"left_groupoid": lp["groupoid"], "right_groupoid": rp["groupoid"],
                "carrier": list(C), "tau": lp["base"], "sigma": rp["base"],
                "left_act": lp["act"], "right_act": rp["act"]}


def make_bibundle(G: FiniteGroupoid, H: FiniteGroupoid, carrier, tau, sigma,
                  left_table, right_table, name: str = "", check: bool = True) -> Bibundle:
    return Bibundle(GroupoidAction(G, carrier, tau, left_table, "left", check),
                    GroupoidAction(H, carrier, sigma, right_table, "right", check),
                    name, check)


def validate_bibundle(G, H, carrier, tau, sigma, left_table, right_table) -> Bibundle:
    return make_bibundle(G, H, carrier, tau, sigma, left_table, right_table)


def _dense(n_arrows, n_points, entries) -> np.ndarray:
    T = np.full((n_arrows, n_points), UNDEF, dtype=np.int64)
    for x, m, v in entries:
        T[x, m] = v
    return T


def unit_bibundle(G: FiniteGroupoid) -> Bibundle:
    """G acting on its own arrows by left and right composition."""
    n = G.n_arrows
    left = _dense(n, n, ((x, m, G.comp[x, m]) for x, m in iproduct(range(n), repeat=2)
                         if G.comp[x, m] != UNDEF))
    right = _dense(n, n, ((h, m, G.comp[m, h]) for h, m in iproduct(range(n), repeat=2)
                          if G.comp[m, h] != UNDEF))
    return make_bibundle(G, G, G.arrows, G.t, G.s, left, right, name=f"1_{G.name}")


def functor_to_bibundle(f: GroupoidFunctor) -> Bibundle:
    """Carrier {(q, h) : t(h) = f(q)}, tau = q, sigma = s(h)."""
    G, H = f.source, f.target
    points = [(q, h) for q in range(G.n_objects) for h in range(H.n_arrows)
              if H.t[h] == f.on_objects[q]]
    idx = {pt: i for i, pt in enumerate(points)}
    left, right = [], []
    for i, (q, h) in enumerate(points):
        for x in G.out_of(q):
            left.append((x, i, idx[(G.t[x], int(H.comp[f.on_arrows[x], h]))]))
        for k in H.into(H.s[h]):
            right.append((k, i, idx[(q, int(H.comp[h, k]))]))
    carrier = [f"{G.objects[q]}|{H.arrows[h]}" for q, h in points]
    return make_bibundle(G, H, carrier, [q for q, _ in points], [H.s[h] for _, h in points],
                         _dense(G.n_arrows, len(points), left),
                         _dense(H.n_arrows, len(points), right))


def opposite_bibundle(m: Bibundle) -> Bibundle:
    """H -> M <- G with h.m = m.h^-1 and m.g = g^-1.m."""
    G, H = m.G, m.H
    left = _dense(H.n_arrows, m.size,
                  ((h, p, m.act_right(p, H.inv[h])) for h, p in iproduct(range(H.n_arrows),
                                                                         range(m.size))
                   if m.sigma[p] == H.s[h]))
    right = _dense(G.n_arrows, m.size,
                   ((g, p, m.act_left(G.inv[g], p)) for g, p in iproduct(range(G.n_arrows),
                                                                        range(m.size))
                    if m.tau[p] == G.t[g]))
    return make_bibundle(H, G, m.carrier, m.sigma, m.tau, left, right,
                         name=f"op({m.name})" if m.name else "")


def trivial_right(action: GroupoidAction) -> Bibundle:
    """A left action viewed as a bibundle into the point groupoid."""
    pt = point_groupoid()
    n = action.size
    right = np.arange(n, dtype=np.int64)[None, :]
    return Bibundle(action, GroupoidAction(pt, action.carrier, [0] * n, right, "right"))


# -- principality --------------------------------------------------------------------

@dataclass
class PrincipalityReport:
    side: str
    holds: bool
    surjective: bool
    free: bool
    transitive: bool
    witness: tuple | None = None

    def to_dict(self) -> dict:
        out = {"side": self.side, "holds": self.holds, "surjective": self.surjective,
               "free": self.free, "transitive": self.transitive}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _principal(act_points, n_points, projection, n_base, base_names, point_names,
               side) -> PrincipalityReport:
    """act_points: list of (m, acted point); checks (m -> (g.m, m)) is a bijection onto M x_pi M."""
    image = {}
    witness = None
    free = True
    for label, m, v in act_points:
        key = (v, m)
        if key in image:
            free = False
            witness = witness or ("not-free", point_names[m], image[key], label)
        else:
            image[key] = label
    transitive = True
    for a, b in iproduct(range(n_points), repeat=2):
        if projection[a] == projection[b] and (a, b) not in image:
            transitive = False
            witness = witness or ("not-transitive", point_names[b], point_names[a])
            break
    hit = set(projection)
    missing = [q for q in range(n_base) if q not in hit]
    surjective = not missing
    if not surjective:
        witness = witness or ("not-surjective", base_names[missing[0]])
    return PrincipalityReport(side, surjective and free and transitive, surjective, free,
                              transitive, witness)


def check_left_principal(m: Bibundle) -> PrincipalityReport:
    """G acts freely and transitively on the fibres of sigma, and sigma is onto H0."""
    G = m.G
    pairs = [(G.arrows[x], p, m.act_left(x, p)) for x, p in iproduct(range(G.n_arrows),
                                                                      range(m.size))
             if m.act_left(x, p) != UNDEF]
    return _principal(pairs, m.size, m.sigma, m.H.n_objects, m.H.objects, m.carrier, "left")


def check_right_principal(m: Bibundle) -> PrincipalityReport:
    """H acts freely and transitively on the fibres of tau, and tau is onto G0."""
    H = m.H
    pairs = [(H.arrows[h], p, m.act_right(p, h)) for h, p in iproduct(range(H.n_arrows),
                                                                       range(m.size))
             if m.act_right(p, h) != UNDEF]
    return _principal(pairs, m.size, m.tau, m.G.n_objects, m.G.objects, m.carrier, "right")


@dataclass
class BiprincipalReport:
    left: PrincipalityReport
    right: PrincipalityReport
    cross_check: bool | None = None

    @property
    def holds(self) -> bool:
        return self.left.holds and self.right.holds

    @property
    def consistent(self) -> bool | None:
        return None if self.cross_check is None else self.cross_check == self.holds

    def to_dict(self) -> dict:
        out = {"holds": self.holds, "left": self.left.to_dict(), "right": self.right.to_dict(),
               "proper": "automatic for finite discrete groupoids"}
        if self.cross_check is not None:
            out["inverse_by_opposite"] = self.cross_check
        return out


def check_biprincipal(m: Bibundle, cross_check: bool = False) -> BiprincipalReport:
    """Both-sided principality; optionally confirm that the opposite bundle is a two-sided inverse."""
    report = BiprincipalReport(check_left_principal(m), check_right_principal(m))
    if cross_check:
        from .bicat import verify_object_isomorphism
        from .groupoid_bicat import GroupoidCalculus
        from .errors import NotRegular
        try:
            res = verify_object_isomorphism(GroupoidCalculus(), m, opposite_bibundle(m))
            report.cross_check = res.certified
        except NotRegular:
            # a composite is undefined, so the opposite cannot be an inverse here
            report.cross_check = False
    return report


def is_s_connected(G: FiniteGroupoid) -> bool:
    """Every source fibre is connected; for a discrete arrow space that means a single arrow."""
    return all(len(G.out_of(q)) == 1 for q in range(G.n_objects))


# -- Hilsum-Skandalis composition ----------------------------------------------------

@dataclass
class HSTensor:
    bibundle: Bibundle
    projection: dict[tuple[int, int], int]
    orbits: list[list[tuple[int, int]]] = field(repr=False)

    def rep(self, k: int) -> tuple[int, int]:
        return self.orbits[k][0]


def hs_tensor(m: Bibundle, n: Bibundle) -> HSTensor:
    """M (x)_H N: orbits of M x_{H0} N under (x, y) ~ (x.h, h^-1.y).

    Requires the left factor to be left principal so the quotient is again a
    bibundle in the bicategory used here.
    """
    from .errors import NotRegular
    if m.H != n.G:
        raise GroupoidMismatch("middle groupoids differ")
    if not check_left_principal(m).holds:
        raise NotRegular("left factor is not left principal")
    H = m.H
    pairs = [(x, y) for x in range(m.size) for y in range(n.size) if m.sigma[x] == n.tau[y]]
    projection: dict[tuple[int, int], int] = {}
    orbits: list[list[tuple[int, int]]] = []
    for pair in pairs:
        if pair in projection:
            continue
        k = len(orbits)
        projection[pair] = k
        members = [pair]
        frontier = [pair]
        while frontier:
            x, y = frontier.pop()
            for h in H.into(m.sigma[x]):
                nxt = (m.act_right(x, h), n.act_left(H.inv[h], y))
                if nxt not in projection:
                    projection[nxt] = k
                    members.append(nxt)
                    frontier.append(nxt)
        members.sort()
        orbits.append(members)
    G, K = m.G, n.H
    left, right = [], []
    for k, members in enumerate(orbits):
        x, y = members[0]
        for g in G.out_of(m.tau[x]):
            img = {projection[(m.act_left(g, a), b)] for a, b in members}
            if len(img) != 1:
                raise AxiomViolation("well-defined-left", (G.arrows[g], k))
            left.append((g, k, img.pop()))
        for c in K.into(n.sigma[y]):
            img = {projection[(a, n.act_right(b, c))] for a, b in members}
            if len(img) != 1:
                raise AxiomViolation("well-defined-right", (k, K.arrows[c]))
            right.append((c, k, img.pop()))
    carrier = [f"[{m.carrier[x]},{n.carrier[y]}]" for x, y in (o[0] for o in orbits)]
    tau = [m.tau[o[0][0]] for o in orbits]
    sigma = [n.sigma[o[0][1]] for o in orbits]
    bib = make_bibundle(G, K, carrier, tau, sigma, _dense(G.n_arrows, len(orbits), left),
                        _dense(K.n_arrows, len(orbits), right))
    return HSTensor(bib, projection, orbits)


def induce_action(m: Bibundle, action: GroupoidAction) -> GroupoidAction:
    """Transport a left H-action along G -> M <- H to a left G-action."""
    if action.side != "left":
        raise ValueError("expected a left action")
    if action.groupoid != m.H:
        raise GroupoidMismatch("action groupoid differs from the bibundle's right groupoid")
    return hs_tensor(m, trivial_right(action)).bibundle.left


# -- equivariant maps and isomorphisms ----------------------------------------------

def _propagate(assign, used, u, v, moves):
    """Extend assign[u] = v along every move; False on conflict."""
    stack = [(u, v)]
    while stack:
        a, b = stack.pop()
        if assign[a] != UNDEF:
            if assign[a] != b:
                return False
            continue
        if used is not None:
            if b in used:
                return False
            used.add(b)
        assign[a] = b
        for move_a, move_b in moves:
            for a2, b2 in zip(move_a[:, a], move_b[:, b]):
                if (a2 == UNDEF) != (b2 == UNDEF):
                    return False
                if a2 != UNDEF:
                    stack.append((int(a2), int(b2)))
    return True


def _moves(src_tables, dst_tables):
    return [(np.asarray(a), np.asarray(b)) for a, b in zip(src_tables, dst_tables)]


def equivariant_maps(src_tables, dst_tables, src_labels, dst_labels, bijective: bool,
                     limit: int | None = None):
    """Yield every label-preserving map commuting with the given action tables.

    Points are grouped into orbits; the image of an orbit is fixed by the image
    of its least point, so the search is a product over orbits.
    """
    n, k = len(src_labels), len(dst_labels)
    if bijective and n != k:
        return
    moves = _moves(src_tables, dst_tables)
    found = 0

    def search(assign, used):
        nonlocal found
        try:
            u = assign.index(UNDEF)
        except ValueError:
            found += 1
            yield tuple(assign)
            return
        for v in range(k):
            if dst_labels[v] != src_labels[u]:
                continue
            a2 = list(assign)
            u2 = set(used) if bijective else None
            if _propagate(a2, u2, u, v, moves):
                yield from search(a2, u2)
                if limit is not None and found >= limit:
                    return

    yield from search([UNDEF] * n, set())


def bibundle_maps(m: Bibundle, n: Bibundle, bijective: bool = False, limit: int | None = None):
    if m.G != n.G or m.H != n.H:
        raise GroupoidMismatch("bibundles are over different groupoids")
    labels_m = list(zip(m.tau, m.sigma))
    labels_n = list(zip(n.tau, n.sigma))
    yield from equivariant_maps([m.left.table, m.right.table], [n.left.table, n.right.table],
                                labels_m, labels_n, bijective, limit)


def find_bibundle_iso(m: Bibundle, n: Bibundle) -> tuple[int, ...] | None:
    return next(bibundle_maps(m, n, bijective=True, limit=1), None)


def count_equivariant_maps(a: GroupoidAction, b: GroupoidAction) -> int:
    """|Hom_G(A, B)| for left actions, as a product over orbits of A."""
    if a.groupoid != b.groupoid or a.side != b.side:
        raise GroupoidMismatch("actions are over different groupoids")
    moves = _moves([a.table], [b.table])
    seen = [False] * a.size
    total = 1
    for u in range(a.size):
        if seen[u]:
            continue
        count = 0
        orbit = None
        for v in range(b.size):
            if b.base[v] != a.base[u]:
                continue
            assign = [UNDEF] * a.size
            if _propagate(assign, None, u, v, moves):
                count += 1
                orbit = [i for i, w in enumerate(assign) if w != UNDEF]
        if orbit is None:
            # orbit of u: closure under the action
            orbit = sorted({int(w) for w in a.table[:, u] if w != UNDEF} | {u})
        for i in orbit:
            seen[i] = True
        total *= count
        if total == 0:
            return 0
    return total


def find_action_iso(a: GroupoidAction, b: GroupoidAction) -> tuple[int, ...] | None:
    if a.groupoid != b.groupoid or a.side != b.side:
        raise GroupoidMismatch("actions are over different groupoids")
    gen = equivariant_maps([a.table], [b.table], list(a.base), list(b.base), True, 1)
    return next(gen, None)
