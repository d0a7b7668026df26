"""Morita equivalence of finite groupoids.

The decision procedure compares the multisets of isotropy groups over the
components; a positive answer comes with an explicit biprincipal bibundle.
An independent exhaustive search over small carriers serves as an oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, SearchConfig
from .errors import NotCertified
from .groupoid import (UNDEF, Bibundle, FiniteGroupoid, GroupoidAction, _dense,
                       check_biprincipal, count_equivariant_maps, find_action_iso,
                       induce_action, make_bibundle, opposite_bibundle)
from .groups import find_isomorphism


@dataclass
class ComponentData:
    objects: list[int]
    rep: int
    isotropy_arrows: list[int]
    group: object

    def summary(self, g: FiniteGroupoid) -> dict:
        return {"objects": [g.objects[q] for q in self.objects],
                "isotropy_order": self.group.order,
                "order_profile": [list(t) for t in self.group.order_profile()]}


def component_data(g: FiniteGroupoid) -> list[ComponentData]:
    out = []
    for comp in g.components():
        arrows, grp = g.isotropy(comp[0])
        out.append(ComponentData(comp, comp[0], arrows, grp))
    return out


@dataclass
class MoritaVerdict:
    status: str                       # equivalent | not-equivalent | unknown
    certificate: Bibundle | None = None
    obstruction: dict | None = None
    matching: list[tuple[int, int]] = field(default_factory=list)
    reason: str = ""

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.certificate is not None:
            out["certificate"] = {"carrier_size": self.certificate.size,
                                  "biprincipal": check_biprincipal(self.certificate).holds}
            out["matching"] = [list(p) for p in self.matching]
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
        if self.reason:
            out["reason"] = self.reason
        return out


def morita_decide(g: FiniteGroupoid, h: FiniteGroupoid,
                  config: SearchConfig = DEFAULT) -> MoritaVerdict:
    cg, ch = component_data(g), component_data(h)
    big = max([c.group.order for c in cg + ch], default=0)
    if big > config.group_order_cap:
        return MoritaVerdict("unknown", reason=f"isotropy order {big} exceeds cap "
                                               f"{config.group_order_cap}")
    matching: list[tuple[int, int]] = []
    isos: list[list[int]] = []
    free = list(range(len(ch)))
    unmatched = None
    for i, c in enumerate(cg):
        for j in free:
            phi = find_isomorphism(c.group, ch[j].group)
            if phi is not None:
                matching.append((i, j))
                isos.append(phi)
                free.remove(j)
                break
        else:
            unmatched = i
            break
    if unmatched is not None or free:
        return MoritaVerdict("not-equivalent", obstruction=_obstruction(g, h, cg, ch,
                                                                        unmatched, free))
    cert = _certificate(g, h, cg, ch, matching, isos)
    report = check_biprincipal(cert)
    if not report.holds:  # pragma: no cover - construction is principal by design
        raise AssertionError(f"certificate failed principality: {report.to_dict()}")
    return MoritaVerdict("equivalent", cert, matching=matching)


def _obstruction(g, h, cg, ch, unmatched, free) -> dict:
    def profile(cs):
        return sorted([c.group.order, [list(t) for t in c.group.order_profile()]] for c in cs)

    if len(cg) != len(ch):
        kind = "component-count"
    else:
        kind = "isotropy"
    out = {"kind": kind, "components": [len(cg), len(ch)],
           "isotropy_left": profile(cg), "isotropy_right": profile(ch)}
    if unmatched is not None:
        out["unmatched_left"] = cg[unmatched].summary(g)
    elif free:
        out["unmatched_right"] = ch[free[0]].summary(h)
    return out


def _certificate(g, h, cg, ch, matching, isos) -> Bibundle:
    """Carrier {(q', k) : q' in C, t(k) = r} for matched components C ~ D with reps q, r.

    With a chosen arrow a_{q'}: q -> q' for each q' in C and phi: G_q -> H_r,
    y.(q', k) = (t(y), phi(a_{t(y)}^-1 y a_{q'}) k) and (q', k).k' = (q', k k').
    """
    points: list[tuple[int, int]] = []
    phis: dict[int, dict[int, int]] = {}
    chosen: dict[int, int] = {}
    comp_of: dict[int, int] = {}
    for (i, j), phi in zip(matching, isos):
        C, D = cg[i], ch[j]
        phis[i] = {x: D.isotropy_arrows[phi[pos]] for pos, x in enumerate(C.isotropy_arrows)}
        for qp in C.objects:
            comp_of[qp] = i
            chosen[qp] = g.hom(C.rep, qp)[0]
            for k in h.into(D.rep):
                points.append((qp, k))
    points.sort()
    idx = {pt: n for n, pt in enumerate(points)}
    left, right = [], []
    for n, (qp, k) in enumerate(points):
        i = comp_of[qp]
        for y in g.out_of(qp):
            qpp = g.t[y]
            loop = g.comp[g.comp[g.inv[chosen[qpp]], y], chosen[qp]]
            left.append((y, n, idx[(qpp, int(h.comp[phis[i][int(loop)], k]))]))
        for kk in h.into(h.s[k]):
            right.append((kk, n, idx[(qp, int(h.comp[k, kk]))]))
    carrier = [f"{g.objects[q]}|{h.arrows[k]}" for q, k in points]
    return make_bibundle(g, h, carrier, [q for q, _ in points], [h.s[k] for _, k in points],
                         _dense(g.n_arrows, len(points), left),
                         _dense(h.n_arrows, len(points), right), name="morita-certificate")


# -- exhaustive oracle ---------------------------------------------------------------

def _fibre_actions(g: FiniteGroupoid, base: list[int], labels: list, side: str):
    """Every action of g on points with the given anchors that preserves ``labels``.

    A left action sends the fibre over s(x) to the fibre over t(x) for each
    arrow x; units act trivially and composites are forced.
    """
    n = len(base)
    fibres = {q: [m for m in range(n) if base[m] == q] for q in range(g.n_objects)}
    units = set(g.unit)
    free_arrows = [x for x in range(g.n_arrows) if x not in units]
    start, end = (g.s, g.t) if side == "left" else (g.t, g.s)

    def options(x):
        src, dst = fibres[start[x]], fibres[end[x]]
        if len(src) != len(dst):
            return []
        out = []
        for perm in itertools.permutations(dst):
            if all(labels[a] == labels[b] for a, b in zip(src, perm)):
                out.append(dict(zip(src, perm)))
        return out

    opts = {x: options(x) for x in free_arrows}
    if any(not o for o in opts.values()):
        return
    maps: dict[int, dict[int, int]] = {e: {m: m for m in fibres[g.s[e]]} for e in units}

    def consistent(x):
        for a, b in itertools.product(list(maps), repeat=2):
            ab = int(g.comp[a, b])
            if ab == UNDEF or ab not in maps or x not in (a, b, ab):
                continue
            # left: (ab).m = a.(b.m); right: m.(ab) = (m.a).b
            first, second = (b, a) if side == "left" else (a, b)
            for m, v in maps[ab].items():
                if maps[second][maps[first][m]] != v:
                    return False
        return True

    def search(k):
        if k == len(free_arrows):
            T = np.full((g.n_arrows, n), UNDEF, dtype=np.int64)
            for x, f in maps.items():
                for m, v in f.items():
                    T[x, m] = v
            yield T
            return
        x = free_arrows[k]
        for f in opts[x]:
            maps[x] = f
            if consistent(x):
                yield from search(k + 1)
            del maps[x]

    yield from search(0)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _principal_on(table, anchor, proj, n) -> bool:
    pairs = set()
    for x in range(table.shape[0]):
        for m in range(n):
            v = table[x, m]
            if v != UNDEF:
                if (int(v), m) in pairs:
                    return False
                pairs.add((int(v), m))
    return len(pairs) == sum(1 for a in range(n) for b in range(n) if proj[a] == proj[b])


@dataclass
class OracleResult:
    found: Bibundle | None
    examined: int
    carrier_cap: int

    @property
    def status(self) -> str:
        return "equivalent" if self.found is not None else "none-within-cap"


def search_biprincipal_bibundle(g: FiniteGroupoid, h: FiniteGroupoid,
                                carrier_cap: int = 6) -> OracleResult:
    """Exhaustively look for a biprincipal bibundle with at most ``carrier_cap`` points."""
    G0, H0 = g.n_objects, h.n_objects
    s_out = [len(g.out_of(q)) for q in range(G0)]
    t_in = [len(h.into(r)) for r in range(H0)]
    examined = 0
    for n in range(0 if G0 == H0 == 0 else 1, carrier_cap + 1):
        for flat in _compositions(n, G0 * H0):
            c = np.array(flat, dtype=np.int64).reshape(G0, H0)
            rows, cols = c.sum(axis=1), c.sum(axis=0)
            if (rows == 0).any() or (cols == 0).any():
                continue
            # bijection counts for both principality maps
            if int(rows @ np.array(s_out)) != int((cols ** 2).sum()):
                continue
            if int(cols @ np.array(t_in)) != int((rows ** 2).sum()):
                continue
            tau, sigma = [], []
            for q in range(G0):
                for r in range(H0):
                    tau += [q] * int(c[q, r])
                    sigma += [r] * int(c[q, r])
            lefts = [L for L in _fibre_actions(g, tau, sigma, "left")
                     if _principal_on(L, tau, sigma, n)]
            if not lefts:
                continue
            rights = [R for R in _fibre_actions(h, sigma, tau, "right")
                      if _principal_on(R, sigma, tau, n)]
            for L in lefts:
                for R in rights:
                    examined += 1
                    if not _commute(L, R, n):
                        continue
                    carrier = [f"m{k}" for k in range(n)]
                    b = make_bibundle(g, h, carrier, tau, sigma, L, R, name="oracle")
                    if check_biprincipal(b).holds:
                        return OracleResult(b, examined, carrier_cap)
    return OracleResult(None, examined, carrier_cap)


def _commute(L, R, n) -> bool:
    for x in range(L.shape[0]):
        for m in range(n):
            xm = L[x, m]
            if xm == UNDEF:
                continue
            for k in range(R.shape[0]):
                mk = R[k, m]
                if mk == UNDEF:
                    continue
                if R[k, xm] != L[x, mk]:
                    return False
    return True


# -- actions as representations ------------------------------------------------------

def enumerate_actions(g: FiniteGroupoid, size: int) -> list[GroupoidAction]:
    """Left actions of g on ``size`` points, one per isomorphism class."""
    reps: list[GroupoidAction] = []
    for counts in _compositions(size, g.n_objects):
        base = [q for q in range(g.n_objects) for _ in range(counts[q])]
        carrier = [f"a{k}" for k in range(size)]
        for T in _fibre_actions(g, base, [0] * size, "left"):
            act = GroupoidAction(g, carrier, base, T, "left")
            if not any(find_action_iso(r, act) is not None for r in reps):
                reps.append(act)
    return reps


def action_corpus(g: FiniteGroupoid, max_size: int) -> list[GroupoidAction]:
    out = []
    for n in range(1, max_size + 1):
        out.extend(enumerate_actions(g, n))
    return out


@dataclass
class ActionTransportReport:
    cap: int
    sizes: list[tuple[int, int]] = field(default_factory=list)
    map_counts: list[tuple[int, int, int, int]] = field(default_factory=list)
    counts_preserved: bool = True
    injective: bool = True
    round_trips: list[bool] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.counts_preserved and self.injective and all(self.round_trips)

    def to_dict(self) -> dict:
        return {"cap": self.cap, "passed": self.passed,
                "sizes": [list(t) for t in self.sizes],
                "map_counts": [list(t) for t in self.map_counts],
                "counts_preserved": self.counts_preserved, "injective": self.injective,
                "round_trips": self.round_trips}


def induced_action_report(m: Bibundle, size_cap: int) -> ActionTransportReport:
    """Transport every H-action up to ``size_cap`` points along a biprincipal m and back."""
    if not check_biprincipal(m).holds:
        raise NotCertified("action transport needs a biprincipal bibundle")
    back = opposite_bibundle(m)
    corpus = action_corpus(m.H, size_cap)
    images = [induce_action(m, a) for a in corpus]
    rep = ActionTransportReport(size_cap)
    rep.sizes = [(a.size, b.size) for a, b in zip(corpus, images)]
    for (i, a), (j, b) in itertools.product(enumerate(corpus), repeat=2):
        before = count_equivariant_maps(a, b)
        after = count_equivariant_maps(images[i], images[j])
        rep.map_counts.append((i, j, before, after))
        rep.counts_preserved &= before == after
        if i < j and images[i].size == images[j].size \
                and find_action_iso(images[i], images[j]) is not None:
            rep.injective = False
    for a, b in zip(corpus, images):
        rt = induce_action(back, b)
        rep.round_trips.append(rt.size == a.size and find_action_iso(rt, a) is not None)
    return rep
