"""Bibundles over finite groupoids as an arrow calculus: 2-cells are equivariant maps."""
from __future__ import annotations

from dataclasses import dataclass

from .bicat import IsoSearch
from .errors import GroupoidMismatch
from .groupoid import Bibundle, HSTensor, find_bibundle_iso, hs_tensor, unit_bibundle


@dataclass(frozen=True)
class BibundleMap:
    source: Bibundle
    target: Bibundle
    table: tuple[int, ...]

    def __post_init__(self):
        s, t = self.source, self.target
        if s.G != t.G or s.H != t.H:
            raise GroupoidMismatch("2-cell between bibundles over different groupoids")
        f = self.table
        if len(f) != s.size or any(not 0 <= v < t.size for v in f):
            raise ValueError("map table is malformed")
        for p in range(s.size):
            if (s.tau[p], s.sigma[p]) != (t.tau[f[p]], t.sigma[f[p]]):
                raise ValueError("map does not respect the anchors")
            for x in range(s.G.n_arrows):
                xp = s.act_left(x, p)
                if xp >= 0 and f[xp] != t.act_left(x, f[p]):
                    raise ValueError("map is not left equivariant")
            for h in range(s.H.n_arrows):
                ph = s.act_right(p, h)
                if ph >= 0 and f[ph] != t.act_right(f[p], h):
                    raise ValueError("map is not right equivariant")

    @property
    def bijective(self) -> bool:
        return len(set(self.table)) == self.target.size == self.source.size


class GroupoidCalculus:
    name = "groupoid"

    def __init__(self):
        self._tensors: dict[tuple[int, int], tuple[Bibundle, Bibundle, HSTensor]] = {}
        self._units: dict[int, tuple[object, Bibundle]] = {}

    def tensor(self, m: Bibundle, n: Bibundle) -> HSTensor:
        key = (id(m), id(n))
        hit = self._tensors.get(key)
        if hit is None or hit[0] is not m or hit[1] is not n:
            hit = (m, n, hs_tensor(m, n))
            self._tensors[key] = hit
        return hit[2]

    def objects(self, cell):
        return cell.G, cell.H

    def same_object(self, a, b) -> bool:
        return a == b

    def unit(self, obj):
        hit = self._units.get(id(obj))
        if hit is None or hit[0] is not obj:
            hit = (obj, unit_bibundle(obj))
            self._units[id(obj)] = hit
        return hit[1]

    def compose(self, m, n):
        return self.tensor(m, n).bibundle

    def identity(self, cell):
        return BibundleMap(cell, cell, tuple(range(cell.size)))

    def source(self, alpha):
        return alpha.source

    def target(self, alpha):
        return alpha.target

    def vcompose(self, beta, alpha):
        if alpha.target != beta.source:
            raise ValueError("2-cells do not compose vertically")
        return BibundleMap(alpha.source, beta.target,
                           tuple(beta.table[v] for v in alpha.table))

    def hcompose(self, alpha, beta):
        src = self.tensor(alpha.source, beta.source)
        dst = self.tensor(alpha.target, beta.target)
        table = tuple(dst.projection[(alpha.table[x], beta.table[y])]
                      for x, y in (o[0] for o in src.orbits))
        return BibundleMap(src.bibundle, dst.bibundle, table)

    def equal(self, alpha, beta) -> bool:
        return (alpha.source == beta.source and alpha.target == beta.target
                and alpha.table == beta.table)

    def is_iso(self, alpha) -> bool:
        return alpha.bijective

    def associator(self, m, n, p):
        mn = self.tensor(m, n)
        np_ = self.tensor(n, p)
        lhs = self.tensor(mn.bibundle, p)
        rhs = self.tensor(m, np_.bibundle)
        table = []
        for a, z in (o[0] for o in lhs.orbits):
            x, y = mn.rep(a)
            table.append(rhs.projection[(x, np_.projection[(y, z)])])
        return BibundleMap(lhs.bibundle, rhs.bibundle, tuple(table))

    def left_unitor(self, m):
        t = self.tensor(self.unit(m.G), m)
        table = tuple(m.act_left(g, x) for g, x in (o[0] for o in t.orbits))
        return BibundleMap(t.bibundle, m, table)

    def right_unitor(self, m):
        t = self.tensor(m, self.unit(m.H))
        table = tuple(m.act_right(x, h) for x, h in (o[0] for o in t.orbits))
        return BibundleMap(t.bibundle, m, table)

    def find_iso(self, m, n) -> IsoSearch:
        if m.size != n.size:
            return IsoSearch(None, True, "carrier-size")
        f = find_bibundle_iso(m, n)
        return IsoSearch(None if f is None else BibundleMap(m, n, f), True, "exhaustive")

    def describe(self, cell):
        return cell.describe()
