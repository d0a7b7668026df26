"""Small finite groups given by multiplication tables, and brute-force isomorphism testing."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if any(len(row) != n for row in table):
            raise ValueError("multiplication table must be square")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        for e in range(self.order):
            if all(self.table[e][g] == g for g in range(self.order)):
                return e
        raise ValueError("no identity element")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, g: int) -> int:
        e, x, k = self.identity, g, 1
        while x != e:
            x = self.table[x][g]
            k += 1
        return k

    def order_profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted (element order, count) pairs: a cheap isomorphism invariant."""
        return tuple(sorted(Counter(self.element_order(g) for g in range(self.order)).items()))


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    n, m = a.order, b.order
    rows = []
    for i in range(n * m):
        ai, bi = divmod(i, m)
        rows.append(tuple(a.mul(ai, j // m) * m + b.mul(bi, j % m) for j in range(n * m)))
    return FiniteGroup(tuple(rows))


def symmetric_group(k: int) -> FiniteGroup:
    from itertools import permutations
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (p q)(i) = p(q(i))
    return FiniteGroup(tuple(tuple(index[tuple(p[q[i]] for i in range(k))] for q in perms)
                             for p in perms))


def generating_set(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = _closure(g, gens)
    for x in range(g.order):
        if len(span) == g.order:
            break
        if x not in span:
            gens.append(x)
            span = _closure(g, gens)
    return gens


def _closure(g: FiniteGroup, gens: Sequence[int]) -> set[int]:
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = g.mul(x, s)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def _extend(g: FiniteGroup, h: FiniteGroup, gens, images) -> dict[int, int] | None:
    """Homomorphism on <gens> sending gens to images, or None if inconsistent."""
    phi = {g.identity: h.identity}
    frontier = [g.identity]
    while frontier:
        x = frontier.pop()
        for s, t in zip(gens, images):
            y, v = g.mul(x, s), h.mul(phi[x], t)
            if y in phi:
                if phi[y] != v:
                    return None
            else:
                phi[y] = v
                frontier.append(y)
    return phi


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> list[int] | None:
    """Generator-image backtracking; returns phi as a list (phi[x] in h) or None."""
    if g.order != h.order or g.order_profile() != h.order_profile():
        return None
    gens = generating_set(g)
    orders = [g.element_order(x) for x in gens]
    by_order: dict[int, list[int]] = {}
    for y in range(h.order):
        by_order.setdefault(h.element_order(y), []).append(y)

    def search(k, images):
        phi = _extend(g, h, gens[:k], images)
        if phi is None or len(set(phi.values())) != len(phi):
            return None
        if k == len(gens):
            return [phi[x] for x in range(g.order)]
        for y in by_order.get(orders[k], []):
            found = search(k + 1, images + [y])
            if found is not None:
                return found
        return None

    return search(0, [])


def is_homomorphism(g: FiniteGroup, h: FiniteGroup, phi: Sequence[int]) -> bool:
    return all(phi[g.mul(a, b)] == h.mul(phi[a], phi[b])
               for a in range(g.order) for b in range(g.order))
