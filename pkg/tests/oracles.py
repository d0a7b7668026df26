"""Brute-force reference computations, independent of the library's algorithms.

Everything here enumerates: vectors, matrices, bijections, pullback pairs.  It is
slow and only meant for the tiny instances used to derive frozen test values.
"""
from __future__ import annotations

import itertools

import numpy as np


def vectors(n: int, p: int):
    for v in itertools.product(range(p), repeat=n):
        yield np.array(v, dtype=np.int64)


def nullity(a, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    zeros = sum(1 for x in vectors(a.shape[1], p) if not (a @ x % p).any())
    k = 0
    while p ** k < zeros:
        k += 1
    return k


def rank(a, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    return a.shape[1] - nullity(a, p)


def solvable(a, b, p: int) -> bool:
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64).reshape(-1)
    return any(np.array_equal(a @ x % p, b % p) for x in vectors(a.shape[1], p))


def span_size(vecs, p: int) -> int:
    """Size of the span, grown one generator at a time by explicit set closure."""
    vecs = [tuple(int(a) % p for a in v) for v in vecs]
    if not vecs:
        return 1
    span = {(0,) * len(vecs[0])}
    for v in vecs:
        span = {tuple((a + c * b) % p for a, b in zip(x, v)) for x in span for c in range(p)}
    return len(span)


def tensor_dimension(m, n) -> int:
    """dim M (x)_S N: dim M * dim N minus the dimension of the span of the balancing relations."""
    p, dm, dn = m.p, m.dim, n.dim
    rels = []
    for a in range(m.right_algebra.dim):
        for i in range(dm):
            for j in range(dn):
                v = np.zeros(dm * dn, dtype=np.int64)
                ms = m.R[a][:, i]            # coordinates of m_i . s_a
                sn = n.L[a][:, j]            # coordinates of s_a . n_j
                for k in range(dm):
                    v[k * dn + j] += ms[k]
                for k in range(dn):
                    v[i * dn + k] -= sn[k]
                rels.append(v % p)
    size = span_size(rels, p)
    r = 0
    while p ** r < size:
        r += 1
    return dm * dn - r


def matrices(d: int, p: int):
    for entries in itertools.product(range(p), repeat=d * d):
        yield np.array(entries, dtype=np.int64).reshape(d, d)


def invertible(m, p: int) -> bool:
    d = m.shape[0]
    return nullity(m, p) == 0 if d else True


def general_linear(d: int, p: int) -> list[np.ndarray]:
    return [m for m in matrices(d, p) if invertible(m, p)]


def _inverse(g, p: int):
    d = g.shape[0]
    for h in matrices(d, p):
        if np.array_equal(g @ h % p, np.eye(d, dtype=np.int64)):
            return h
    raise ValueError("singular")


def representations(structure_constants, unit, d: int, p: int) -> list[np.ndarray]:
    """Every unital homomorphism A -> M_d(F_p), found by trying all matrix tuples.

    One basis index with a nonzero unit coordinate is solved from L(1) = I; all
    the others range over every d x d matrix.
    """
    c = np.asarray(structure_constants, dtype=np.int64)
    u = np.asarray(unit, dtype=np.int64)
    n = c.shape[0]
    k = int(np.flatnonzero(u % p)[0])
    inv_uk = pow(int(u[k]), p - 2, p)
    free = [i for i in range(n) if i != k]
    eye = np.eye(d, dtype=np.int64)
    out = []
    for choice in itertools.product(list(matrices(d, p)), repeat=len(free)):
        L = np.zeros((n, d, d), dtype=np.int64)
        for i, m in zip(free, choice):
            L[i] = m
        rest = sum((u[i] * L[i] for i in free), np.zeros((d, d), dtype=np.int64))
        L[k] = (inv_uk * (eye - rest)) % p
        ok = all(np.array_equal(L[i] @ L[j] % p, np.tensordot(c[i, j], L, 1) % p)
                 for i in range(n) for j in range(n))
        if ok:
            out.append(L)
    return out


def module_class_count(structure_constants, unit, d: int, p: int) -> int:
    """Isomorphism classes of d-dimensional left modules, by orbits under GL_d conjugation."""
    if d == 0:
        return 1
    group = [(g, _inverse(g, p)) for g in general_linear(d, p)]
    canon = set()
    for L in representations(structure_constants, unit, d, p):
        canon.add(min(tuple((g @ L @ gi % p).reshape(-1)) for g, gi in group))
    return len(canon)


def modules_isomorphic(L1, L2, p: int) -> bool:
    """Same-dimension modules given by action stacks: search all invertible intertwiners."""
    d = L1.shape[1]
    return any(all(np.array_equal(g @ a % p, b @ g % p) for a, b in zip(L1, L2))
               for g in general_linear(d, p))


# -- groups and groupoids -----------------------------------------------------------

def group_isomorphic(t1, t2) -> bool:
    t1, t2 = np.asarray(t1), np.asarray(t2)
    n = len(t1)
    if n != len(t2):
        return False
    for perm in itertools.permutations(range(n)):
        if all(perm[t1[a, b]] == t2[perm[a], perm[b]] for a in range(n) for b in range(n)):
            return True
    return False


def orbit_count(pairs, moves) -> int:
    """Connected components of the graph on `pairs` generated by `moves(pair)`."""
    parent = {q: q for q in pairs}

    def find(q):
        while parent[q] != q:
            parent[q] = parent[parent[q]]
            q = parent[q]
        return q

    for q in pairs:
        for r in moves(q):
            a, b = find(q), find(r)
            if a != b:
                parent[a] = b
    return len({find(q) for q in pairs})


def hs_orbit_count(m, n) -> int:
    """|M x_{H0} N / H| by brute force, reading only the raw action tables."""
    H = m.H
    pairs = [(x, y) for x in range(m.size) for y in range(n.size) if m.sigma[x] == n.tau[y]]

    def moves(q):
        x, y = q
        for h in range(H.n_arrows):
            if H.t[h] == m.sigma[x]:
                yield (m.act_right(x, h), n.act_left(H.inv[h], y))

    return orbit_count(pairs, moves)


def groupoid_components(g) -> list[list[int]]:
    pairs = list(range(g.n_objects))
    parent = {q: q for q in pairs}

    def find(q):
        while parent[q] != q:
            q = parent[q]
        return q

    for x in range(g.n_arrows):
        a, b = find(g.s[x]), find(g.t[x])
        if a != b:
            parent[a] = b
    comps: dict[int, list[int]] = {}
    for q in pairs:
        comps.setdefault(find(q), []).append(q)
    return sorted(comps.values())


def isotropy_table(g, q: int):
    arrows = [x for x in range(g.n_arrows) if g.s[x] == q and g.t[x] == q]
    idx = {x: i for i, x in enumerate(arrows)}
    return [[idx[int(g.comp[x, y])] for y in arrows] for x in arrows]


def groupoids_equivalent(g, h) -> bool:
    """Matching of components by isomorphic isotropy (brute-force group isomorphism)."""
    cg = [isotropy_table(g, c[0]) for c in groupoid_components(g)]
    ch = [isotropy_table(h, c[0]) for c in groupoid_components(h)]
    if len(cg) != len(ch):
        return False
    for perm in itertools.permutations(range(len(ch))):
        if all(group_isomorphic(a, ch[j]) for a, j in zip(cg, perm)):
            return True
    return False


def equivariant_map_count(a, b) -> int:
    """Base-preserving equivariant maps between two left actions, by trying every function."""
    g = a.groupoid
    count = 0
    for f in itertools.product(range(len(b.carrier)), repeat=len(a.carrier)):
        if any(b.base[f[m]] != a.base[m] for m in range(len(a.carrier))):
            continue
        if all(a.table[x, m] < 0 or f[a.table[x, m]] == b.table[x, f[m]]
               for x in range(g.n_arrows) for m in range(len(a.carrier))):
            count += 1
    return count


def group_action_class_count(table, n: int) -> int:
    """Actions of a group on n points up to relabelling: try every permutation per element."""
    table = np.asarray(table)
    order = len(table)
    perms = list(itertools.permutations(range(n)))
    e = next(a for a in range(order) if all(table[a, b] == b for b in range(order)))
    canon = set()
    for choice in itertools.product(perms, repeat=order):
        if choice[e] != tuple(range(n)):
            continue
        # left action: (ab).m = a.(b.m)
        if not all(choice[table[a, b]][m] == choice[a][choice[b][m]]
                   for a in range(order) for b in range(order) for m in range(n)):
            continue
        best = None
        for r in perms:
            rinv = [0] * n
            for i, v in enumerate(r):
                rinv[v] = i
            key = tuple(r[c[rinv[m]]] for c in choice for m in range(n))
            best = key if best is None or key < best else best
        canon.add(best)
    return len(canon)
