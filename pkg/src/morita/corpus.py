"""Bundled instance corpora for the three calculi.

Everything here is built deterministically from constructors; the exported
JSON fixtures under ``corpus/`` are generated from these functions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (Bimodule, FiniteDimAlgebra, direct_sum, matrix_algebra, scalars,
                      split_semisimple, truncated_polynomials, unit_bimodule, upper_triangular, zero_bimodule)
from .groupoid import (Bibundle, FiniteGroupoid, GroupoidFunctor, check_left_principal,
                       discrete_groupoid, disjoint_union, functor_to_bibundle, group_groupoid,
                       opposite_bibundle, pair_groupoid, point_groupoid, unit_bibundle)
from .groupoid_morita import morita_decide
from .groups import cyclic_group, direct_product
from .modules import enumerate_bimodules
from .multimatrix import MultimatrixAlgebra, MultiplicityBimodule


# -- rings ------------------------------------------------------------------------------

def named(alg: FiniteDimAlgebra, name: str) -> FiniteDimAlgebra:
    return FiniteDimAlgebra(alg.p, alg.structure_constants, alg.unit, name=name)


def ring_algebras(p: int) -> dict[str, FiniteDimAlgebra]:
    """Small algebras over F_p, each of dimension at most 4."""
    return {
        f"F{p}": named(scalars(p), f"F{p}"),
        f"F{p}xF{p}": named(split_semisimple(2, p), f"F{p}xF{p}"),
        f"F{p}[x]/x2": named(truncated_polynomials(2, p), f"F{p}[x]/x2"),
        f"T2(F{p})": named(upper_triangular(2, p), f"T2(F{p})"),
        f"M2(F{p})": named(matrix_algebra(2, p), f"M2(F{p})"),
    }


def column_module(n: int, p: int) -> Bimodule:
    """F_p^n with M_n(F_p) acting on the left and F_p on the right."""
    mn, k = named(matrix_algebra(n, p), f"M{n}(F{p})"), named(scalars(p), f"F{p}")
    L = np.zeros((n * n, n, n), dtype=np.int64)
    for i, j in itertools.product(range(n), repeat=2):
        L[i * n + j, i, j] = 1
    return Bimodule(mn, k, n, L, np.eye(n, dtype=np.int64)[None], name=f"col{n}(F{p})")


def row_module(n: int, p: int) -> Bimodule:
    """F_p^n as row vectors: F_p on the left, M_n(F_p) on the right."""
    mn, k = named(matrix_algebra(n, p), f"M{n}(F{p})"), named(scalars(p), f"F{p}")
    R = np.zeros((n * n, n, n), dtype=np.int64)
    for i, j in itertools.product(range(n), repeat=2):
        # coordinates are row entries; v . e_ij puts v_i in slot j
        R[i * n + j, j, i] = 1
    return Bimodule(k, mn, n, np.eye(n, dtype=np.int64)[None], R, name=f"row{n}(F{p})")


def _as_module(m: Bimodule, name: str) -> Bimodule:
    return Bimodule(m.left_algebra, m.right_algebra, m.dim, m.L, m.R, name=name)


def _regular_over_scalars(alg: FiniteDimAlgebra, name: str) -> Bimodule:
    """alg as an (alg, F_p)-bimodule by left multiplication."""
    k = named(scalars(alg.p), f"F{alg.p}")
    return Bimodule(alg, k, alg.dim, alg.left_mult_stack, np.eye(alg.dim, dtype=np.int64)[None],
                    name=name)


def _swap_bimodule(p: int) -> Bimodule:
    """F_p x F_p twisted on the right by the coordinate swap: an invertible bimodule."""
    a = named(split_semisimple(2, p), f"F{p}xF{p}")
    u = unit_bimodule(a)
    R = np.stack([u.R[1], u.R[0]])
    return Bimodule(a, a, 2, u.L, R, name=f"swap(F{p}xF{p})")


def _point_module(p: int) -> Bimodule:
    """F_p over (F_p[x]/x^2, F_p) with x acting by zero."""
    a = named(truncated_polynomials(2, p), f"F{p}[x]/x2")
    k = named(scalars(p), f"F{p}")
    L = np.array([1, 0], dtype=np.int64).reshape(2, 1, 1)  # 1 -> 1, x -> 0
    return Bimodule(a, k, 1, L, [[[1]]], name=f"simple(F{p}[x]/x2)")


def _projection_module(p: int, slot: int) -> Bimodule:
    a = named(split_semisimple(2, p), f"F{p}xF{p}")
    k = named(scalars(p), f"F{p}")
    L = np.zeros((2, 1, 1), dtype=np.int64)
    L[slot, 0, 0] = 1
    return Bimodule(a, k, 1, L, [[[1]]], name=f"e{slot + 1}(F{p}xF{p})")


@dataclass
class RingCase:
    bimodule: Bimodule
    expected: bool        # is it an equivalence bimodule?


def ring_bimodule_corpus() -> list[RingCase]:
    """Bimodules for certification: equivalences and refutable non-equivalences."""
    cases: list[RingCase] = []
    for p in (2, 3):
        algs = ring_algebras(p)
        for n in (2, 3):
            cases.append(RingCase(column_module(n, p), True))
            cases.append(RingCase(row_module(n, p), True))
        for name in (f"F{p}", f"F{p}xF{p}", f"F{p}[x]/x2", f"T2(F{p})", f"M2(F{p})"):
            cases.append(RingCase(_as_module(unit_bimodule(algs[name]), f"1_{name}"), True))
        cases.append(RingCase(_swap_bimodule(p), True))
        col = column_module(2, p)
        cases.append(RingCase(_as_module(direct_sum(col, col), f"col2+col2(F{p})"), False))
        one = _as_module(unit_bimodule(algs[f"F{p}"]), "")
        cases.append(RingCase(_as_module(direct_sum(one, one), f"F{p}^2 over F{p}"), False))
        cases.append(RingCase(_point_module(p), False))
        cases.append(RingCase(_regular_over_scalars(algs[f"F{p}[x]/x2"],
                                                    f"F{p}[x]/x2 over F{p}"), False))
        cases.append(RingCase(_regular_over_scalars(algs[f"T2(F{p})"], f"T2(F{p}) over F{p}"),
                              False))
        cases.append(RingCase(_projection_module(p, 0), False))
        cases.append(RingCase(_projection_module(p, 1), False))
        cases.append(RingCase(_as_module(zero_bimodule(algs[f"F{p}"], algs[f"F{p}"]),
                                         f"0 over F{p}"), False))
    return cases


def refutation_pair(p: int = 2) -> tuple[FiniteDimAlgebra, FiniteDimAlgebra]:
    return (named(split_semisimple(2, p), f"F{p}xF{p}"), named(scalars(p), f"F{p}"))


def ring_coherence_pool(p: int) -> list[Bimodule]:
    """1-cells among F_p, F_p x F_p, F_p[x]/x^2 and M_2(F_p) for coherence checks."""
    algs = ring_algebras(p)
    pool = [_as_module(unit_bimodule(algs[n]), f"1_{n}")
            for n in (f"F{p}", f"F{p}xF{p}", f"F{p}[x]/x2", f"M2(F{p})")]
    pool += [column_module(2, p), row_module(2, p), _point_module(p), _projection_module(p, 0),
             _swap_bimodule(p)]
    r, s = refutation_pair(p)
    pool += [_as_module(b, f"FxF-F[{i}]") for i, b in enumerate(enumerate_bimodules(r, s, 2))
             if b.dim == 2]
    pool += [_as_module(b, f"F-FxF[{i}]") for i, b in enumerate(enumerate_bimodules(s, r, 1))]
    return pool


def composable_tuples(cells, length: int, same, max_total_dim: int | None = None,
                      size=lambda c: c.dim):
    """Composable sequences drawn from cells in a fixed order."""
    out = []
    for combo in itertools.product(range(len(cells)), repeat=length):
        seq = [cells[i] for i in combo]
        if all(same(a, b) for a, b in zip(seq, seq[1:])):
            if max_total_dim is not None and np.prod([size(c) for c in seq]) > max_total_dim:
                continue
            out.append(seq)
    return out


# -- multimatrix ------------------------------------------------------------------------

BLOCK_SIZES = (1, 2, 3)


def multimatrix_algebra(k: int) -> MultimatrixAlgebra:
    return MultimatrixAlgebra(BLOCK_SIZES[:k])


def multiplicity_sweep_arrays(max_blocks: int = 3, max_entry: int = 2):
    """Per shape (r, c): the algebras and a stack of every nondegenerate E, entries <= max_entry."""
    for r in range(1, max_blocks + 1):
        for c in range(1, max_blocks + 1):
            grids = np.array(list(itertools.product(range(max_entry + 1), repeat=r * c)),
                             dtype=np.int64).reshape(-1, r, c)
            yield (multimatrix_algebra(r), multimatrix_algebra(c),
                   grids[grids.any(axis=2).all(axis=1)])


def multiplicity_sweep(max_blocks: int = 3, max_entry: int = 2):
    """Every nondegenerate E with shape at most max_blocks x max_blocks, entries <= max_entry."""
    for a, b, stack in multiplicity_sweep_arrays(max_blocks, max_entry):
        for E in stack:
            yield MultiplicityBimodule(a, b, E)


def multimatrix_corpus() -> list[MultiplicityBimodule]:
    """A compact set of correspondences between 1-, 2- and 3-block algebras."""
    A = [multimatrix_algebra(k) for k in (1, 2, 3)]
    mats = {
        (0, 0): [[[1]], [[2]]],
        (0, 1): [[[1, 1]], [[1, 2]]],
        (1, 0): [[[1], [1]], [[2], [1]]],
        (1, 1): [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 2]]],
        (1, 2): [[[1, 0, 1], [0, 1, 0]]],
        (2, 1): [[[1, 0], [0, 1], [1, 1]]],
        (2, 2): [[[0, 1, 0], [0, 0, 1], [1, 0, 0]], [[1, 0, 0], [0, 2, 0], [0, 0, 1]]],
    }
    return [MultiplicityBimodule(A[i], A[j], E) for (i, j), es in mats.items() for E in es]


# -- groupoids -----------------------------------------------------------------------------

def groupoid_corpus() -> list[FiniteGroupoid]:
    """Eight groupoids with at most six arrows each."""
    z2, z3, z4 = (group_groupoid(cyclic_group(n), f"Z{n}") for n in (2, 3, 4))
    k4 = group_groupoid(direct_product(cyclic_group(2), cyclic_group(2)), "Z2xZ2")
    p2 = pair_groupoid(2)
    d2 = discrete_groupoid(2)
    p2pt = disjoint_union(p2, point_groupoid(), name="P2+pt")
    return [point_groupoid(), z2, z3, z4, k4, p2, d2, p2pt]


def extra_groupoids() -> list[FiniteGroupoid]:
    z2 = group_groupoid(cyclic_group(2), "Z2")
    return [disjoint_union(z2, point_groupoid(), name="Z2+pt"),
            group_groupoid(cyclic_group(6), "Z6"),
            pair_groupoid(3), pair_groupoid(4)]


def _functor(g, h, objs, arrows) -> GroupoidFunctor:
    return GroupoidFunctor(g, h, objs, arrows)


def bibundle_pool(max_carrier: int = 12) -> list[Bibundle]:
    """Bibundles for coherence checks: units, certificates, and (opposites of) functor bundles."""
    pt = point_groupoid()
    z2 = group_groupoid(cyclic_group(2), "Z2")
    z4 = group_groupoid(cyclic_group(4), "Z4")
    p2, p3 = pair_groupoid(2), pair_groupoid(3)
    pool: list[Bibundle] = [unit_bibundle(g) for g in (pt, z2, z4, p2, p3)]
    for g in (p2, p3):
        cert = morita_decide(g, pt).certificate
        pool += [cert, opposite_bibundle(cert)]
    functors = [
        _functor(z4, z2, [0], [0, 1, 0, 1]),            # reduction mod 2
        _functor(z2, z4, [0], [0, 2]),                  # inclusion
        _functor(z2, pt, [0], [0, 0]),
        _functor(pt, z2, [0], [0]),
        _functor(pt, p2, [0], [0]),                     # the object 0
        _functor(p2, pt, [0, 0], [0, 0, 0, 0]),
    ]
    for f in functors:
        b = functor_to_bibundle(f)
        pool += [b, opposite_bibundle(b)]
    return [b for b in pool if b.size <= max_carrier]


def left_principal(b: Bibundle) -> bool:
    return check_left_principal(b).holds
