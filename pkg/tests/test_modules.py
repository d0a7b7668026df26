from __future__ import annotations

import itertools

import numpy as np
import pytest

from morita.algebra import Bimodule, matrix_algebra, scalars, search_bimodule_iso
from morita.config import SearchConfig
from morita.corpus import refutation_pair, ring_algebras
from morita.errors import CapExceeded
from morita.modules import (conjugacy_representatives, dedupe, enumerate_bimodules,
                            enumerate_modules, general_linear, representations)

import oracles

# Isomorphism-class counts of d-dimensional left modules, d = 0, 1, 2, ...
# Derived once with oracles.module_class_count (all matrix tuples, GL_d orbits) and frozen.
MODULE_COUNTS = {
    (2, "F2"): [1, 1, 1, 1],
    (2, "F2xF2"): [1, 2, 3, 4],
    (2, "F2[x]/x2"): [1, 1, 2, 2],
    (2, "T2(F2)"): [1, 2, 4],
    (2, "M2(F2)"): [1, 0, 1],
    (3, "F3"): [1, 1, 1],
    (3, "F3xF3"): [1, 2, 3],
    (3, "F3[x]/x2"): [1, 1, 2],
    (3, "T2(F3)"): [1, 2, 4],
}


@pytest.mark.parametrize("key", sorted(MODULE_COUNTS))
def test_module_counts_frozen(key):
    p, name = key
    alg = ring_algebras(p)[name]
    assert [len(enumerate_modules(alg, d)) for d in range(len(MODULE_COUNTS[key]))] \
        == MODULE_COUNTS[key]


@pytest.mark.parametrize("key", [(2, "F2xF2"), (2, "T2(F2)"), (3, "F3[x]/x2")])
def test_oracle_reproduces_frozen_counts(key):
    p, name = key
    alg = ring_algebras(p)[name]
    counts = [oracles.module_class_count(alg.structure_constants, alg.unit, d, p)
              for d in range(len(MODULE_COUNTS[key]))]
    assert counts == MODULE_COUNTS[key]


def test_enumerated_modules_are_pairwise_non_isomorphic_by_brute_force():
    alg = ring_algebras(2)["T2(F2)"]
    mods = enumerate_modules(alg, 2)
    for a, b in itertools.combinations(mods, 2):
        assert not oracles.modules_isomorphic(a.L, b.L, 2)


def test_representations_match_brute_force_count():
    for name in ("F2xF2", "F2[x]/x2", "M2(F2)"):
        alg = ring_algebras(2)[name]
        ours = {r.tobytes() for r in representations(alg, 2)}
        brute = {r.tobytes() for r in oracles.representations(alg.structure_constants,
                                                                alg.unit, 2, 2)}
        assert ours == brute


def test_conjugacy_reduction_loses_no_class():
    alg = ring_algebras(2)["T2(F2)"]
    for d in (1, 2, 3):
        cfg = SearchConfig(module_dim_cap=3)
        full = enumerate_modules(alg, d, cfg)
        k = scalars(2)
        eye = np.eye(d, dtype=np.int64)[None]
        every = dedupe((Bimodule(alg, k, d, r, eye) for r in representations(alg, d, cfg)), cfg)
        assert len(full) == len(every)


def test_conjugacy_representatives_are_one_per_class():
    G, Ginv = general_linear(2, 2)
    assert len(G) == 6 == len(oracles.general_linear(2, 2))
    stack = np.array(list(oracles.matrices(2, 2)))
    reps = conjugacy_representatives(stack, 2)
    # F_2 2x2 matrices fall into 6 conjugacy classes
    assert len(reps) == 6
    for a, b in itertools.combinations(reps, 2):
        assert not any(np.array_equal(g @ a % 2, b @ g % 2) for g in G)


def test_bimodules_between_f2xf2_and_f2():
    r, s = refutation_pair(2)
    assert [len(enumerate_bimodules(r, s, d)) for d in range(3)] == [1, 2, 3]


def test_caps_enforced():
    with pytest.raises(CapExceeded):
        enumerate_modules(matrix_algebra(3, 2), 1)
    with pytest.raises(CapExceeded):
        enumerate_modules(ring_algebras(2)["F2"], 4)


def test_dedupe_keeps_first_of_each_class():
    alg = ring_algebras(3)["F3xF3"]
    mods = enumerate_modules(alg, 2)
    doubled = dedupe(mods + mods)
    assert len(doubled) == len(mods)
    assert all(search_bimodule_iso(a, b).found for a, b in zip(doubled, mods))
