"""Enumerate all modules of a given dimension over a small algebra, up to isomorphism.

A representation is fixed by the images of a generating set of the algebra.
Candidate images of each generator are the d x d matrices annihilated by the
generator's minimal polynomial; backtracking then keeps only assignments that
extend consistently along a precomputed spanning set of words.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (Bimodule, FiniteDimAlgebra, enveloping_algebra, scalars,
                      search_bimodule_iso, hom_basis)
from .config import DEFAULT, SearchConfig
from .errors import CapExceeded
from functools import lru_cache

from .linalg import batch_invertible, inverse_array, rref_array, solve_array

# candidate matrices are materialized in chunks of this many
_CHUNK = 1 << 16
# reduce the first generator to conjugacy-class representatives when p^(d*d) is at most this
_CLASS_LIMIT = 1 << 15


def generating_set(alg: FiniteDimAlgebra) -> list[int]:
    """Greedy: basis indices whose addition enlarges the generated subalgebra."""
    gens: list[int] = []
    span = _generated_span(alg, gens)
    for i in range(alg.dim):
        if span.shape[0] == alg.dim:
            break
        trial = _generated_span(alg, gens + [i])
        if trial.shape[0] > span.shape[0]:
            gens.append(i)
            span = trial
    return gens


def _generated_span(alg, gens) -> np.ndarray:
    return _word_plan(alg, gens).basis


@dataclass
class _Plan:
    basis: np.ndarray                    # algebra elements of the spanning words
    words: list[tuple[int, int]]         # (parent word, generator slot); root is (-1, -1)
    checks: list[tuple[int, int, np.ndarray]]  # word * gen == coeffs . words


def _word_plan(alg: FiniteDimAlgebra, gens: list[int]) -> _Plan:
    p = alg.p
    basis = [alg.unit.copy()]
    words = [(-1, -1)]
    checks = []
    queue = [0]
    while queue:
        w = queue.pop(0)
        for slot, g in enumerate(gens):
            v = alg.mul(basis[w], alg.basis(g))
            A = np.array(basis, dtype=np.int64).T
            x = solve_array(A, v, p)
            if x is None:
                basis.append(v)
                words.append((w, slot))
                queue.append(len(basis) - 1)
            else:
                checks.append((w, slot, x.reshape(-1)))
    B = np.array(basis, dtype=np.int64)
    checks = [(w, s, np.concatenate([c, np.zeros(len(basis) - len(c), dtype=np.int64)]))
              for w, s, c in checks]
    return _Plan(B, words, checks)


def minimal_polynomial(alg: FiniteDimAlgebra, u) -> np.ndarray:
    """Monic coefficients c_0..c_k with sum c_i u^i = 0, k minimal."""
    p = alg.p
    powers = [alg.unit.copy()]
    while True:
        nxt = alg.mul(powers[-1], u)
        A = np.array(powers, dtype=np.int64).T
        x = solve_array(A, nxt, p)
        if x is not None:
            return np.concatenate([(-x.reshape(-1)) % p, [1]])
        powers.append(nxt)


def _all_matrices(d: int, p: int):
    total = p ** (d * d)
    weights = p ** np.arange(d * d - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % p
        yield digits.reshape(-1, d, d)


def _poly_kills(stack: np.ndarray, coeffs: np.ndarray, p: int) -> np.ndarray:
    d = stack.shape[1]
    acc = np.zeros_like(stack)
    power = np.broadcast_to(np.eye(d, dtype=np.int64), stack.shape).copy()
    for c in coeffs:
        acc = (acc + c * power) % p
        power = np.matmul(power, stack) % p
    return ~acc.reshape(len(stack), -1).any(axis=1)


@lru_cache(maxsize=None)
def general_linear(d: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """All of GL_d(F_p) and the matching inverses, in code order."""
    mats = np.concatenate(list(_all_matrices(d, p)), axis=0)
    G = mats[batch_invertible(mats, p)]
    Ginv = np.stack([inverse_array(g, p) for g in G]) if len(G) else G
    return G, Ginv


def _codes(stack: np.ndarray, p: int) -> np.ndarray:
    d = stack.shape[-1]
    weights = p ** np.arange(d * d - 1, -1, -1, dtype=np.int64)
    return stack.reshape(len(stack), -1) @ weights


def conjugacy_representatives(cands: np.ndarray, p: int) -> np.ndarray:
    """Least member (in code order) of each GL_d-conjugacy class met by cands."""
    if not len(cands):
        return cands
    d = cands.shape[1]
    G, Ginv = general_linear(d, p)
    order = np.argsort(_codes(cands, p), kind="stable")
    seen: set[int] = set()
    reps = []
    for X, code in zip(cands[order], _codes(cands[order], p)):
        if int(code) in seen:
            continue
        orbit = np.matmul(np.matmul(G, X) % p, Ginv) % p
        seen.update(int(c) for c in _codes(orbit, p))
        reps.append(X)
    return np.stack(reps)


def representations(alg: FiniteDimAlgebra, d: int, config: SearchConfig = DEFAULT,
                    up_to_conjugacy: bool = False):
    """Yield unital representations alg -> M_d(F_p) as (dim, d, d) stacks.

    With ``up_to_conjugacy`` the first generator only takes one image per
    conjugacy class, which still meets every isomorphism class of modules.
    """
    p = alg.p
    if d == 0:
        yield np.zeros((alg.dim, 0, 0), dtype=np.int64)
        return
    gens = generating_set(alg)
    plans = [_word_plan(alg, gens[:k + 1]) for k in range(len(gens))]
    full = _word_plan(alg, gens)
    # coordinates of each basis element in terms of the spanning words
    to_words = solve_array(full.basis.T, np.eye(alg.dim, dtype=np.int64), p)
    candidates = []
    for g in gens:
        poly = minimal_polynomial(alg, alg.basis(g))
        kept = [chunk[_poly_kills(chunk, poly, p)] for chunk in _all_matrices(d, p)]
        candidates.append(np.concatenate(kept, axis=0))
    if up_to_conjugacy and candidates and p ** (d * d) <= _CLASS_LIMIT:
        candidates[0] = conjugacy_representatives(candidates[0], p)

    def word_mats(plan, images, batch):
        # images: list of (N, d, d) arrays (broadcast fixed ones)
        N = batch
        W = [np.broadcast_to(np.eye(d, dtype=np.int64), (N, d, d))]
        for parent, slot in plan.words[1:]:
            W.append(np.matmul(W[parent], images[slot]) % p)
        return W

    def consistent(plan, images, batch) -> np.ndarray:
        W = word_mats(plan, images, batch)
        ok = np.ones(batch, dtype=bool)
        stackW = np.stack(W, axis=1)  # (N, words, d, d)
        for w, slot, coeffs in plan.checks:
            lhs = np.matmul(W[w], images[slot]) % p
            rhs = np.tensordot(stackW, coeffs, axes=([1], [0])) % p
            ok &= ~(lhs != rhs).reshape(batch, -1).any(axis=1)
            if not ok.any():
                break
        return ok

    def finish(chosen):
        images = [x[None] for x in chosen]
        W = np.stack(word_mats(full, images, 1), axis=1)[0]
        return np.tensordot(to_words.T, W, axes=([1], [0])) % p

    def backtrack(level, chosen):
        if level == len(gens):
            yield finish(chosen)
            return
        cands = candidates[level]
        for start in range(0, len(cands), _CHUNK):
            block = cands[start:start + _CHUNK]
            images = [np.broadcast_to(x, (len(block), d, d)) for x in chosen] + [block]
            ok = consistent(plans[level], images, len(block))
            for x in block[ok]:
                yield from backtrack(level + 1, chosen + [x])

    yield from backtrack(0, [])


def _signature(m: Bimodule) -> tuple:
    p = m.p
    ranks = tuple(len(rref_array(a, p)[1]) for a in m.L)
    return (m.dim, ranks, hom_basis(m, m).shape[0])


def dedupe(modules, config: SearchConfig = DEFAULT) -> list[Bimodule]:
    reps: list[tuple[tuple, Bimodule]] = []
    for m in modules:
        sig = _signature(m)
        if any(s == sig and search_bimodule_iso(r, m, config).found for s, r in reps):
            continue
        reps.append((sig, m))
    return [r for _, r in reps]


def _check_caps(alg: FiniteDimAlgebra, d: int, config: SearchConfig):
    if alg.dim > config.algebra_dim_cap:
        raise CapExceeded(f"algebra dimension {alg.dim} exceeds cap {config.algebra_dim_cap}")
    if d > config.module_dim_cap:
        raise CapExceeded(f"module dimension {d} exceeds cap {config.module_dim_cap}")


def enumerate_modules(alg: FiniteDimAlgebra, d: int,
                      config: SearchConfig = DEFAULT) -> list[Bimodule]:
    """Left alg-modules of dimension d up to isomorphism, as (alg, F_p)-bimodules."""
    _check_caps(alg, d, config)
    k = scalars(alg.p)
    eye = np.eye(d, dtype=np.int64)[None]
    mods = (Bimodule(alg, k, d, rep, eye, check=False)
            for rep in representations(alg, d, config, up_to_conjugacy=True))
    return dedupe(mods, config)


def module_corpus(alg: FiniteDimAlgebra, max_dim: int,
                  config: SearchConfig = DEFAULT) -> list[Bimodule]:
    out = []
    for d in range(max_dim + 1):
        out.extend(enumerate_modules(alg, d, config))
    return out


def enumerate_bimodules(r: FiniteDimAlgebra, s: FiniteDimAlgebra, d: int,
                        config: SearchConfig = DEFAULT) -> list[Bimodule]:
    """All (r, s)-bimodules of dimension d up to isomorphism (as modules over r (x) s^op)."""
    env = enveloping_algebra(r, s)
    _check_caps(env, d, config)
    out = []
    for rep in representations(env, d, config, up_to_conjugacy=True):
        X = rep.reshape(r.dim, s.dim, d, d)
        left = np.tensordot(s.unit, X, axes=([0], [1])) % r.p
        right = np.tensordot(r.unit, X, axes=([0], [0])) % r.p
        out.append(Bimodule(r, s, d, left, right))
    return dedupe(out, config)
