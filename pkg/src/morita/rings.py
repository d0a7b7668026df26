"""Morita certification for algebra bimodules.

A bimodule M in (R, S) is certified invertible when it is finitely generated
projective on both sides, the left action identifies R with End_{S^op}(M),
and the candidate inverse Hom_{S^op}(M, S) composes with M to the unit
bimodules on both sides (explicit isomorphisms are returned).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import bicat
from .algebra import (Bimodule, FiniteDimAlgebra, RingCalculus, opposite_algebra,
                      search_bimodule_iso, tensor_over, unit_bimodule, hom_basis)
from .config import DEFAULT, SearchConfig
from .errors import NotCertified
from .linalg import inverse_array, kernel_array, solve_array
from .modules import enumerate_bimodules, module_corpus


def _right_linear_maps(dim_m: int, actions: np.ndarray, alg: FiniteDimAlgebra) -> np.ndarray:
    """Basis (h, dim A, dim M) of maps phi: M -> A with phi(x.b) = phi(x) b."""
    p = alg.p
    if dim_m == 0:
        return np.zeros((0, alg.dim, 0), dtype=np.int64)
    Ia, Im = np.eye(alg.dim, dtype=np.int64), np.eye(dim_m, dtype=np.int64)
    rho = alg.right_mult_stack
    rows = [np.kron(Ia, actions[b].T) - np.kron(rho[b], Im) for b in range(alg.dim)]
    K = kernel_array(np.concatenate(rows, axis=0) % p, p)
    return K.T.reshape(-1, alg.dim, dim_m)


def _side_data(m: Bimodule, side: str) -> tuple[FiniteDimAlgebra, np.ndarray]:
    """M as a right module: over S itself, or over R^op for the left structure."""
    if side == "right":
        return m.right_algebra, m.R
    if side == "left":
        return opposite_algebra(m.left_algebra), m.L
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


# -- endomorphism ring ------------------------------------------------------------

@dataclass
class EndRing:
    algebra: FiniteDimAlgebra
    basis: np.ndarray          # (dim End, dim M, dim M)
    canonical: np.ndarray      # (dim End, dim R): coordinates of L(e_a)

    def canonical_rank(self) -> int:
        from .linalg import rref_array
        return len(rref_array(self.canonical, self.algebra.p)[1]) if self.canonical.size else 0


def end_ring(m: Bimodule) -> EndRing:
    """End_{S^op}(M) with structure constants on the kernel basis, plus R -> End."""
    p, d = m.p, m.dim
    r = m.left_algebra
    if d == 0:
        zero = FiniteDimAlgebra(p, np.zeros((0, 0, 0)), np.zeros(0))
        return EndRing(zero, np.zeros((0, 0, 0), dtype=np.int64),
                       np.zeros((0, r.dim), dtype=np.int64))
    Id = np.eye(d, dtype=np.int64)
    rows = [np.kron(Id, m.R[b].T) - np.kron(m.R[b], Id) for b in range(m.right_algebra.dim)]
    K = kernel_array(np.concatenate(rows, axis=0) % p, p)
    n = K.shape[1]
    basis = K.T.reshape(n, d, d)
    c = np.zeros((n, n, n), dtype=np.int64)
    prods = np.einsum("ixy,jyz->ijxz", basis, basis) % p
    coords = solve_array(K, prods.reshape(n * n, d * d).T, p)
    c = coords.T.reshape(n, n, n)
    unit = solve_array(K, Id.reshape(-1), p).reshape(-1)
    canonical = solve_array(K, m.L.reshape(r.dim, d * d).T, p)
    alg = FiniteDimAlgebra(p, c, unit, name=f"End({m.name})" if m.name else "")
    return EndRing(alg, basis, canonical)


@dataclass
class EndIsoCertificate:
    map: np.ndarray
    inverse_map: np.ndarray

    def to_dict(self) -> dict:
        return {"map": self.map.tolist(), "inverse_map": self.inverse_map.tolist()}


def end_iso_certificate(m: Bimodule, end: EndRing | None = None) -> EndIsoCertificate | None:
    end = end or end_ring(m)
    r, p = m.left_algebra, m.p
    phi = end.canonical
    if phi.shape[0] != r.dim:
        return None
    inv = inverse_array(phi, p)
    if inv is None:
        return None
    # canonical map is a unital homomorphism; checked rather than assumed
    E = end.algebra
    assert np.array_equal(phi @ r.unit % p, E.unit)
    for i, j in itertools.product(range(r.dim), repeat=2):
        lhs = phi @ r.mul(r.basis(i), r.basis(j)) % p
        assert np.array_equal(lhs, E.mul(phi[:, i], phi[:, j]))
    return EndIsoCertificate(phi, inv)


# -- projectivity ----------------------------------------------------------------------

@dataclass
class ProjectivityCertificate:
    side: str
    dual_basis: list[tuple[np.ndarray, np.ndarray]]   # (x_i, phi_i)

    @property
    def generator_count(self) -> int:
        return len(self.dual_basis)

    def to_dict(self) -> dict:
        return {"side": self.side, "generator_count": self.generator_count,
                "dual_basis": [{"x": x.tolist(), "phi": phi.tolist()}
                               for x, phi in self.dual_basis]}


@dataclass
class ProjectivityRefutation:
    side: str
    reason: str
    proven: bool = True

    def to_dict(self) -> dict:
        return {"side": self.side, "reason": self.reason, "proven": self.proven}


def _eval_columns(actions, alg_dim, xs, H):
    """Columns vec(X_x phi) for x in xs, phi in H; X_x has columns Rt(e_c) x."""
    cols = []
    for x in xs:
        X = np.stack([actions[c] @ x for c in range(alg_dim)], axis=1)
        for phi in H:
            cols.append((X @ phi).reshape(-1))
    return np.array(cols, dtype=np.int64).T


def _dual_basis_for(actions, alg, xs, H, d):
    p = alg.p
    if not len(H) or not len(xs):
        return None
    A = _eval_columns(actions, alg.dim, xs, H) % p
    sol = solve_array(A, np.eye(d, dtype=np.int64).reshape(-1), p)
    if sol is None:
        return None
    coeffs = sol.reshape(len(xs), len(H))
    pairs = []
    for x, c in zip(xs, coeffs):
        phi = np.tensordot(c, H, 1) % p
        pairs.append((np.asarray(x) % p, phi))
    return pairs


def _verify_dual_basis(actions, alg, pairs, d) -> bool:
    p = alg.p
    total = np.zeros((d, d), dtype=np.int64)
    for x, phi in pairs:
        X = np.stack([actions[c] @ x for c in range(alg.dim)], axis=1)
        total = (total + X @ phi) % p
    return np.array_equal(total, np.eye(d, dtype=np.int64))


def check_fgp(m: Bimodule, side: str, config: SearchConfig = DEFAULT):
    """Dual basis certificate with few generators, or a proven refutation.

    M is projective over A iff the identity lies in the image of
    M (x) Hom_A(M, A) -> End(M); that linear test decides.  Generator sets of
    increasing size are then tried to shrink the certificate.
    """
    alg, actions = _side_data(m, side)
    d, p = m.dim, m.p
    if d == 0:
        return ProjectivityCertificate(side, [])
    H = _right_linear_maps(d, actions, alg)
    eye = np.eye(d, dtype=np.int64)
    full = _dual_basis_for(actions, alg, list(eye), H, d)
    if full is None:
        return ProjectivityRefutation(
            side, "identity not in the image of the evaluation map M (x) Hom(M, A) -> End(M)")
    lower = -(-d // alg.dim)
    for k in range(lower, d):
        for xs in _generator_candidates(d, k, p, config):
            pairs = _dual_basis_for(actions, alg, xs, H, d)
            if pairs is not None:
                assert _verify_dual_basis(actions, alg, pairs, d)
                return ProjectivityCertificate(side, pairs)
    assert _verify_dual_basis(actions, alg, full, d)
    return ProjectivityCertificate(side, full)


def _generator_candidates(d: int, k: int, p: int, config: SearchConfig):
    eye = np.eye(d, dtype=np.int64)
    if p ** (k * d) <= config.exhaustive_limit:
        vectors = [np.array(v, dtype=np.int64) for v in itertools.product(range(p), repeat=d)]
        for combo in itertools.combinations(vectors[1:], k):
            yield list(combo)
        return
    for combo in itertools.islice(itertools.combinations(range(d), k), 64):
        yield [eye[i] for i in combo]
    rng = config.rng(salt=1000 + k)
    for _ in range(config.random_trials):
        yield list(rng.integers(0, p, size=(k, d)))


# -- inverse and certification ------------------------------------------------------------

def inverse_candidate(m: Bimodule) -> Bimodule:
    """Hom_{S^op}(M, S) as an (S, R)-bimodule: (s.phi)(x) = s phi(x), (phi.r)(x) = phi(r x)."""
    r, s, p = m.left_algebra, m.right_algebra, m.p
    H = _right_linear_maps(m.dim, m.R, s)
    h = H.shape[0]
    if h == 0:
        return Bimodule(s, r, 0, np.zeros((s.dim, 0, 0)), np.zeros((r.dim, 0, 0)))
    flat = H.reshape(h, -1).T
    left = np.zeros((s.dim, h, h), dtype=np.int64)
    for a in range(s.dim):
        imgs = np.einsum("xy,hyz->hxz", s.left_mult_stack[a], H) % p
        left[a] = solve_array(flat, imgs.reshape(h, -1).T, p)
    right = np.zeros((r.dim, h, h), dtype=np.int64)
    for b in range(r.dim):
        imgs = np.einsum("hxy,yz->hxz", H, m.L[b]) % p
        right[b] = solve_array(flat, imgs.reshape(h, -1).T, p)
    name = f"{m.name}^-1" if m.name else ""
    return Bimodule(s, r, h, left, right, name=name)


STAGES = ("fgp-left", "fgp-right", "end-iso", "inverse", "round-trip-R", "round-trip-S")


@dataclass
class Stage:
    name: str
    outcome: str                 # pass | fail | skipped
    witness: object = None
    proven: bool = True

    def to_dict(self) -> dict:
        out = {"name": self.name, "outcome": self.outcome}
        if self.outcome == "fail":
            out["refutation"] = "proven" if self.proven else "high-confidence"
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class MoritaCertificate:
    bimodule: Bimodule
    stages: list[Stage]
    fgp_left: object = None
    fgp_right: object = None
    end_iso: EndIsoCertificate | None = None
    inverse: Bimodule | None = None
    iso_R: object = None        # M (x)_S M^-1 -> R
    iso_S: object = None        # M^-1 (x)_R M -> S

    @property
    def certified(self) -> bool:
        return all(s.outcome == "pass" for s in self.stages)

    @property
    def failed_stage(self) -> Stage | None:
        return next((s for s in self.stages if s.outcome == "fail"), None)

    def to_dict(self) -> dict:
        out = {"certified": self.certified, "stages": [s.to_dict() for s in self.stages]}
        if self.certified:
            out["round_trip_R"] = self.iso_R.array.tolist()
            out["round_trip_S"] = self.iso_S.array.tolist()
            out["end_iso"] = self.end_iso.to_dict()
            out["fgp_left"] = self.fgp_left.to_dict()
            out["fgp_right"] = self.fgp_right.to_dict()
        return out


def certify_equivalence(m: Bimodule, config: SearchConfig = DEFAULT) -> MoritaCertificate:
    cert = MoritaCertificate(m, [])
    stages = cert.stages

    def fail(name, witness, proven=True):
        stages.append(Stage(name, "fail", witness, proven))
        for rest in STAGES[len(stages):]:
            stages.append(Stage(rest, "skipped"))
        return cert

    for side in ("left", "right"):
        res = check_fgp(m, side, config)
        if isinstance(res, ProjectivityRefutation):
            return fail(f"fgp-{side}", res.reason)
        setattr(cert, f"fgp_{side}", res)
        stages.append(Stage(f"fgp-{side}", "pass", {"generators": res.generator_count}))
    end = end_ring(m)
    iso = end_iso_certificate(m, end)
    if iso is None:
        return fail("end-iso", {"dim_R": m.left_algebra.dim, "dim_End": end.algebra.dim,
                                "rank_canonical": end.canonical_rank()})
    cert.end_iso = iso
    stages.append(Stage("end-iso", "pass", {"dim": end.algebra.dim}))
    inv = inverse_candidate(m)
    cert.inverse = inv
    stages.append(Stage("inverse", "pass", {"dim": inv.dim}))
    r_side = search_bimodule_iso(tensor_over(m, inv).bimodule, unit_bimodule(m.left_algebra),
                                 config)
    if not r_side.found:
        return fail("round-trip-R", {"method": r_side.method}, r_side.proven)
    cert.iso_R = r_side.cell
    stages.append(Stage("round-trip-R", "pass", {"method": r_side.method}))
    s_side = search_bimodule_iso(tensor_over(inv, m).bimodule, unit_bimodule(m.right_algebra),
                                 config)
    if not s_side.found:
        return fail("round-trip-S", {"method": s_side.method}, s_side.proven)
    cert.iso_S = s_side.cell
    stages.append(Stage("round-trip-S", "pass", {"method": s_side.method}))
    return cert


def verify_via_bicategory(m: Bimodule, config: SearchConfig = DEFAULT) -> bicat.ObjectIsoResult:
    """The generic route: is (M, Hom_{S^op}(M, S)) a pair of mutually inverse arrows?"""
    return bicat.verify_object_isomorphism(RingCalculus(config), m, inverse_candidate(m))


# -- search without a candidate -------------------------------------------------------------

@dataclass
class EquivalenceSearch:
    status: str                     # equivalent | unknown
    cap: int
    witness: Bimodule | None = None
    certificate: MoritaCertificate | None = None
    examined: int = 0
    all_refutations_proven: bool = True

    def to_dict(self) -> dict:
        out = {"status": self.status, "cap": self.cap, "examined": self.examined}
        if self.witness is not None:
            out["witness_dim"] = self.witness.dim
        else:
            out["absent_within_cap"] = ("proven" if self.all_refutations_proven
                                        else "high-confidence")
        return out


def search_equivalence(r: FiniteDimAlgebra, s: FiniteDimAlgebra, dim_cap: int,
                       config: SearchConfig = DEFAULT) -> EquivalenceSearch:
    """Try every (R, S)-bimodule up to dim_cap; beyond the cap nothing is decided."""
    examined = 0
    proven = True
    for d in range(dim_cap + 1):
        for cand in enumerate_bimodules(r, s, d, config):
            examined += 1
            cert = certify_equivalence(cand, config)
            if cert.certified:
                return EquivalenceSearch("equivalent", dim_cap, cand, cert, examined, True)
            proven &= cert.failed_stage.proven
    return EquivalenceSearch("unknown", dim_cap, examined=examined,
                             all_refutations_proven=proven)


# -- induced functor on representation categories ---------------------------------------------

@dataclass
class FunctorReport:
    cap: int
    image_dims: list[tuple[int, int]] = field(default_factory=list)
    hom_dims: list[tuple[int, int, int, int]] = field(default_factory=list)
    hom_preserved: bool = True
    injective: bool = True
    round_trips: list[bool] = field(default_factory=list)
    round_trip_proven: bool = True

    @property
    def passed(self) -> bool:
        return self.hom_preserved and self.injective and all(self.round_trips)

    def to_dict(self) -> dict:
        return {"cap": self.cap, "passed": self.passed,
                "image_dims": [list(t) for t in self.image_dims],
                "hom_dims": [list(t) for t in self.hom_dims],
                "hom_preserved": self.hom_preserved, "injective": self.injective,
                "round_trips": self.round_trips}


def induced_functor_report(m: Bimodule, corpus_dim_cap: int,
                           config: SearchConfig = DEFAULT,
                           certificate: MoritaCertificate | None = None) -> FunctorReport:
    """Apply L -> M (x)_S L to every S-module up to the cap and check it behaves as an equivalence."""
    cert = certificate or certify_equivalence(m, config)
    if not cert.certified:
        raise NotCertified("induced functor report needs a certified equivalence bimodule")
    inv = cert.inverse
    corpus = module_corpus(m.right_algebra, corpus_dim_cap,
                           config.with_(module_dim_cap=max(config.module_dim_cap,
                                                           corpus_dim_cap)))
    images = [tensor_over(m, L).bimodule for L in corpus]
    rep = FunctorReport(corpus_dim_cap)
    rep.image_dims = [(L.dim, ML.dim) for L, ML in zip(corpus, images)]
    for (i, L), (j, L2) in itertools.product(enumerate(corpus), repeat=2):
        a = hom_basis(L, L2).shape[0]
        b = hom_basis(images[i], images[j]).shape[0]
        rep.hom_dims.append((i, j, a, b))
        if a != b:
            rep.hom_preserved = False
        if i < j and search_bimodule_iso(images[i], images[j], config).found:
            rep.injective = False
    for L, ML in zip(corpus, images):
        back = tensor_over(inv, ML).bimodule
        res = search_bimodule_iso(back, L, config)
        rep.round_trips.append(res.found)
        rep.round_trip_proven &= res.proven
    return rep
