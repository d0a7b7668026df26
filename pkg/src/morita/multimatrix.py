"""Finite-dimensional C*-algebras as multimatrix algebras, correspondences as multiplicity matrices.

A correspondence between A = (+)_i M_{n_i} and B = (+)_j M_{m_j} is recorded by
the nonnegative integer matrix E whose (i, j) entry counts copies of the
irreducible A-B bimodule C^{n_i} (x) conj(C^{m_j}).  Interior tensor product is
matrix multiplication, the standard form is the identity matrix, and the
conjugate module is the transpose.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .bicat import IsoSearch
from .errors import AlgebraMismatch, AxiomViolation, DegenerateResult


@dataclass(frozen=True)
class MultimatrixAlgebra:
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        if any(n < 1 for n in blocks):
            raise ValueError(f"block sizes must be positive, got {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        return sum(n * n for n in self.blocks)

    def to_payload(self) -> dict:
        return {"blocks": list(self.blocks)}


class MultiplicityBimodule:
    def __init__(self, left: MultimatrixAlgebra, right: MultimatrixAlgebra, mult, name: str = ""):
        E = np.array(mult, dtype=np.int64).reshape(left.block_count, right.block_count)
        if E.size:
            if E.min() < 0:
                raise ValueError("multiplicities must be nonnegative")
            live = E.any(axis=1)
            if not live.all():
                # the left algebra would act degenerately on that block
                raise AxiomViolation("nondegeneracy", ("row", int(np.argmin(live))))
        E.setflags(write=False)
        self.left = left
        self.right = right
        self.mult = E
        self.name = name

    @property
    def k_vector(self) -> list[int]:
        """Block sizes of the compacts K_B(M): k_j = sum_i E_ij n_i."""
        n = np.array(self.left.blocks, dtype=np.int64)
        return [int(v) for v in n @ self.mult] if self.mult.size else [0] * self.right.block_count

    def __eq__(self, other):
        if not isinstance(other, MultiplicityBimodule):
            return NotImplemented
        return (self.left == other.left and self.right == other.right
                and np.array_equal(self.mult, other.mult))

    def __hash__(self):
        return hash((self.left, self.right, self.mult.tobytes()))

    def __repr__(self):
        return f"MultiplicityBimodule({self.left.blocks} -> {self.mult.tolist()} <- {self.right.blocks})"

    def describe(self) -> dict:
        return {"left": list(self.left.blocks), "right": list(self.right.blocks),
                "mult": self.mult.tolist()}

    def to_payload(self) -> dict:
        return {"left": self.left.to_payload(), "right": self.right.to_payload(),
                "mult": self.mult.tolist()}


def interior_tensor(e1: MultiplicityBimodule, e2: MultiplicityBimodule) -> MultiplicityBimodule:
    if e1.right != e2.left:
        raise AlgebraMismatch(f"cannot compose over {e1.right.blocks} and {e2.left.blocks}")
    E = e1.mult @ e2.mult
    if E.size and not E.any(axis=1).all():
        raise DegenerateResult(f"product {E.tolist()} has a zero row")
    if not E.size and e1.left.block_count:
        raise DegenerateResult("product is empty")
    return MultiplicityBimodule(e1.left, e2.right, E)


def unit_correspondence(b: MultimatrixAlgebra) -> MultiplicityBimodule:
    return MultiplicityBimodule(b, b, np.eye(b.block_count, dtype=np.int64))


def is_full(e: MultiplicityBimodule) -> bool:
    return not (~e.mult.any(axis=0)).any() if e.mult.size else e.right.block_count == 0


def compacts_iso(e: MultiplicityBimodule) -> tuple[bool, list[int]]:
    """Is A -> K_B(M) an isomorphism?  Always also returns the k-vector.

    Block i of A lands in every block j with E_ij > 0, with multiplicity E_ij;
    the map is onto (+)_{k_j > 0} M_{k_j} and injective exactly when the nonzero
    columns of E form a permutation matrix.
    """
    E = e.mult
    k = e.k_vector
    live = E[:, E.any(axis=0)] if E.size else E
    ok = (live.shape[0] == live.shape[1]
          and ((live == 0) | (live == 1)).all()
          and (live.sum(axis=0) == 1).all() and (live.sum(axis=1) == 1).all())
    return bool(ok), k


def is_permutation(E: np.ndarray) -> bool:
    E = np.asarray(E)
    return (E.ndim == 2 and E.shape[0] == E.shape[1]
            and ((E == 0) | (E == 1)).all()
            and (E.sum(axis=0) == 1).all() and (E.sum(axis=1) == 1).all())


def conjugate(e: MultiplicityBimodule) -> MultiplicityBimodule:
    """Conjugate module B -> conj(M) <- A; nondegenerate only when e is full."""
    if not is_full(e):
        raise DegenerateResult("conjugate of a non-full correspondence has a zero row")
    return MultiplicityBimodule(e.right, e.left, e.mult.T)


@dataclass
class CstarCertificate:
    bimodule: MultiplicityBimodule
    full: bool
    compacts: bool
    k_vector: list[int]
    inverse: MultiplicityBimodule | None = None
    round_trips: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.full and self.compacts and all(self.round_trips.values()) \
            and bool(self.round_trips)

    @property
    def failed_condition(self) -> str | None:
        if not self.full:
            return "full"
        if not self.compacts:
            return "compacts-iso"
        for name, ok in self.round_trips.items():
            if not ok:
                return name
        return None

    def to_dict(self) -> dict:
        out = {"certified": self.certified, "full": self.full,
               "compacts_iso": self.compacts, "k_vector": self.k_vector}
        if self.inverse is not None:
            out["inverse"] = self.inverse.mult.tolist()
            out["round_trips"] = dict(self.round_trips)
        if not self.certified:
            out["failed"] = self.failed_condition
        return out


def certify_equivalence_cstar(e: MultiplicityBimodule) -> CstarCertificate:
    full = is_full(e)
    compacts, k = compacts_iso(e)
    cert = CstarCertificate(e, full, compacts, k)
    if not (full and compacts):
        return cert
    inv = conjugate(e)
    cert.inverse = inv
    cert.round_trips = {
        "left": interior_tensor(e, inv) == unit_correspondence(e.left),
        "right": interior_tensor(inv, e) == unit_correspondence(e.right),
    }
    return cert


def search_cstar_equivalence(a: MultimatrixAlgebra, b: MultimatrixAlgebra) -> CstarCertificate | None:
    """First certified permutation correspondence a -> b, or None (proven: only permutations certify)."""
    r, c = a.block_count, b.block_count
    if r != c:
        return None
    for perm in itertools.permutations(range(c)):
        E = np.zeros((r, c), dtype=np.int64)
        E[np.arange(r), perm] = 1
        cert = certify_equivalence_cstar(MultiplicityBimodule(a, b, E))
        if cert.certified:
            return cert
    return None


# -- arrow calculus ------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCell:
    """The only 2-cells modeled here: identities between equal multiplicity data."""

    source: MultiplicityBimodule
    target: MultiplicityBimodule

    def __post_init__(self):
        if self.source != self.target:
            raise ValueError("2-cells exist only between equal multiplicity matrices")


class CstarCalculus:
    name = "cstar"

    def objects(self, cell):
        return cell.left, cell.right

    def same_object(self, a, b) -> bool:
        return a == b

    def unit(self, obj):
        return unit_correspondence(obj)

    def compose(self, m, n):
        return interior_tensor(m, n)

    def identity(self, cell):
        return IdentityCell(cell, cell)

    def source(self, alpha):
        return alpha.source

    def target(self, alpha):
        return alpha.target

    def vcompose(self, beta, alpha):
        if alpha.target != beta.source:
            raise ValueError("2-cells do not compose vertically")
        return IdentityCell(alpha.source, beta.target)

    def hcompose(self, alpha, beta):
        return IdentityCell(interior_tensor(alpha.source, beta.source),
                            interior_tensor(alpha.target, beta.target))

    def equal(self, alpha, beta) -> bool:
        return alpha.source == beta.source and alpha.target == beta.target

    def is_iso(self, alpha) -> bool:
        return True

    def associator(self, m, n, p):
        return IdentityCell(interior_tensor(interior_tensor(m, n), p),
                            interior_tensor(m, interior_tensor(n, p)))

    def left_unitor(self, m):
        return IdentityCell(interior_tensor(unit_correspondence(m.left), m), m)

    def right_unitor(self, m):
        return IdentityCell(interior_tensor(m, unit_correspondence(m.right)), m)

    def find_iso(self, m, n) -> IsoSearch:
        if m == n:
            return IsoSearch(IdentityCell(m, n), True, "equal-multiplicities")
        return IsoSearch(None, True, "multiplicities-differ")

    def describe(self, cell):
        return cell.describe()
