"""Dense exact linear algebra over prime fields F_p.

Everything downstream (tensor quotients, hom spaces, endomorphism rings)
reduces to row reduction here.  Pivoting is deterministic: the first
nonzero entry of the leftmost unreduced column wins, so every derived basis
is reproducible bit-for-bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise ValueError(f"modulus {self.p!r} is not prime")
        # products of two residues summed over a row must stay inside int64
        if self.p > 46337:
            raise ValueError(f"modulus {self.p} too large for int64 kernels")
        object.__setattr__(self, "p", int(self.p))

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(_inverse_table(self.p)[a])

    def __repr__(self):
        return f"F_{self.p}"


def as_field(field) -> PrimeField:
    return field if isinstance(field, PrimeField) else PrimeField(int(field))


class ExactMatrix:
    """Immutable dense matrix with entries in [0, p)."""

    __slots__ = ("data", "field")

    def __init__(self, entries, field, shape: tuple[int, int] | None = None):
        field = as_field(field)
        arr = np.array(entries, dtype=np.int64)
        if shape is not None:
            arr = arr.reshape(shape)
        if arr.ndim != 2:
            if arr.size == 0 and shape is None:
                raise ValueError("empty matrix needs an explicit shape")
            raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
        arr = np.mod(arr, field.p)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int, field) -> ExactMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, n: int, field) -> ExactMatrix:
        return cls(np.eye(n, dtype=np.int64), field)

    @classmethod
    def column(cls, values: Sequence[int], field) -> ExactMatrix:
        return cls(np.array(values, dtype=np.int64).reshape(-1, 1), field)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def _check_field(self, other: ExactMatrix):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_field(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        return ExactMatrix(self.data @ other.data, self.field)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_field(other)
        return ExactMatrix(self.data + other.data, self.field)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_field(other)
        return ExactMatrix(self.data - other.data, self.field)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(-self.data, self.field)

    def scale(self, c: int) -> ExactMatrix:
        return ExactMatrix(self.data * (int(c) % self.p), self.field)

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix(self.data.T, self.field)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.array_equal(self.data, other.data)))

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def is_zero(self) -> bool:
        return not self.data.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(
            np.array_equal(self.data, np.eye(self.rows, dtype=np.int64)))

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def __repr__(self):
        return f"ExactMatrix({self.tolist()}, {self.field})"


class RREF(NamedTuple):
    reduced: ExactMatrix
    rank: int
    pivots: tuple[int, ...]


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Row-reduce an int array mod p; returns (reduced copy, pivot columns)."""
    inv = _inverse_table(p)
    A = np.mod(np.array(a, dtype=np.int64), p)
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * inv[A[r, c]]) % p
        col = A[:, c].copy()
        col[r] = 0
        if col.any():
            A -= np.outer(col, A[r])
            np.mod(A, p, out=A)
        pivots.append(c)
        r += 1
    return A, pivots


def rref(m: ExactMatrix) -> RREF:
    reduced, pivots = rref_array(m.data, m.p)
    return RREF(ExactMatrix(reduced, m.field), len(pivots), tuple(pivots))


def rank(m: ExactMatrix) -> int:
    return len(rref_array(m.data, m.p)[1])


def kernel_array(a: np.ndarray, p: int) -> np.ndarray:
    """Columns of the result span the null space of `a` (mod p)."""
    ncols = a.shape[1]
    R, pivots = rref_array(a, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    K = np.zeros((ncols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        K[f, k] = 1
        for j, pc in enumerate(pivots):
            K[pc, k] = (-R[j, f]) % p
    return K


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    return ExactMatrix(kernel_array(m.data, m.p), m.field)


def solve_array(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some x with a @ x = b mod p (b may have several columns), or None."""
    n = a.shape[1]
    b2 = b.reshape(a.shape[0], -1)
    R, pivots = rref_array(np.hstack([a, b2]), p)
    if pivots and pivots[-1] >= n:
        return None
    x = np.zeros((n, b2.shape[1]), dtype=np.int64)
    for j, pc in enumerate(pivots):
        x[pc] = R[j, n:]
    return x


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix | None:
    a._check_field(b)
    if b.rows != a.rows:
        raise ValueError(f"dimension mismatch: a has {a.rows} rows, b has {b.rows}")
    x = solve_array(a.data, b.data, a.p)
    return None if x is None else ExactMatrix(x, a.field)


def kron_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2-d integer arrays (no reduction)."""
    (r1, c1), (r2, c2) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(r1 * r2, c1 * c2)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    a._check_field(b)
    return ExactMatrix(kron_array(a.data, b.data), a.field,
                       shape=(a.rows * b.rows, a.cols * b.cols))


def inverse_array(a: np.ndarray, p: int) -> np.ndarray | None:
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    R, pivots = rref_array(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if sum(1 for c in pivots if c < n) < n:
        return None
    return R[:, n:].copy()


def inverse(m: ExactMatrix) -> ExactMatrix | None:
    inv = inverse_array(m.data, m.p)
    return None if inv is None else ExactMatrix(inv, m.field, shape=m.shape)


def batch_invertible(stack: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask: which square matrices of a (B, n, n) stack are invertible mod p."""
    inv = _inverse_table(p)
    A = np.mod(np.array(stack, dtype=np.int64), p)
    B, n, _ = A.shape
    ok = np.ones(B, dtype=bool)
    idx = np.arange(B)
    for c in range(n):
        sub = A[:, c:, c]
        has = sub != 0
        found = has.any(axis=1)
        ok &= found
        rows = c + np.argmax(has, axis=1)
        # swap pivot row into position c
        pivot_rows = A[idx, rows].copy()
        A[idx, rows] = A[:, c]
        A[:, c] = pivot_rows
        piv = A[:, c, c]
        scale = inv[piv]
        A[:, c] = (A[:, c] * scale[:, None]) % p
        factors = A[:, :, c].copy()
        factors[:, c] = 0
        A = (A - factors[:, :, None] * A[:, c][:, None, :]) % p
    return ok


def span_rank(vectors: Sequence[np.ndarray], p: int) -> int:
    if not len(vectors):
        return 0
    return len(rref_array(np.array(vectors, dtype=np.int64), p)[1])
