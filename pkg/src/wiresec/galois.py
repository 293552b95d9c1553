"""Exact linear algebra over prime fields GF(p).

Every other part of the library (transfer-matrix compilation, leakage
ranks, coset counting, linear binning) sits on top of this module.
Elimination uses deterministic pivoting, first nonzero entry in column
order, so ranks, kernel bases and particular solutions are reproducible
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_MODULUS",
    "Field",
    "FieldMatrix",
    "rank",
    "null_space_basis",
    "left_null_complement",
    "solve",
    "image_contains",
    "hstack",
    "vstack",
]

# Largest supported modulus; keeps a*b below 2**32 so sums of products fit
# comfortably in int64.
MAX_MODULUS = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Prime field GF(p), 2 <= p <= 2**16."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not (2 <= self.p <= MAX_MODULUS):
            raise ValueError(f"modulus must be an integer in [2, {MAX_MODULUS}], got {self.p!r}")
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def log2_size(self) -> float:
        """Bits carried by one uniform symbol of the field."""
        return math.log2(self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return pow(a, self.p - 2, self.p)

    def vec(self, data) -> np.ndarray:
        """Coerce a 1-D sequence into reduced field symbols."""
        v = np.asarray(data, dtype=np.int64) % self.p
        if v.ndim != 1:
            raise ValueError("expected a 1-D sequence of symbols")
        return v


class FieldMatrix:
    """Dense matrix over GF(p), row-major int64 storage.

    Matrices with zero rows or zero columns are legal and act as the
    corresponding empty linear maps; they show up naturally for networks
    without keys or randomness.
    """

    __slots__ = ("field", "_a")

    def __init__(self, field: Field, entries):
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError(f"entries must be 2-D, got shape {a.shape}")
        a = a % field.p
        a.flags.writeable = False
        self.field = field
        self._a = a

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "FieldMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> "FieldMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_flat(cls, field: Field, rows: int, cols: int, entries) -> "FieldMatrix":
        flat = np.asarray(entries, dtype=np.int64)
        if flat.size != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {flat.size}")
        return cls(field, flat.reshape(rows, cols))

    @classmethod
    def column(cls, field: Field, data) -> "FieldMatrix":
        return cls(field, field.vec(data).reshape(-1, 1))

    @classmethod
    def random(cls, field: Field, rows: int, cols: int, rng: np.random.Generator) -> "FieldMatrix":
        return cls(field, rng.integers(0, field.p, size=(rows, cols), dtype=np.int64))

    # -- basic queries ------------------------------------------------

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying entries."""
        return self._a

    def is_zero(self) -> bool:
        return not np.any(self._a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (
            self.field.p == other.field.p
            and self._a.shape == other._a.shape
            and np.array_equal(self._a, other._a)
        )

    def __repr__(self) -> str:
        return f"FieldMatrix(GF({self.field.p}), {self.rows}x{self.cols})"

    # -- algebra ------------------------------------------------------

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.field, self._a.T)

    def take_cols(self, indices) -> "FieldMatrix":
        idx = np.asarray(list(indices), dtype=np.intp)
        return FieldMatrix(self.field, self._a[:, idx] if idx.size else
                           np.zeros((self.rows, 0), dtype=np.int64))

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.field.p != other.field.p:
            raise ValueError("field mismatch")
        return FieldMatrix(self.field, (self._a @ other._a) % self.field.p)

    def mul_vec(self, v) -> np.ndarray:
        x = self.field.vec(v)
        if x.size != self.cols:
            raise ValueError(f"vector length {x.size} does not match {self.cols} columns")
        return (self._a @ x) % self.field.p

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.field.p,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [int(x) for x in self._a.ravel()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FieldMatrix":
        return cls.from_flat(Field(int(d["p"])), int(d["rows"]), int(d["cols"]), d["entries"])


def hstack(mats: list[FieldMatrix]) -> FieldMatrix:
    if not mats:
        raise ValueError("hstack needs at least one matrix")
    field = mats[0].field
    rows = mats[0].rows
    for m in mats:
        if m.field.p != field.p or m.rows != rows:
            raise ValueError("hstack requires equal fields and row counts")
    return FieldMatrix(field, np.hstack([m.array for m in mats]))


def vstack(mats: list[FieldMatrix]) -> FieldMatrix:
    if not mats:
        raise ValueError("vstack needs at least one matrix")
    field = mats[0].field
    cols = mats[0].cols
    for m in mats:
        if m.field.p != field.p or m.cols != cols:
            raise ValueError("vstack requires equal fields and column counts")
    return FieldMatrix(field, np.vstack([m.array for m in mats]))


def _rref(a: np.ndarray, p: int, pivot_limit: int | None = None):
    """Reduced row echelon form over GF(p).

    Pivots are restricted to the first ``pivot_limit`` columns; later
    columns are carried along (used for augmented systems).  Returns the
    reduced matrix and the pivot column list.
    """
    a = (a % p).copy()
    rows, cols = a.shape
    limit = cols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        factors = a[:, c].copy()
        factors[r] = 0
        if np.any(factors):
            a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: FieldMatrix) -> int:
    """Rank by exact Gaussian elimination; empty matrices have rank 0."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _rref(m.array, m.field.p)
    return len(pivots)


def null_space_basis(m: FieldMatrix) -> FieldMatrix:
    """Basis of the right kernel {x : m x = 0}, one basis vector per column.

    Column count equals cols - rank(m).  Basis vectors are produced in
    ascending free-column order, which makes downstream enumeration
    deterministic.
    """
    p = m.field.p
    if m.cols == 0:
        return FieldMatrix.zeros(m.field, 0, 0)
    if m.rows == 0:
        return FieldMatrix.identity(m.field, m.cols)
    red, pivots = _rref(m.array, p)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = np.zeros((m.cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, c in enumerate(pivots):
            basis[c, j] = (-red[i, f]) % p
    return FieldMatrix(m.field, basis)


def solve(m: FieldMatrix, rhs) -> np.ndarray | None:
    """One particular solution of m x = rhs, or None when inconsistent.

    Free variables are set to 0; combined with ``null_space_basis`` this
    parameterizes the full solution set.
    """
    b = m.field.vec(rhs)
    if b.size != m.rows:
        raise ValueError(f"rhs length {b.size} does not match {m.rows} rows")
    if m.rows == 0:
        return np.zeros(m.cols, dtype=np.int64)
    aug = np.hstack([m.array, b.reshape(-1, 1)])
    red, pivots = _rref(aug, m.field.p, pivot_limit=m.cols)
    # A nonzero entry in the rhs column of a zero row means inconsistency.
    nrank = len(pivots)
    if np.any(red[nrank:, m.cols]):
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, m.cols]
    return x


def left_null_complement(b: FieldMatrix, g: FieldMatrix, a: FieldMatrix) -> np.ndarray | None:
    """Nonzero row vector z with z·B = 0, z·G = 0 and z·A != 0, if any.

    Such a z exists exactly when rank([A,B,G]) > rank([B,G]); it witnesses
    that the image of A is not covered by the image of [B,G].  Scanning
    the left-kernel basis of [B,G] in order suffices: if no basis vector
    hits A, no combination does.  Returns None when A is fully masked.
    """
    if not (a.rows == b.rows == g.rows):
        raise ValueError("A, B, G must have equal row counts")
    if a.cols == 0:
        return None
    mask = hstack([b, g])
    zbasis = null_space_basis(mask.transpose())
    p = a.field.p
    at = a.array.T
    for j in range(zbasis.cols):
        z = zbasis.array[:, j]
        if np.any((at @ z) % p):
            return z.copy()
    return None


def image_contains(j: FieldMatrix, v) -> bool:
    """True iff v lies in the column space of J."""
    col = FieldMatrix.column(j.field, v)
    if col.rows != j.rows:
        raise ValueError("vector length does not match row count")
    return rank(hstack([j, col])) == rank(j)
