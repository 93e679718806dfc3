"""Exact linear algebra over prime fields GF(q).

Every matrix carries its modulus, arithmetic is integer-exact, and all
reductions are deterministic (first nonzero pivot, ascending free columns),
so repeated runs produce bit-identical ranks, bases and inverses.
"""

from __future__ import annotations

import functools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np


class NotFullRowRankError(ValueError):
    """A right inverse was requested for a matrix with dependent rows."""


@functools.lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def smallest_prime_above(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    p = max(2, n + 1)
    while not is_prime(p):
        p += 1
    return p


def default_modulus(t: int, k: int) -> int:
    """Field-size policy used throughout: the smallest prime above t + k.

    Any prime larger than t works for the constructions here; this default
    leaves headroom above both the relay count and the wiretap budget and is
    printed in every report so runs are reproducible.
    """
    return smallest_prime_above(t + k)


@dataclass(frozen=True)
class FieldElement:
    """Residue in GF(q) with exact modular arithmetic."""

    value: int
    q: int

    def __post_init__(self) -> None:
        if not is_prime(self.q):
            raise ValueError(f"modulus {self.q} is not prime")
        if not 0 <= self.value < self.q:
            raise ValueError(f"value {self.value} outside [0, {self.q})")

    def _same_field(self, other: FieldElement) -> None:
        if self.q != other.q:
            raise ValueError(f"mixed moduli {self.q} and {other.q}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._same_field(other)
        return FieldElement((self.value + other.value) % self.q, self.q)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._same_field(other)
        return FieldElement((self.value - other.value) % self.q, self.q)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._same_field(other)
        return FieldElement((self.value * other.value) % self.q, self.q)

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.value % self.q, self.q)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return FieldElement(pow(self.value, -1, self.q), self.q)


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """Dense matrix over GF(q), stored as a read-only integer array.

    Entries are normalised into [0, q) on construction.  Zero-row and
    zero-column shapes are legal values (they show up as empty null-space
    bases and as the key matrix of a keyless scheme).
    """

    data: np.ndarray
    q: int

    def __post_init__(self) -> None:
        if not is_prime(self.q):
            raise ValueError(f"modulus {self.q} is not prime")
        arr = np.asarray(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        arr = np.mod(arr, self.q)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], q: int, cols: int | None = None) -> FieldMatrix:
        if len(rows) == 0:
            if cols is None:
                raise ValueError("column count required for a matrix with no rows")
            return cls(np.zeros((0, cols), dtype=np.int64), q)
        return cls(np.array(rows, dtype=np.int64), q)

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int) -> FieldMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), q)

    @classmethod
    def identity(cls, n: int, q: int) -> FieldMatrix:
        return cls(np.eye(n, dtype=np.int64), q)

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        if self.q != other.q:
            raise ValueError(f"mixed moduli {self.q} and {other.q}")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return FieldMatrix(self.data @ other.data, self.q)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product, returning a plain integer tuple."""
        v = np.asarray(vec, dtype=np.int64) % self.q
        if v.shape != (self.cols,):
            raise ValueError(f"vector of length {len(vec)} against {self.cols} columns")
        return tuple(int(x) for x in (self.data @ v) % self.q)

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self.data.T, self.q)

    def take_rows(self, indices: Sequence[int]) -> FieldMatrix:
        return FieldMatrix(self.data[list(indices), :], self.q)

    def to_lists(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def __repr__(self) -> str:
        return f"FieldMatrix({self.to_lists()!r}, q={self.q})"


def hstack(mats: Sequence[FieldMatrix]) -> FieldMatrix:
    _check_family(mats)
    rows = {m.rows for m in mats}
    if len(rows) != 1:
        raise ValueError(f"row counts differ: {sorted(rows)}")
    return FieldMatrix(np.concatenate([m.data for m in mats], axis=1), mats[0].q)


def vstack(mats: Sequence[FieldMatrix]) -> FieldMatrix:
    _check_family(mats)
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise ValueError(f"column counts differ: {sorted(cols)}")
    return FieldMatrix(np.concatenate([m.data for m in mats], axis=0), mats[0].q)


def _check_family(mats: Sequence[FieldMatrix]) -> None:
    if not mats:
        raise ValueError("need at least one matrix")
    if len({m.q for m in mats}) != 1:
        raise ValueError("matrices live over different fields")


def _reduce(arr: np.ndarray, q: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Gauss-Jordan reduction mod q; returns (RREF, pivot columns)."""
    mat = arr.copy()
    n_rows, n_cols = mat.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nonzero = np.nonzero(mat[r:, c])[0]
        if nonzero.size == 0:
            continue
        p = r + int(nonzero[0])
        if p != r:
            mat[[r, p]] = mat[[p, r]]
        mat[r] = mat[r] * pow(int(mat[r, c]), -1, q) % q
        factor = mat[:, c].copy()
        factor[r] = 0
        mat = (mat - np.outer(factor, mat[r])) % q
        pivots.append(c)
        r += 1
    return mat, tuple(pivots)


def rref(m: FieldMatrix) -> tuple[FieldMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and its pivot columns."""
    reduced, pivots = _reduce(m.data, m.q)
    return FieldMatrix(reduced, m.q), pivots


def rank(m: FieldMatrix) -> int:
    """Number of pivots in the reduced row-echelon form."""
    if m.rows == 0 or m.cols == 0:
        raise ValueError("rank of an empty matrix is undefined")
    return len(_reduce(m.data, m.q)[1])


def right_null_space_basis(m: FieldMatrix) -> FieldMatrix:
    """Canonical basis of {x : m @ x = 0}, one basis vector per column.

    The basis is derived from the RREF pivot structure (one vector per free
    column, free columns in ascending order), which makes every downstream
    tie-break deterministic.
    """
    if m.cols == 0:
        raise ValueError("null space needs at least one column")
    reduced, pivots = _reduce(m.data, m.q)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = np.zeros((m.cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-int(reduced[i, fc])) % m.q
    return FieldMatrix(basis, m.q)


def subspace_sum_dim(bases: Sequence[FieldMatrix]) -> int:
    """Dimension of the sum of subspaces given by column bases.

    All bases must share the ambient dimension (row count) and modulus.
    """
    _check_family(bases)
    ambient = {b.rows for b in bases}
    if len(ambient) != 1:
        raise ValueError(f"ambient dimensions differ: {sorted(ambient)}")
    if sum(b.cols for b in bases) == 0:
        return 0
    stacked = np.concatenate([b.data for b in bases], axis=1)
    return len(_reduce(stacked, bases[0].q)[1])


def subspace_intersection_dim(*constraints: FieldMatrix) -> int:
    """Dimension of the common null space of the stacked constraint matrices.

    Each argument constrains one subspace (the subspace is its right null
    space); the intersection is the null space of the vertical stack, so the
    result is cols - rank(stack).
    """
    _check_family(constraints)
    widths = {c.cols for c in constraints}
    if len(widths) != 1:
        raise ValueError(f"constraint widths differ: {sorted(widths)}")
    cols = constraints[0].cols
    stacked = np.concatenate([c.data for c in constraints], axis=0)
    return cols - len(_reduce(stacked, constraints[0].q)[1])


def intersection_of_row_spaces(mats: Sequence[FieldMatrix]) -> int:
    """Dimension of the intersection of the row spaces of ``mats``.

    The row space of each matrix is the orthogonal complement of its right
    null space, so the intersection is cut out by stacking those null-space
    bases (transposed) as constraints.
    """
    _check_family(mats)
    widths = {m.cols for m in mats}
    if len(widths) != 1:
        raise ValueError(f"ambient dimensions differ: {sorted(widths)}")
    constraints = [right_null_space_basis(m).transpose() for m in mats]
    return subspace_intersection_dim(*constraints)


def right_inverse(m: FieldMatrix) -> FieldMatrix:
    """A matrix R with m @ R = identity, built from the pivot columns.

    Reducing [m | I] tracks the row operations E with E @ m in RREF; placing
    the rows of E at the pivot columns yields an exact right inverse.
    Raises NotFullRowRankError when the rows of ``m`` are dependent.
    """
    n_rows, n_cols = m.shape
    aug = np.concatenate([m.data, np.eye(n_rows, dtype=np.int64)], axis=1)
    reduced, pivots = _reduce(aug, m.q)
    left_pivots = [p for p in pivots if p < n_cols]
    if len(left_pivots) < n_rows:
        raise NotFullRowRankError(f"matrix of shape {m.shape} has row rank {len(left_pivots)}")
    ops = reduced[:, n_cols:]
    out = np.zeros((n_cols, n_rows), dtype=np.int64)
    for j, pc in enumerate(left_pivots):
        out[pc] = ops[j]
    return FieldMatrix(out, m.q)


def random_matrix(rng, rows: int, cols: int, q: int) -> FieldMatrix:
    """Uniform random matrix drawn entry by entry from ``rng``."""
    entries = [[rng.randrange(q) for _ in range(cols)] for _ in range(rows)]
    return FieldMatrix.from_rows(entries, q, cols=cols)


class IncrementalBasis:
    """Row basis maintained in echelon form for incremental independence tests.

    Every stored row is zero before its pivot and pivots are distinct, so a
    single ascending-pivot reduction pass decides membership in the span.
    """

    def __init__(self, q: int, width: int) -> None:
        self.q = q
        self.width = width
        self.rows: list[tuple[int, np.ndarray]] = []  # (pivot, normalised row)

    def copy(self) -> IncrementalBasis:
        dup = IncrementalBasis(self.q, self.width)
        dup.rows = list(self.rows)
        return dup

    def try_add(self, vec: np.ndarray) -> bool:
        """Add ``vec`` if independent of the stored rows; report whether it was."""
        v = np.asarray(vec, dtype=np.int64) % self.q
        for pivot, row in self.rows:
            if v[pivot]:
                v = (v - v[pivot] * row) % self.q
        nonzero = np.nonzero(v)[0]
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        v = v * pow(int(v[pivot]), -1, self.q) % self.q
        self.rows.append((pivot, v))
        self.rows.sort(key=lambda item: item[0])
        return True

    def __len__(self) -> int:
        return len(self.rows)
