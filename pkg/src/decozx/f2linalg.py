"""Exact linear and affine algebra over the two-element field.

Vectors are 1-D numpy ``uint8`` arrays with entries in {0, 1}; matrices
are 2-D ``uint8`` arrays. Arithmetic is carried out with XOR, so every
result is exact.

Packing convention used throughout the package: coordinate 0 is the most
significant bit, i.e. ``pack_bits((1, 0)) == 2``. This matches the wire
order of diagram boundaries (wire 0 contributes the top bit of a matrix
index).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AffineSupport",
    "affine_violation",
    "as_f2",
    "canonical_basis",
    "canonical_coset_rep",
    "induced_permutation",
    "is_affine",
    "pack_bits",
    "pivot_coordinates",
    "rank",
    "rref",
    "solve",
    "subset_matrix",
    "unpack_bits",
]


def as_f2(data) -> np.ndarray:
    """Coerces array-like data to a uint8 array and checks entries are bits.

    Args:
        data: array-like of 0/1 entries (any integer or bool dtype).

    Returns:
        A fresh ``uint8`` numpy array of the same shape.

    Raises:
        ValueError: if any entry is not 0 or 1.
    """
    arr = np.asarray(data)
    if arr.dtype == bool:
        return arr.astype(np.uint8)
    arr = arr.astype(np.int64, copy=False)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("entries must be 0 or 1")
    return arr.astype(np.uint8)


def pack_bits(bits: Sequence[int]) -> int:
    """Packs a bit vector into an integer, coordinate 0 most significant."""
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def unpack_bits(value: int, width: int) -> np.ndarray:
    """Unpacks ``value`` into a ``width``-coordinate bit vector."""
    if value < 0 or value >= (1 << width):
        raise ValueError(f"value {value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def rref(mat) -> tuple[np.ndarray, list[int]]:
    """Computes the reduced row echelon form of a matrix over GF(2).

    Args:
        mat: 2-D array-like of bits.

    Returns:
        Pair ``(r, pivots)`` where ``r`` is the RREF (same shape, zero rows
        last) and ``pivots`` lists the pivot column of each nonzero row in
        increasing order.
    """
    r = as_f2(mat).copy()
    if r.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        # clear the column everywhere else
        mask = r[:, col].copy()
        mask[row] = 0
        r[mask == 1] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(mat) -> int:
    """Rank of a GF(2) matrix."""
    return len(rref(mat)[1])


def canonical_basis(points: Iterable) -> np.ndarray:
    """Canonical basis matrix of the span of a set of vectors.

    The result is the unique n x k matrix whose columns are the nonzero
    rows of the RREF of the matrix with the input vectors as rows, ordered
    by pivot position. Two inputs with equal span produce identical output.

    Args:
        points: nonempty iterable of equal-length bit vectors.

    Returns:
        n x k uint8 matrix with k = dim span(points); k may be 0.

    Raises:
        ValueError: if the input is empty or lengths disagree.
    """
    rows = [as_f2(p) for p in points]
    if not rows:
        raise ValueError("empty span: need at least one vector")
    n = rows[0].shape[0]
    if any(r.shape != (n,) for r in rows):
        raise ValueError("vectors must share one length")
    r, pivots = rref(np.array(rows, dtype=np.uint8))
    k = len(pivots)
    return r[:k].T.copy() if k else np.zeros((n, 0), dtype=np.uint8)


def pivot_coordinates(basis: np.ndarray) -> list[int]:
    """Pivot coordinate of each column of a canonical basis matrix."""
    return [int(np.nonzero(basis[:, j])[0][0]) for j in range(basis.shape[1])]


def canonical_coset_rep(basis, x) -> np.ndarray:
    """Unique member of ``x + Im(basis)`` with zeros at every pivot coordinate.

    ``basis`` must be in canonical (echelon) column form, e.g. produced by
    :func:`canonical_basis`. The representative is canonical: any two
    vectors of the same coset map to the same output.
    """
    a = as_f2(basis)
    v = as_f2(x).copy()
    if a.ndim != 2 or v.shape != (a.shape[0],):
        raise ValueError("offset length must match basis rows")
    for j, piv in enumerate(pivot_coordinates(a)):
        if v[piv]:
            v ^= a[:, j]
    return v


@dataclass(frozen=True, eq=False)
class AffineSupport:
    """An affine subset of bit vectors: ``{basis @ y + offset}``.

    ``basis`` is an injective n x k matrix in canonical echelon column
    form; ``offset`` has zero entries at every pivot coordinate, so the
    pair is a canonical name for the subset.
    """

    basis: np.ndarray
    offset: np.ndarray

    @property
    def ambient(self) -> int:
        return int(self.basis.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[1])

    def points(self) -> list[np.ndarray]:
        """All 2**k member vectors, ordered by packed coefficient value."""
        k = self.dimension
        out = []
        for y in range(1 << k):
            coeff = unpack_bits(y, k)
            out.append((self.basis @ coeff + self.offset) % 2)
        return [p.astype(np.uint8) for p in out]


def _dedupe_packed(points: Iterable) -> tuple[list[int], int]:
    rows = [as_f2(p) for p in points]
    if not rows:
        raise ValueError("empty point set")
    n = rows[0].shape[0]
    if any(r.shape != (n,) for r in rows):
        raise ValueError("vectors must share one length")
    return sorted({pack_bits(r) for r in rows}), n


def is_affine(points: Iterable) -> AffineSupport | None:
    """Tests whether a nonempty set of bit vectors is an affine subset.

    Shifts by the lexicographically smallest member, takes the canonical
    basis of the differences, and accepts iff the set size is exactly
    2**rank. Returns the canonical (basis, offset) pair, or None.
    """
    packed, n = _dedupe_packed(points)
    base = packed[0]
    diffs = [unpack_bits(p ^ base, n) for p in packed]
    basis = canonical_basis(diffs)
    if len(packed) != (1 << basis.shape[1]):
        return None
    offset = canonical_coset_rep(basis, unpack_bits(base, n))
    return AffineSupport(basis=basis, offset=offset)


def affine_violation(points: Iterable) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
    """Finds members a, b, c with a + b + c outside the set, if any exist.

    A nonempty set is affine iff it is closed under triple sums, so this
    returns None exactly when :func:`is_affine` accepts.
    """
    packed, n = _dedupe_packed(points)
    base = packed[0]
    shifted = {p ^ base for p in packed}
    for s1 in shifted:
        for s2 in shifted:
            if s1 ^ s2 not in shifted:
                return (
                    unpack_bits(s1 ^ base, n),
                    unpack_bits(s2 ^ base, n),
                    unpack_bits(base, n),
                )
    return None


def subset_matrix(n: int) -> np.ndarray:
    """The n x (2**n - 1) matrix whose columns are all nonzero bit vectors.

    Column j holds the bits of the integer j + 1 (packed convention), so
    entry (i, x) is coordinate i of the nonzero vector x.
    """
    if n < 1:
        raise ValueError("need at least one coordinate")
    cols = [unpack_bits(x, n) for x in range(1, 1 << n)]
    return np.array(cols, dtype=np.uint8).T


def induced_permutation(a) -> np.ndarray:
    """Permutation matrix on nonzero vectors induced by an invertible map.

    For invertible n x n ``a``, returns the (2**n - 1) square permutation
    matrix ``sigma`` with ``sigma[s-1, t-1] = 1`` iff ``a @ t = s`` on
    nonzero vectors. The defining exchange law
    ``a @ subset_matrix(n) == subset_matrix(n) @ sigma`` (mod 2) is checked
    before returning.

    Raises:
        ValueError: if ``a`` is not square or not invertible.
    """
    mat = as_f2(a)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    n = mat.shape[0]
    if rank(mat) != n:
        raise ValueError("singular matrix has no induced permutation")
    size = (1 << n) - 1
    sigma = np.zeros((size, size), dtype=np.uint8)
    for t in range(1, 1 << n):
        s = pack_bits(mat @ unpack_bits(t, n) % 2)
        sigma[s - 1, t - 1] = 1
    sub = subset_matrix(n)
    if not np.array_equal(mat @ sub % 2, sub @ sigma % 2):
        raise AssertionError("exchange law violated; internal error")
    return sigma


def solve(a, b) -> np.ndarray | None:
    """Solves ``a @ y = b`` over GF(2); free variables are set to zero.

    Returns one solution vector of length ``a.shape[1]``, or None if the
    system is inconsistent.
    """
    mat = as_f2(a)
    rhs = as_f2(b)
    if mat.ndim != 2 or rhs.shape != (mat.shape[0],):
        raise ValueError("shape mismatch")
    aug = np.concatenate([mat, rhs[:, None]], axis=1)
    r, pivots = rref(aug)
    cols = mat.shape[1]
    if cols in pivots:
        return None
    y = np.zeros(cols, dtype=np.uint8)
    for row, col in enumerate(pivots):
        y[col] = r[row, cols]
    return y
