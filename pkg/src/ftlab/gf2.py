"""Dense GF(2) linear algebra on numpy uint8 arrays.

All matrices are 2-D uint8 arrays with entries in {0, 1}; arithmetic is
mod 2 throughout.  Sizes here are desk-scale (n <= a few hundred), so
plain Gaussian elimination is fast enough everywhere.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, EnumerationTooLarge


def as_gf2(a) -> np.ndarray:
    """Coerce to a uint8 array reduced mod 2."""
    arr = np.asarray(a, dtype=np.uint8) % 2
    return arr


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2).

    Returns (R, pivots) where R has the same shape as `a` and pivots lists
    the pivot column of each nonzero row of R (so rank == len(pivots)).
    """
    r = as_gf2(a).copy()
    if r.ndim != 2:
        raise DimensionMismatch("expected a 2-D matrix")
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = hits[0] + row
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        mask = r[:, col].copy()
        mask[row] = 0
        r[mask == 1] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray) -> int:
    """Rank over GF(2)."""
    return len(rref(a)[1])


def row_basis(a: np.ndarray) -> np.ndarray:
    """Independent basis of the row space (rows of the RREF)."""
    r, pivots = rref(a)
    return r[: len(pivots)].copy()


def null_space(a: np.ndarray) -> np.ndarray:
    """Basis of the right null space as rows of the returned matrix."""
    a = as_gf2(a)
    rows, cols = a.shape
    r, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            if r[i, fc]:
                basis[k, pc] = 1
    return basis


def in_row_space(v: np.ndarray, basis_rref: np.ndarray, pivots: list[int]) -> bool:
    """Membership test against a precomputed RREF basis."""
    w = as_gf2(v).copy()
    for i, pc in enumerate(pivots):
        if w[pc]:
            w ^= basis_rref[i]
    return not w.any()


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of a @ x = b over GF(2), or None if inconsistent."""
    a = as_gf2(a)
    b = as_gf2(b)
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(rows, 1)], axis=1)
    r, pivots = rref(aug)
    x = np.zeros(cols, dtype=np.uint8)
    for i, pc in enumerate(pivots):
        if pc == cols:
            return None
        x[pc] = r[i, cols]
    return x


def inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a square invertible matrix over GF(2)."""
    a = as_gf2(a)
    k = a.shape[0]
    if a.shape != (k, k):
        raise DimensionMismatch("matrix must be square")
    aug = np.concatenate([a, np.eye(k, dtype=np.uint8)], axis=1)
    r, pivots = rref(aug)
    if pivots[:k] != list(range(k)):
        raise DimensionMismatch("matrix is singular over GF(2)")
    return r[:k, k:].copy()


def span(basis: np.ndarray, cap: int = 1 << 20) -> np.ndarray:
    """All 2^k vectors spanned by k basis rows, as a (2^k, n) array.

    Raises EnumerationTooLarge above `cap` elements.  Element order is the
    Gray-code-free binary order: row i is the XOR of basis rows selected by
    the bits of i (bit j -> basis row j).
    """
    basis = as_gf2(basis)
    k, n = basis.shape if basis.size else (0, basis.shape[1] if basis.ndim == 2 else 0)
    if 2**k > cap:
        raise EnumerationTooLarge(f"span of dimension {k} exceeds cap {cap}")
    out = np.zeros((1, n), dtype=np.uint8)
    for j in range(k):
        out = np.concatenate([out, out ^ basis[j]], axis=0)
    return out
