"""Asymptotically fast PLE decomposition and echelon forms.

The recursion splits the column range in half: factor the left half,
apply its row swaps to the right half, solve the top-right block against
the left factor's lower-triangular corner, update the bottom-right block
with one matrix product (sliced Karatsuba above the crossover,
table-based below), factor the Schur complement, and stitch the
permutations together.  Results are bit-identical to the quadratic
base-case algorithm for every crossover setting, because both follow
the same first-nonzero pivot rule and all arithmetic is exact.

Permutations use LAPACK-style swap vectors: entry i names the row (or
column) swapped with position i, applied in ascending order; applying
them in descending order undoes the permutation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mat_packed import PackedMatrix, scale_words
from .mat_sliced import cling, slice_packed
from .newton_john import (
    SingularMatrixError,
    _table_words,
    nj_mul,
    nj_ple,
    nj_trsm_upper_left,
)
from .poly_mul import MulCounters, karatsuba_mul
from .tuning import DEFAULT_PLE_CROSSOVER


class PermVector:
    """LAPACK-style swap vector; entry i >= i for all i."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=np.int64).copy()
        if arr.ndim != 1:
            raise ValueError("permutation vector must be one-dimensional")
        if np.any(arr < np.arange(arr.size)):
            bad = int(np.nonzero(arr < np.arange(arr.size))[0][0])
            raise ValueError(f"entry {int(arr[bad])} at index {bad} violates P_i >= i")
        self.entries = arr

    def __len__(self) -> int:
        return self.entries.size

    def __getitem__(self, i: int) -> int:
        return int(self.entries[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, PermVector) and np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"PermVector({self.entries.tolist()})"

    @classmethod
    def identity(cls, n: int) -> "PermVector":
        return cls(np.arange(n, dtype=np.int64))


@dataclass
class PleFactors:
    """In-place PLE result: swap vectors, rank, and the host matrix."""

    P: PermVector
    Q: PermVector
    rank: int
    matrix: PackedMatrix


def _perm_entries(P) -> np.ndarray:
    return P.entries if isinstance(P, PermVector) else np.asarray(P, dtype=np.int64)


def apply_perm_rows(A, P, forward: bool = True) -> None:
    """Apply (forward) or undo (backward) a row swap vector in place."""
    entries = _perm_entries(P)
    m = A.nrows
    order = range(entries.size) if forward else range(entries.size - 1, -1, -1)
    for i in order:
        j = int(entries[i])
        if j < i or j >= m:
            raise ValueError(f"swap target {j} at index {i} invalid for {m} rows")
        if j != i:
            A.swap_rows(i, j)


def apply_perm_cols(A, Q, forward: bool = True) -> None:
    """Apply (forward) or undo (backward) a column swap vector in place."""
    entries = _perm_entries(Q)
    n = A.ncols
    order = range(entries.size) if forward else range(entries.size - 1, -1, -1)
    for i in order:
        j = int(entries[i])
        if j < i or j >= n:
            raise ValueError(f"swap target {j} at index {i} invalid for {n} columns")
        if j != i:
            A.col_swap(i, j)


# -- triangular solves ---------------------------------------------------------


def _nj_trsm_lower_left(L: PackedMatrix, B: PackedMatrix, unit_diag: bool) -> None:
    """Row-forward mirror of the upper-left solve: walk rows top-down,
    expanding each solved row into a table for the rows below."""
    ctx = L.ctx
    m = L.nrows
    bw = B.storage.words
    for i in range(m):
        if not unit_diag:
            d = L.get(i, i)
            if d == 0:
                raise SingularMatrixError(i)
            if d != 1:
                B.scale_row(i, ctx.inv(d))
        if i == m - 1:
            break
        table = _table_words(ctx, bw[i], None)
        x = L.column_values(i)[i + 1 :]
        bw[i + 1 :] ^= np.take(table, x, axis=0)


def _dispatch_mul(A: PackedMatrix, B: PackedMatrix, crossover: int,
                  counters: MulCounters | None) -> PackedMatrix:
    """Multiplication used by the recursion: sliced Karatsuba for blocks
    above the crossover, table-based below."""
    if min(A.nrows, A.ncols, B.ncols) > crossover:
        return cling(karatsuba_mul(slice_packed(A), slice_packed(B), counters))
    return nj_mul(A, B)


def trsm_lower_left(L: PackedMatrix, B: PackedMatrix, unit_diag: bool = False,
                    crossover: int | None = None,
                    counters: MulCounters | None = None) -> None:
    """Solve L * X = B in place for lower triangular L.

    With unit_diag the stored diagonal is ignored and treated as 1 (the
    in-place PLE convention for the unit part of L); otherwise the
    diagonal is looked up and must be nonzero.
    """
    if L.ctx != B.ctx:
        raise ValueError(f"field mismatch: {L.ctx} vs {B.ctx}")
    m = L.nrows
    if L.ncols != m:
        raise ValueError(f"triangular factor must be square, got {L.nrows}x{L.ncols}")
    if B.nrows != m:
        raise ValueError(f"dimension mismatch: {m}x{m} solve against {B.nrows} rows")
    cx = DEFAULT_PLE_CROSSOVER if crossover is None else crossover
    _trsm_lower_rec(L, B, unit_diag, max(1, cx), counters)


def _trsm_lower_rec(L, B, unit_diag, crossover, counters):
    m = L.nrows
    if m <= crossover:
        _nj_trsm_lower_left(L, B, unit_diag)
        return
    h = m // 2
    n = B.ncols
    l00 = L.copy_window(0, 0, h, h)
    x0 = B.copy_window(0, 0, h, n)
    _trsm_lower_rec(l00, x0, unit_diag, crossover, counters)
    B.paste_window(0, 0, x0)
    l10 = L.copy_window(h, 0, m - h, h)
    B.xor_window(h, 0, _dispatch_mul(l10, x0, crossover, counters))
    l11 = L.copy_window(h, h, m - h, m - h)
    x1 = B.copy_window(h, 0, m - h, n)
    _trsm_lower_rec(l11, x1, unit_diag, crossover, counters)
    B.paste_window(h, 0, x1)


def trsm_lower_left_unit(L: PackedMatrix, B: PackedMatrix,
                         crossover: int | None = None,
                         counters: MulCounters | None = None) -> None:
    """Solve L * X = B with L unit lower triangular (diagonal implicit)."""
    trsm_lower_left(L, B, unit_diag=True, crossover=crossover, counters=counters)


def trsm_upper_left(U: PackedMatrix, B: PackedMatrix,
                    crossover: int | None = None,
                    counters: MulCounters | None = None) -> None:
    """Solve U * X = B in place for upper triangular U, recursively above
    the crossover; bit-identical for every crossover setting."""
    if U.ctx != B.ctx:
        raise ValueError(f"field mismatch: {U.ctx} vs {B.ctx}")
    m = U.nrows
    if U.ncols != m:
        raise ValueError(f"triangular factor must be square, got {U.nrows}x{U.ncols}")
    if B.nrows != m:
        raise ValueError(f"dimension mismatch: {m}x{m} solve against {B.nrows} rows")
    cx = DEFAULT_PLE_CROSSOVER if crossover is None else crossover
    _trsm_upper_rec(U, B, max(1, cx), counters)


def _trsm_upper_rec(U, B, crossover, counters):
    m = U.nrows
    if m <= crossover:
        nj_trsm_upper_left(U, B)
        return
    h = m // 2
    n = B.ncols
    u11 = U.copy_window(h, h, m - h, m - h)
    x1 = B.copy_window(h, 0, m - h, n)
    _trsm_upper_rec(u11, x1, crossover, counters)
    B.paste_window(h, 0, x1)
    u01 = U.copy_window(0, h, h, m - h)
    B.xor_window(0, 0, _dispatch_mul(u01, x1, crossover, counters))
    u00 = U.copy_window(0, 0, h, h)
    x0 = B.copy_window(0, 0, h, n)
    _trsm_upper_rec(u00, x0, crossover, counters)
    B.paste_window(0, 0, x0)


# -- PLE ------------------------------------------------------------------------


def _tril_with_diag(A: PackedMatrix, r: int) -> PackedMatrix:
    """Copy of the leading r x r corner with entries above the diagonal
    cleared (the compressed L block of an in-place PLE)."""
    corner = A.copy_window(0, 0, r, r)
    for t in range(r - 1):
        corner.mask_columns_below(t, 0)  # no-op placeholder for clarity
    # zero everything right of the diagonal, row by row
    w = corner.w
    width = corner.storage.words.shape[1]
    from .mat_gf2 import suffix_mask

    for t in range(r):
        kill = suffix_mask(width, (t + 1) * w)
        corner.storage.words[t] &= ~kill
    return corner


def _ple_rec(A: PackedMatrix, crossover: int, counters: MulCounters | None):
    m, n = A.nrows, A.ncols
    if n <= crossover or n < 2:
        return nj_ple(A)
    n1 = n // 2
    left = A.copy_window(0, 0, m, n1)
    P1, Q1, r1 = _ple_rec(left, crossover, counters)
    right = A.copy_window(0, n1, m, n - n1)
    for t in range(r1):
        j = int(P1[t])
        if j != t:
            right.swap_rows(t, j)
    if r1 > 0:
        l_top = _tril_with_diag(left, r1)
        x1 = right.copy_window(0, 0, r1, n - n1)
        _trsm_lower_rec(l_top, x1, False, crossover, counters)
        right.paste_window(0, 0, x1)
        if m - r1 > 0:
            l_bot = left.copy_window(r1, 0, m - r1, r1)
            right.xor_window(r1, 0, _dispatch_mul(l_bot, x1, crossover, counters))
    r2 = 0
    k2 = min(m - r1, n - n1)
    P2 = np.arange(max(k2, 0), dtype=np.int64)
    Q2 = np.arange(max(k2, 0), dtype=np.int64)
    if m - r1 > 0:
        x2 = right.copy_window(r1, 0, m - r1, n - n1)
        P2, Q2, r2 = _ple_rec(x2, crossover, counters)
        right.paste_window(r1, 0, x2)
        for t in range(r2):
            j = int(P2[t])
            if j != t:
                left.swap_rows(r1 + t, r1 + j)
    A.paste_window(0, 0, left)
    A.paste_window(0, n1, right)
    # compress the right half's L block into the leading columns
    for u in range(r2):
        src = n1 + u
        dst = r1 + u
        if src != dst:
            A.col_swap(dst, src, row_start=dst)
    k = min(m, n)
    P = np.arange(k, dtype=np.int64)
    Q = np.arange(k, dtype=np.int64)
    P[:r1] = P1[:r1]
    Q[:r1] = Q1[:r1]
    P[r1 : r1 + r2] = r1 + P2[:r2]
    Q[r1 : r1 + r2] = n1 + Q2[:r2]
    return P, Q, r1 + r2


def ple(A: PackedMatrix, crossover: int | None = None,
        counters: MulCounters | None = None) -> PleFactors:
    """In-place PLE decomposition of A; see nj_ple for the storage layout.

    crossover bounds the column extent of the quadratic base case; any
    setting (including effectively infinite) yields bit-identical
    factors.
    """
    cx = DEFAULT_PLE_CROSSOVER if crossover is None else crossover
    P, Q, r = _ple_rec(A, max(1, cx), counters)
    return PleFactors(PermVector(P), PermVector(Q), r, A)


def ple_unpack(factors: PleFactors) -> tuple[PackedMatrix, PackedMatrix]:
    """Expand an in-place PLE into explicit L (m x m) and E (m x n)."""
    A = factors.matrix
    P, Q, r = factors.P, factors.Q, factors.rank
    m, n = A.nrows, A.ncols
    work = A.copy()
    for t in range(r - 1, -1, -1):
        if Q[t] != t:
            work.col_swap(t, Q[t], row_start=t)
    arr = work.to_array()
    larr = np.zeros((m, m), dtype=np.uint16)
    for i in range(m):
        larr[i, i] = 1
    earr = np.zeros((m, n), dtype=np.uint16)
    for t in range(r):
        j = Q[t]
        larr[t:, t] = arr[t:, j]
        earr[t, j] = 1
        earr[t, j + 1 :] = arr[t, j + 1 :]
    L = PackedMatrix.from_array(A.ctx, larr)
    E = PackedMatrix.from_array(A.ctx, earr)
    return L, E


def ple_reconstruct(factors: PleFactors) -> PackedMatrix:
    """Compute P * L * E from an in-place PLE (the defining identity)."""
    L, E = ple_unpack(factors)
    M = nj_mul(L, E)
    apply_perm_rows(M, factors.P, forward=False)
    return M


# -- echelon forms -----------------------------------------------------------------


def _gather_columns(A: PackedMatrix, cols, nrows: int) -> PackedMatrix:
    vals = np.stack([A.column_values(int(j))[:nrows] for j in cols], axis=1)
    return PackedMatrix.from_array(A.ctx, vals)


def echelonize(A: PackedMatrix, full: bool = True,
               crossover: int | None = None,
               counters: MulCounters | None = None) -> int:
    """Reduce A in place via PLE; returns the rank.

    full=False leaves the row echelon form (PLE with L discarded);
    full=True continues to the reduced form by solving the unit upper
    triangular system the pivot columns form against the pivot rows,
    which matches the table-based Gaussian elimination bit for bit.
    """
    cx = DEFAULT_PLE_CROSSOVER if crossover is None else crossover
    factors = ple(A, cx, counters)
    P, Q, r = factors.P, factors.Q, factors.rank
    m, n = A.nrows, A.ncols
    # undo the L compression so E sits at its echelon positions
    for t in range(r - 1, -1, -1):
        if Q[t] != t:
            A.col_swap(t, Q[t], row_start=t)
    # drop L: clear below-pivot storage, set the implicit leading ones
    w = A.w
    mask = np.uint64((1 << w) - 1)
    for t in range(r):
        j = Q[t]
        wrd, s = divmod(j * w, 64)
        A.storage.words[t:, wrd] &= ~(mask << np.uint64(s))
        A.set(t, j, 1)
    if full and r > 0:
        upper = _gather_columns(A, [Q[t] for t in range(r)], r)
        rows = A.copy_window(0, 0, r, n)
        trsm_upper_left(upper, rows, cx, counters)
        A.paste_window(0, 0, rows)
    return r
