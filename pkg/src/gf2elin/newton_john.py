"""Gray-code multiple-table ("Newton-John") algorithms on packed matrices.

The shared trick: before a row is used many times with different scalar
coefficients, precompute all 2^e of its scalar multiples in a table
indexed by field element.  Building one table costs e scalar row
multiplications (the alpha^k multiples) plus 2^e - 1 row additions via a
Gray-code walk; afterwards every "scale row by c and add" becomes a
single table lookup plus a row XOR.

On top of that table this module provides schoolbook multiplication,
table-based multiplication, Gaussian elimination (reduced or plain row
echelon form), the in-place PLE variant, and the upper-left triangular
solve.
"""

from __future__ import annotations

import numpy as np

from .gf2e import FieldCtx
from .mat_gf2 import RowOpCounters, suffix_mask
from .mat_packed import PackedMatrix, scale_words
from .tuning import DEFAULT_NJ_TABLE_COUNT


class SingularMatrixError(ValueError):
    """A triangular solve met a zero diagonal entry."""

    def __init__(self, index: int):
        super().__init__(f"zero diagonal entry at index {index}")
        self.index = index


class NJTable:
    """All 2^e scalar multiples of one source row, indexed by scalar."""

    __slots__ = ("ctx", "ncols", "words")

    def __init__(self, ctx: FieldCtx, ncols: int, words: np.ndarray):
        self.ctx = ctx
        self.ncols = ncols
        self.words = words

    def row(self, x: int) -> PackedMatrix:
        out = PackedMatrix(self.ctx, 1, self.ncols)
        out.storage.words[0] = self.words[x]
        return out

    def as_matrix(self) -> PackedMatrix:
        out = PackedMatrix(self.ctx, self.words.shape[0], self.ncols)
        out.storage.words[:] = self.words
        return out


def _table_words(ctx: FieldCtx, row_words: np.ndarray,
                 counters: RowOpCounters | None) -> np.ndarray:
    """Gray-code walk over one row: e scalar multiples, 2^e - 1 row XORs."""
    e = ctx.e
    width = row_words.shape[0]
    multiples = np.empty((e, width), dtype=np.uint64)
    multiples[0] = row_words
    for k in range(1, e):
        multiples[k] = scale_words(ctx, 2, multiples[k - 1 : k])[0]
    table = np.zeros((1 << e, width), dtype=np.uint64)
    prev = 0
    for t in range(1, 1 << e):
        g = t ^ (t >> 1)
        bit = (g ^ prev).bit_length() - 1
        np.bitwise_xor(table[prev], multiples[bit], out=table[g])
        prev = g
    if counters is not None:
        counters.scalar_row_muls += e
        counters.row_adds += (1 << e) - 1
    return table


def make_table(row: PackedMatrix, counters: RowOpCounters | None = None) -> NJTable:
    """Build the table of all 2^e multiples of a 1 x n row.

    Row x of the result is x * row under the integer encoding of field
    elements; row 0 is zero.  Costs exactly e scalar row multiplications
    and 2^e - 1 row additions, reported through `counters`.
    """
    if row.nrows != 1:
        raise ValueError(f"expected a single row, got {row.nrows} rows")
    words = _table_words(row.ctx, row.storage.words[0], counters)
    return NJTable(row.ctx, row.ncols, words)


def _table_block(B: PackedMatrix, i0: int, i1: int,
                 counters: RowOpCounters | None) -> np.ndarray:
    """Tables for rows i0..i1-1 of B at once, shaped (rows, 2^e, width).

    Content and per-table operation counts match make_table; the row
    additions are batched a power-of-two block at a time instead of
    walking the Gray code row by row.
    """
    ctx = B.ctx
    e = ctx.e
    blk = i1 - i0
    width = B.storage.words.shape[1]
    cur = B.storage.words[i0:i1]
    tables = np.zeros((blk, 1 << e, width), dtype=np.uint64)
    for k in range(e):
        half = 1 << k
        np.bitwise_xor(tables[:, :half], cur[:, None, :], out=tables[:, half : 2 * half])
        if k + 1 < e:
            cur = scale_words(ctx, 2, cur)
    if counters is not None:
        counters.scalar_row_muls += e * blk
        counters.row_adds += ((1 << e) - 1) * blk
    return tables


def _check_mul_operands(A: PackedMatrix, B: PackedMatrix) -> None:
    if A.ctx != B.ctx:
        raise ValueError(f"field mismatch: {A.ctx} vs {B.ctx}")
    if A.ncols != B.nrows:
        raise ValueError(
            f"inner dimensions differ: {A.nrows}x{A.ncols} times {B.nrows}x{B.ncols}"
        )


def cubic_mul(A: PackedMatrix, B: PackedMatrix) -> PackedMatrix:
    """Schoolbook row-update multiplication: for every coefficient
    A[j, i], scale row i of B and add it into row j of the result."""
    _check_mul_operands(A, B)
    C = PackedMatrix(A.ctx, A.nrows, B.ncols)
    if A.nrows == 0 or A.ncols == 0 or B.ncols == 0:
        return C
    ctx = A.ctx
    a = A.to_array()
    cw = C.storage.words
    bw = B.storage.words
    for i in range(A.ncols):
        brow = bw[i : i + 1]
        col = a[:, i]
        for j in range(A.nrows):
            c = col[j]
            if c:
                cw[j] ^= scale_words(ctx, int(c), brow)[0]
    return C


def nj_mul(A: PackedMatrix, B: PackedMatrix,
           counters: RowOpCounters | None = None,
           table_count: int | None = None) -> PackedMatrix:
    """Table-based multiplication: one table per row of B, then one
    lookup-and-XOR per (row of A, row of B) pair."""
    _check_mul_operands(A, B)
    C = PackedMatrix(A.ctx, A.nrows, B.ncols)
    if A.nrows == 0 or A.ncols == 0 or B.ncols == 0:
        return C
    blk = max(1, table_count or DEFAULT_NJ_TABLE_COUNT)
    a = A.to_array()
    cw = C.storage.words
    buf = np.empty_like(cw)
    for i0 in range(0, A.ncols, blk):
        i1 = min(i0 + blk, A.ncols)
        tables = _table_block(B, i0, i1, counters)
        for t in range(i1 - i0):
            np.take(tables[t], a[:, i0 + t], axis=0, out=buf)
            cw ^= buf
    return C


def nj_gauss(A: PackedMatrix, full: bool = True,
             counters: RowOpCounters | None = None) -> int:
    """In-place Gaussian elimination; returns the rank.

    full=True produces the reduced row echelon form (pivots 1, zeros
    above and below); full=False stops at row echelon form (zeros below
    only).  Pivots are the first nonzero entry scanning rows top-down in
    the leftmost unfinished column.
    """
    m, n = A.nrows, A.ncols
    if m == 0 or n == 0:
        return 0
    ctx = A.ctx
    r = 0
    words = A.storage.words
    buf = np.empty_like(words)
    for j in range(n):
        col = A.column_values(j)
        nz = np.nonzero(col[r:])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        piv = int(col[i])
        if piv != 1:
            A.scale_row(i, ctx.inv(piv))
        if i != r:
            A.swap_rows(i, r)
        table = _table_words(ctx, words[r], counters)
        x = A.column_values(j)
        x[r] = 0
        if not full:
            x[:r] = 0
        np.take(table, x, axis=0, out=buf)
        words ^= buf
        r += 1
        if r == m:
            break
    return r


def nj_ple(A: PackedMatrix, counters: RowOpCounters | None = None):
    """In-place PLE decomposition (table-based, quadratic).

    Returns (P, Q, r): LAPACK-style row and column swap vectors of
    length min(m, n) and the rank.  Afterwards A holds L strictly below
    the main diagonal of its leading r columns with the original pivot
    values on the diagonal, and the rows of E (leading entries rescaled
    to 1, stored implicitly) on and above.  Elimination additions start
    one column right of the pivot so the multipliers stay in place, and
    a final sweep of column swaps below and on the diagonal compresses L
    into the leading r columns.
    """
    m, n = A.nrows, A.ncols
    k = min(m, n)
    P = np.arange(k, dtype=np.int64)
    Q = np.arange(k, dtype=np.int64)
    if k == 0:
        return P, Q, 0
    ctx = A.ctx
    w = A.w
    words = A.storage.words
    width = words.shape[1]
    buf = np.empty_like(words)
    r = 0
    for j in range(n):
        col = A.column_values(j)
        nz = np.nonzero(col[r:])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        piv = int(col[i])
        P[r] = i
        Q[r] = j
        if i != r:
            A.swap_rows(i, r)
        # rescale only the suffix right of the pivot; the pivot entry
        # stays put as the diagonal of L
        keep = suffix_mask(width, (j + 1) * w)
        if piv != 1:
            scaled = scale_words(ctx, ctx.inv(piv), words[r : r + 1])[0]
            words[r] = (words[r] & ~keep) | (scaled & keep)
        src = words[r] & keep
        table = _table_words(ctx, src, counters)
        x = A.column_values(j)
        x[: r + 1] = 0
        np.take(table, x, axis=0, out=buf)
        words ^= buf
        r += 1
        if r == k:
            break
    for t in range(r):
        if Q[t] != t:
            A.col_swap(t, int(Q[t]), row_start=t)
    return P, Q, r


def nj_trsm_upper_left(U: PackedMatrix, B: PackedMatrix,
                       counters: RowOpCounters | None = None) -> None:
    """Solve U * X = B for upper triangular U, storing X in B.

    Walks the rows bottom-up; each solved row is expanded into a table
    so the rows above need one lookup-XOR each.  Raises
    SingularMatrixError naming the first zero diagonal index.
    """
    if U.ctx != B.ctx:
        raise ValueError(f"field mismatch: {U.ctx} vs {B.ctx}")
    m = U.nrows
    if U.ncols != m:
        raise ValueError(f"triangular factor must be square, got {U.nrows}x{U.ncols}")
    if B.nrows != m:
        raise ValueError(f"dimension mismatch: {m}x{m} solve against {B.nrows} rows")
    diag = [U.get(i, i) for i in range(m)]
    for i, d in enumerate(diag):
        if d == 0:
            raise SingularMatrixError(i)
    ctx = U.ctx
    bw = B.storage.words
    for i in range(m - 1, -1, -1):
        if diag[i] != 1:
            B.scale_row(i, ctx.inv(diag[i]))
        if i == 0:
            break
        table = _table_words(ctx, bw[i], counters)
        x = U.column_values(i)[:i]
        bw[:i] ^= np.take(table, x, axis=0)
