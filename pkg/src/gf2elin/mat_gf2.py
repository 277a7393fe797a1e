"""Dense GF(2) matrices packed 64 entries per 64-bit word.

Entry (i, j) lives in bit j % 64 (little-endian) of word j // 64 of row
i.  Bits past ncols in the last word of a row are kept zero after every
mutating operation, so word-level equality is matrix equality.  Word
arrays are viewed as uint8/uint16 in a few hot paths, which assumes a
little-endian host.

Multiplication offers three interchangeable strategies: a cubic
row-combination loop, Gray-code precomputation tables over groups of k
rows ("four Russians" style), and Strassen-Winograd recursion with odd
fringes peeled off.  All three are bit-exact.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from . import rng
from .tuning import DEFAULT_GF2_MUL_CROSSOVER, DEFAULT_M4RM_BITS

if sys.byteorder != "little":  # pragma: no cover
    raise ImportError("gf2elin requires a little-endian host")

_ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)
_ONE = np.uint64(1)


@dataclass
class RowOpCounters:
    """Instrumentation for row-level operation counts."""

    row_adds: int = 0
    scalar_row_muls: int = 0

    def reset(self) -> None:
        self.row_adds = 0
        self.scalar_row_muls = 0


def words_for(ncols: int) -> int:
    return (ncols + 63) >> 6


def tail_mask(ncols: int) -> np.uint64:
    r = ncols & 63
    return _ALL_ONES if r == 0 else np.uint64((1 << r) - 1)


def suffix_mask(nwords: int, start_bit: int) -> np.ndarray:
    """Per-word mask selecting all bits at positions >= start_bit."""
    starts = start_bit - 64 * np.arange(nwords)
    starts = np.clip(starts, 0, 64)
    mask = np.where(
        starts >= 64,
        np.uint64(0),
        _ALL_ONES << np.minimum(starts, 63).astype(np.uint64),
    )
    return mask.astype(np.uint64)


class BitMatrix:
    """A dense GF(2) matrix stored as an (nrows, words) uint64 array."""

    __slots__ = ("nrows", "ncols", "words")

    def __init__(self, nrows: int, ncols: int, words: np.ndarray | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        width = words_for(ncols)
        if words is None:
            self.words = np.zeros((nrows, width), dtype=np.uint64)
        else:
            if words.shape != (nrows, width) or words.dtype != np.uint64:
                raise ValueError("backing array has the wrong shape or dtype")
            self.words = words

    # -- construction helpers ------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        out = cls(n, n)
        for i in range(n):
            out.set(i, i, 1)
        return out

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        """Build from an (m, n) array of 0/1 values."""
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        m, n = arr.shape
        out = cls(m, n)
        if m and n:
            packed = np.packbits(arr.astype(np.uint8) & 1, axis=1, bitorder="little")
            out.words.view(np.uint8)[:, : packed.shape[1]] = packed
        return out

    def to_array(self) -> np.ndarray:
        """Return an (m, n) uint8 array of 0/1 entries."""
        if self.nrows == 0 or self.ncols == 0:
            return np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        bits = np.unpackbits(self.words.view(np.uint8), axis=1, bitorder="little")
        return np.ascontiguousarray(bits[:, : self.ncols])

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.nrows, self.ncols, self.words.copy())

    # -- basic protocol ------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.shape == other.shape
            and bool(np.array_equal(self.words, other.words))
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"

    def _check_index(self, i: int, j: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"index ({i}, {j}) outside {self.nrows}x{self.ncols}")

    def get(self, i: int, j: int) -> int:
        self._check_index(i, j)
        w, s = divmod(j, 64)
        return int((self.words[i, w] >> np.uint64(s)) & _ONE)

    def set(self, i: int, j: int, value: int) -> None:
        self._check_index(i, j)
        w, s = divmod(j, 64)
        bit = _ONE << np.uint64(s)
        if value & 1:
            self.words[i, w] |= bit
        else:
            self.words[i, w] &= ~bit

    # -- arithmetic ----------------------------------------------------------

    def add(self, other: "BitMatrix") -> "BitMatrix":
        """Entrywise XOR; dimensions must match."""
        if self.shape != other.shape:
            raise ValueError(f"dimension mismatch: {self.shape} vs {other.shape}")
        out = BitMatrix(self.nrows, self.ncols)
        np.bitwise_xor(self.words, other.words, out=out.words)
        return out

    __xor__ = add

    def iadd(self, other: "BitMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"dimension mismatch: {self.shape} vs {other.shape}")
        self.words ^= other.words

    def is_zero(self) -> bool:
        return not self.words.any()

    # -- row/column plumbing ---------------------------------------------------

    def swap_rows(self, i: int, j: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.nrows):
            raise IndexError(f"row index outside 0..{self.nrows - 1}")
        if i != j:
            self.words[[i, j]] = self.words[[j, i]]

    row_swap = swap_rows

    def col_swap(self, c1: int, c2: int, row_start: int = 0) -> None:
        """Swap columns c1 and c2, optionally only on rows >= row_start."""
        if not (0 <= c1 < self.ncols and 0 <= c2 < self.ncols):
            raise IndexError(f"column index outside 0..{self.ncols - 1}")
        if c1 == c2 or row_start >= self.nrows:
            return
        w1, s1 = divmod(c1, 64)
        w2, s2 = divmod(c2, 64)
        rows = self.words[row_start:]
        b1 = (rows[:, w1] >> np.uint64(s1)) & _ONE
        b2 = (rows[:, w2] >> np.uint64(s2)) & _ONE
        diff = b1 ^ b2
        rows[:, w1] ^= diff << np.uint64(s1)
        rows[:, w2] ^= diff << np.uint64(s2)

    def randomize(self, seed: int) -> None:
        """Fill with reproducible pseudo-random bits (see gf2elin.rng)."""
        m, width = self.words.shape
        if m == 0 or width == 0:
            return
        self.words[:] = rng.word_stream(seed, m * width).reshape(m, width)
        self.words[:, -1] &= tail_mask(self.ncols)

    @classmethod
    def random(cls, nrows: int, ncols: int, seed: int) -> "BitMatrix":
        out = cls(nrows, ncols)
        out.randomize(seed)
        return out

    # -- windows ---------------------------------------------------------------

    def _check_window(self, top: int, left: int, nrows: int, ncols: int) -> None:
        if nrows < 0 or ncols < 0:
            raise IndexError("window dimensions must be non-negative")
        if top < 0 or left < 0 or top + nrows > self.nrows or left + ncols > self.ncols:
            raise IndexError(
                f"window ({top},{left})+{nrows}x{ncols} outside {self.nrows}x{self.ncols}"
            )

    def copy_window(self, top: int, left: int, nrows: int, ncols: int) -> "BitMatrix":
        """Copy the sub-block with the given corner and extent."""
        self._check_window(top, left, nrows, ncols)
        out = BitMatrix(nrows, ncols)
        if nrows == 0 or ncols == 0:
            return out
        w0, s = divmod(left, 64)
        wout = out.words.shape[1]
        src = self.words[top : top + nrows]
        avail = src.shape[1] - w0
        take = min(wout, avail)
        if s == 0:
            out.words[:, :take] = src[:, w0 : w0 + take]
        else:
            out.words[:, :take] = src[:, w0 : w0 + take] >> np.uint64(s)
            nxt = src[:, w0 + 1 : w0 + 1 + wout]
            if nxt.shape[1]:
                out.words[:, : nxt.shape[1]] |= nxt << np.uint64(64 - s)
        out.words[:, -1] &= tail_mask(ncols)
        return out

    def _shifted_window_words(self, other: "BitMatrix", left: int) -> tuple[np.ndarray, int]:
        """Other's words aligned to bit offset `left`, plus the word span."""
        n = other.ncols
        w0, s = divmod(left, 64)
        span = (left + n - 1) // 64 - w0 + 1
        buf = np.zeros((other.nrows, span), dtype=np.uint64)
        ow = other.words
        if s == 0:
            buf[:, : ow.shape[1]] = ow
        else:
            buf[:, : ow.shape[1]] |= ow << np.uint64(s)
            buf[:, 1 : 1 + ow.shape[1]] |= ow >> np.uint64(64 - s)
        return buf, span

    def paste_window(self, top: int, left: int, other: "BitMatrix") -> None:
        """Overwrite the sub-block at (top, left) with `other`."""
        self._check_window(top, left, other.nrows, other.ncols)
        if other.nrows == 0 or other.ncols == 0:
            return
        buf, span = self._shifted_window_words(other, left)
        w0, s = divmod(left, 64)
        mask = np.zeros(span, dtype=np.uint64)
        mask[:] = _ALL_ONES
        mask[0] &= _ALL_ONES << np.uint64(s)
        end = s + other.ncols - 64 * (span - 1)
        if end < 64:
            mask[-1] &= np.uint64((1 << end) - 1)
        tgt = self.words[top : top + other.nrows, w0 : w0 + span]
        tgt &= ~mask
        tgt |= buf

    def xor_window(self, top: int, left: int, other: "BitMatrix") -> None:
        """XOR `other` into the sub-block at (top, left)."""
        self._check_window(top, left, other.nrows, other.ncols)
        if other.nrows == 0 or other.ncols == 0:
            return
        buf, span = self._shifted_window_words(other, left)
        w0 = left // 64
        self.words[top : top + other.nrows, w0 : w0 + span] ^= buf


# -- Gray-code combination tables ----------------------------------------------


def _subset_xor_table_gray(src: np.ndarray, k: int, counters: RowOpCounters | None):
    """All 2^k subset-XORs of the k source rows, built by a Gray-code walk.

    Each new row is one row addition away from the previous one, for
    exactly 2^k - 1 row additions in total.
    """
    table = np.zeros((1 << k, src.shape[1]), dtype=np.uint64)
    prev = 0
    for t in range(1, 1 << k):
        g = t ^ (t >> 1)
        bit = (g ^ prev).bit_length() - 1
        np.bitwise_xor(table[prev], src[bit], out=table[g])
        prev = g
    if counters is not None:
        counters.row_adds += (1 << k) - 1
    return table


def _subset_xor_table_batched(src: np.ndarray, k: int, counters: RowOpCounters | None):
    """Same table content as the Gray walk, built a power-of-two block at
    a time.  Performs the same 2^k - 1 row additions, batched."""
    table = np.zeros((1 << k, src.shape[1]), dtype=np.uint64)
    for bit in range(k):
        half = 1 << bit
        np.bitwise_xor(table[:half], src[bit], out=table[half : 2 * half])
    if counters is not None:
        counters.row_adds += (1 << k) - 1
    return table


def linear_combinations(M: BitMatrix, counters: RowOpCounters | None = None) -> BitMatrix:
    """Return the 2^e x n matrix whose row x is the XOR of M's rows
    selected by the set bits of x (row 0 is zero).

    M must have 1..10 rows.  Walks a Gray code, so building the table
    costs exactly 2^e - 1 row additions (reported via `counters`).
    """
    e = M.nrows
    if not 1 <= e <= 10:
        raise ValueError(f"need 1..10 source rows, got {e}")
    table = _subset_xor_table_gray(M.words, e, counters)
    return BitMatrix(1 << e, M.ncols, table)


# -- multiplication --------------------------------------------------------------


def _mul_cubic(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    C = BitMatrix(A.nrows, B.ncols)
    if A.nrows == 0 or A.ncols == 0 or B.ncols == 0:
        return C
    abits = A.to_array()
    for i in range(A.nrows):
        idx = np.nonzero(abits[i])[0]
        if idx.size:
            np.bitwise_xor.reduce(B.words[idx], axis=0, out=C.words[i])
    return C


def _m4rm_bits(inner: int, k: int | None) -> int:
    if k is not None:
        return max(1, min(10, k))
    return max(1, min(DEFAULT_M4RM_BITS, inner))


def _mul_m4rm(A: BitMatrix, B: BitMatrix, k: int | None = None) -> BitMatrix:
    """Gray-table multiplication: process k rows of B at a time and pick
    each output contribution with one table lookup per row of A."""
    C = BitMatrix(A.nrows, B.ncols)
    inner = A.ncols
    if A.nrows == 0 or inner == 0 or B.ncols == 0:
        return C
    k = _m4rm_bits(inner, k)
    abits = A.to_array()
    buf = np.empty_like(C.words)
    for c0 in range(0, inner, k):
        kk = min(k, inner - c0)
        table = _subset_xor_table_batched(B.words[c0 : c0 + kk], kk, None)
        idx = np.zeros(A.nrows, dtype=np.intp)
        for t in range(kk):
            idx |= abits[:, c0 + t].astype(np.intp) << t
        np.take(table, idx, axis=0, out=buf)
        C.words ^= buf
    return C


def _mul_strassen(A: BitMatrix, B: BitMatrix, crossover: int) -> BitMatrix:
    m, inner, n = A.nrows, A.ncols, B.ncols
    if min(m, inner, n) <= crossover:
        return _mul_m4rm(A, B)
    hm, hi, hn = m // 2, inner // 2, n // 2
    m2, i2, n2 = 2 * hm, 2 * hi, 2 * hn

    a11 = A.copy_window(0, 0, hm, hi)
    a12 = A.copy_window(0, hi, hm, hi)
    a21 = A.copy_window(hm, 0, hm, hi)
    a22 = A.copy_window(hm, hi, hm, hi)
    b11 = B.copy_window(0, 0, hi, hn)
    b12 = B.copy_window(0, hn, hi, hn)
    b21 = B.copy_window(hi, 0, hi, hn)
    b22 = B.copy_window(hi, hn, hi, hn)

    s1 = a21 ^ a22
    s2 = s1 ^ a11
    s3 = a11 ^ a21
    s4 = a12 ^ s2
    t1 = b12 ^ b11
    t2 = b22 ^ t1
    t3 = b22 ^ b12
    t4 = t2 ^ b21

    p1 = _mul_strassen(a11, b11, crossover)
    p2 = _mul_strassen(a12, b21, crossover)
    p3 = _mul_strassen(s4, b22, crossover)
    p4 = _mul_strassen(a22, t4, crossover)
    p5 = _mul_strassen(s1, t1, crossover)
    p6 = _mul_strassen(s2, t2, crossover)
    p7 = _mul_strassen(s3, t3, crossover)

    u2 = p1 ^ p6
    u3 = u2 ^ p7
    u4 = u2 ^ p5

    C = BitMatrix(m, n)
    C.paste_window(0, 0, p1 ^ p2)
    C.paste_window(0, hn, u4 ^ p3)
    C.paste_window(hm, 0, u3 ^ p4)
    C.paste_window(hm, hn, u3 ^ p5)

    # peeled fringes: odd inner column of A / row of B, odd last column
    # strip of B, odd last row strip of A
    if inner != i2:
        C.xor_window(0, 0, _mul_m4rm(A.copy_window(0, i2, m2, inner - i2),
                                     B.copy_window(i2, 0, inner - i2, n2)))
    if n != n2:
        C.paste_window(0, n2, _mul_m4rm(A.copy_window(0, 0, m2, inner),
                                        B.copy_window(0, n2, inner, n - n2)))
    if m != m2:
        C.paste_window(m2, 0, _mul_m4rm(A.copy_window(m2, 0, m - m2, inner), B))
    return C


def mul(
    A: BitMatrix,
    B: BitMatrix,
    strategy: str = "auto",
    crossover: int | None = None,
    m4rm_k: int | None = None,
    counters=None,
) -> BitMatrix:
    """GF(2) matrix product A * B.

    `strategy` is one of "auto", "cubic", "m4rm", "strassen"; all give
    bit-identical results.  "auto" uses Strassen above `crossover`
    (default 2048) with Gray-table base cases.  When a MulCounters is
    passed its gf2_matmul_count is incremented once for this product.
    """
    if A.ncols != B.nrows:
        raise ValueError(
            f"inner dimensions differ: {A.nrows}x{A.ncols} times {B.nrows}x{B.ncols}"
        )
    if counters is not None:
        counters.gf2_matmul_count += 1
    cx = DEFAULT_GF2_MUL_CROSSOVER if crossover is None else crossover
    if strategy == "auto":
        strategy = "strassen" if min(A.nrows, A.ncols, B.ncols) > cx else "m4rm"
    if strategy == "cubic":
        return _mul_cubic(A, B)
    if strategy == "m4rm":
        return _mul_m4rm(A, B, m4rm_k)
    if strategy == "strassen":
        return _mul_strassen(A, B, max(1, cx))
    raise ValueError(f"unknown multiplication strategy: {strategy!r}")
