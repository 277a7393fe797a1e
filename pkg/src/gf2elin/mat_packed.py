"""Bit-packed GF(2^e) matrices.

Each element occupies w consecutive bits of a 64-bit word where w is the
smallest divisor of 64 with w >= e, so slots never straddle word
boundaries and the unused top w - e bits of every slot stay zero.  The
storage itself is one BitMatrix of nrows x (ncols * w) bits, so additions
are plain word XOR sweeps that ignore element boundaries.

Scalar multiplication rewrites whole words through a 256-entry table
mapping a packed byte to its scaled packed byte (built once per scalar
per field); for w = 16 the uint16 view is scaled through the field's
multiplication table row directly.
"""

from __future__ import annotations

import numpy as np

from . import rng
from .gf2e import FieldCtx
from .mat_gf2 import BitMatrix, suffix_mask

_PACK_WIDTHS = (1, 2, 4, 8, 16, 32, 64)


def pack_width(e: int) -> int:
    """Smallest divisor of 64 that fits an e-bit element."""
    if not 2 <= e <= 10:
        raise ValueError(f"extension degree must be in 2..10, got {e}")
    for w in _PACK_WIDTHS:
        if w >= e:
            return w
    raise AssertionError("unreachable")


def _scale_table(ctx: FieldCtx, c: int) -> np.ndarray:
    """Byte (or uint16) lookup table scaling packed slots by the scalar c."""
    table = ctx._scale_tables.get(c)
    if table is not None:
        return table
    w = pack_width(ctx.e)
    emask = ctx.order - 1
    row = ctx.mul_table[c]
    if w <= 8:
        vals = np.arange(256, dtype=np.uint16)
        out = np.zeros(256, dtype=np.uint16)
        for s in range(8 // w):
            el = (vals >> (s * w)) & ((1 << w) - 1)
            out |= row[el & emask].astype(np.uint16) << (s * w)
        table = out.astype(np.uint8)
    else:
        table = row.copy()
    ctx._scale_tables[c] = table
    return table


def scale_words(ctx: FieldCtx, c: int, words: np.ndarray) -> np.ndarray:
    """Return a scaled copy of packed uint64 storage words."""
    w = pack_width(ctx.e)
    table = _scale_table(ctx, c)
    if w <= 8:
        scaled = table[words.view(np.uint8)]
        return scaled.view(np.uint64)
    u16 = words.view(np.uint16)
    scaled = table[u16 & np.uint16(ctx.order - 1)]
    return scaled.view(np.uint64)


class PackedMatrix:
    """GF(2^e) matrix with w-bit packed elements over a BitMatrix."""

    __slots__ = ("ctx", "nrows", "ncols", "w", "storage")

    def __init__(self, ctx: FieldCtx, nrows: int, ncols: int,
                 storage: BitMatrix | None = None):
        self.ctx = ctx
        self.nrows = nrows
        self.ncols = ncols
        self.w = pack_width(ctx.e)
        if storage is None:
            storage = BitMatrix(nrows, ncols * self.w)
        elif storage.shape != (nrows, ncols * self.w):
            raise ValueError("backing BitMatrix has the wrong shape")
        self.storage = storage

    # -- construction ----------------------------------------------------------

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "PackedMatrix":
        out = cls(ctx, n, n)
        for i in range(n):
            out.set(i, i, 1)
        return out

    @classmethod
    def from_array(cls, ctx: FieldCtx, arr) -> "PackedMatrix":
        """Build from an (m, n) array of field elements (< 2^e)."""
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        if arr.size and int(arr.max()) >= ctx.order:
            raise ValueError(f"element {int(arr.max())} out of range for GF(2^{ctx.e})")
        m, n = arr.shape
        w = pack_width(ctx.e)
        if m == 0 or n == 0:
            return cls(ctx, m, n)
        bits = np.zeros((m, n, w), dtype=np.uint8)
        a = arr.astype(np.uint16)
        for k in range(ctx.e):
            bits[:, :, k] = (a >> k) & 1
        storage = BitMatrix.from_array(bits.reshape(m, n * w))
        return cls(ctx, m, n, storage)

    def to_array(self) -> np.ndarray:
        """Return an (m, n) uint16 array of element values."""
        if self.nrows == 0 or self.ncols == 0:
            return np.zeros((self.nrows, self.ncols), dtype=np.uint16)
        bits = self.storage.to_array().reshape(self.nrows, self.ncols, self.w)
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint16)
        for k in range(self.ctx.e):
            out |= bits[:, :, k].astype(np.uint16) << k
        return out

    def copy(self) -> "PackedMatrix":
        return PackedMatrix(self.ctx, self.nrows, self.ncols, self.storage.copy())

    # -- protocol ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PackedMatrix)
            and self.ctx == other.ctx
            and self.shape == other.shape
            and self.storage == other.storage
        )

    def __repr__(self) -> str:
        return f"PackedMatrix(GF(2^{self.ctx.e}), {self.nrows}x{self.ncols})"

    def _check_index(self, i: int, j: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"index ({i}, {j}) outside {self.nrows}x{self.ncols}")

    def get(self, i: int, j: int) -> int:
        self._check_index(i, j)
        wrd, s = divmod(j * self.w, 64)
        return int((self.storage.words[i, wrd] >> np.uint64(s)) & np.uint64((1 << self.w) - 1))

    def set(self, i: int, j: int, value: int) -> None:
        self._check_index(i, j)
        if not 0 <= value < self.ctx.order:
            raise ValueError(f"element {value} out of range for GF(2^{self.ctx.e})")
        wrd, s = divmod(j * self.w, 64)
        slot = np.uint64((1 << self.w) - 1) << np.uint64(s)
        self.storage.words[i, wrd] = (self.storage.words[i, wrd] & ~slot) | (
            np.uint64(value) << np.uint64(s)
        )

    def column_values(self, j: int) -> np.ndarray:
        """All elements of column j as a uint16 vector (one shift per call;
        slots never straddle words)."""
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} outside 0..{self.ncols - 1}")
        wrd, s = divmod(j * self.w, 64)
        col = (self.storage.words[:, wrd] >> np.uint64(s)) & np.uint64((1 << self.w) - 1)
        return col.astype(np.uint16)

    # -- arithmetic ----------------------------------------------------------------

    def _check_compat(self, other: "PackedMatrix") -> None:
        if self.ctx != other.ctx:
            raise ValueError(f"field mismatch: {self.ctx} vs {other.ctx}")
        if self.shape != other.shape:
            raise ValueError(f"dimension mismatch: {self.shape} vs {other.shape}")

    def add(self, other: "PackedMatrix") -> "PackedMatrix":
        """Entrywise field addition: one XOR sweep over the packed words."""
        self._check_compat(other)
        return PackedMatrix(self.ctx, self.nrows, self.ncols,
                            self.storage.add(other.storage))

    __xor__ = add

    def iadd(self, other: "PackedMatrix") -> None:
        self._check_compat(other)
        self.storage.iadd(other.storage)

    def scalar_mul(self, c: int) -> "PackedMatrix":
        """Every entry multiplied by the scalar c."""
        if not 0 <= c < self.ctx.order:
            raise ValueError(f"scalar {c} out of range for GF(2^{self.ctx.e})")
        out = PackedMatrix(self.ctx, self.nrows, self.ncols)
        if self.nrows and self.ncols:
            out.storage.words[:] = scale_words(self.ctx, c, self.storage.words)
        return out

    def scale_row(self, i: int, c: int) -> None:
        """In-place multiplication of row i by the scalar c."""
        self._check_index(i, 0) if self.ncols else None
        row = self.storage.words[i : i + 1]
        row[:] = scale_words(self.ctx, c, row)

    def is_zero(self) -> bool:
        return self.storage.is_zero()

    # -- plumbing shared with BitMatrix ------------------------------------------

    def swap_rows(self, i: int, j: int) -> None:
        self.storage.swap_rows(i, j)

    row_swap = swap_rows

    def col_swap(self, c1: int, c2: int, row_start: int = 0) -> None:
        """Swap element columns c1 and c2 on rows >= row_start."""
        if not (0 <= c1 < self.ncols and 0 <= c2 < self.ncols):
            raise IndexError(f"column index outside 0..{self.ncols - 1}")
        if c1 == c2 or row_start >= self.nrows:
            return
        w = self.w
        mask = np.uint64((1 << w) - 1)
        w1, s1 = divmod(c1 * w, 64)
        w2, s2 = divmod(c2 * w, 64)
        rows = self.storage.words[row_start:]
        f1 = (rows[:, w1] >> np.uint64(s1)) & mask
        f2 = (rows[:, w2] >> np.uint64(s2)) & mask
        diff = f1 ^ f2
        rows[:, w1] ^= diff << np.uint64(s1)
        rows[:, w2] ^= diff << np.uint64(s2)

    def copy_window(self, top: int, left: int, nrows: int, ncols: int) -> "PackedMatrix":
        sub = self.storage.copy_window(top, left * self.w, nrows, ncols * self.w)
        return PackedMatrix(self.ctx, nrows, ncols, sub)

    def paste_window(self, top: int, left: int, other: "PackedMatrix") -> None:
        if self.ctx != other.ctx:
            raise ValueError(f"field mismatch: {self.ctx} vs {other.ctx}")
        self.storage.paste_window(top, left * self.w, other.storage)

    def xor_window(self, top: int, left: int, other: "PackedMatrix") -> None:
        if self.ctx != other.ctx:
            raise ValueError(f"field mismatch: {self.ctx} vs {other.ctx}")
        self.storage.xor_window(top, left * self.w, other.storage)

    def mask_columns_below(self, i: int, first_col: int) -> None:
        """Zero the entries of row i in columns < first_col."""
        keep = suffix_mask(self.storage.words.shape[1], first_col * self.w)
        self.storage.words[i] &= keep

    def randomize(self, seed: int) -> None:
        """Fill with reproducible pseudo-random field elements."""
        if self.nrows == 0 or self.ncols == 0:
            return
        elems = rng.element_stream(seed, self.nrows * self.ncols, self.ctx.e)
        fresh = PackedMatrix.from_array(self.ctx, elems.reshape(self.nrows, self.ncols))
        self.storage.words[:] = fresh.storage.words

    @classmethod
    def random(cls, ctx: FieldCtx, nrows: int, ncols: int, seed: int) -> "PackedMatrix":
        out = cls(ctx, nrows, ncols)
        out.randomize(seed)
        return out
