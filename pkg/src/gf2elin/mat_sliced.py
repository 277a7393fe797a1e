"""Bit-sliced GF(2^e) matrices: e GF(2) coefficient planes.

A SlicedMatrix holds one BitMatrix per polynomial degree; slice k stores
the x^k coefficient of every entry, so the matrix reads as a polynomial
with GF(2)-matrix coefficients.  Converting a packed matrix to slices is
"slicing"; the inverse is "clinging".  Addition is slicewise XOR.

Only addition and multiplication by the generator alpha (that is, by x,
with reduction modulo the field polynomial) are provided in sliced form;
general scalar multiplication routes through the packed representation.
"""

from __future__ import annotations

import numpy as np

from .gf2e import FieldCtx
from .mat_gf2 import BitMatrix
from .mat_packed import PackedMatrix


class SlicedMatrix:
    """GF(2^e) matrix stored as e coefficient slices of equal shape."""

    __slots__ = ("ctx", "nrows", "ncols", "slices")

    def __init__(self, ctx: FieldCtx, nrows: int, ncols: int,
                 slices: list[BitMatrix] | None = None):
        self.ctx = ctx
        self.nrows = nrows
        self.ncols = ncols
        if slices is None:
            slices = [BitMatrix(nrows, ncols) for _ in range(ctx.e)]
        if len(slices) != ctx.e or any(s.shape != (nrows, ncols) for s in slices):
            raise ValueError("need e slices of identical shape")
        self.slices = slices

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SlicedMatrix)
            and self.ctx == other.ctx
            and self.shape == other.shape
            and all(a == b for a, b in zip(self.slices, other.slices))
        )

    def __repr__(self) -> str:
        return f"SlicedMatrix(GF(2^{self.ctx.e}), {self.nrows}x{self.ncols})"

    def copy(self) -> "SlicedMatrix":
        return SlicedMatrix(self.ctx, self.nrows, self.ncols,
                            [s.copy() for s in self.slices])

    def get(self, i: int, j: int) -> int:
        return sum(s.get(i, j) << k for k, s in enumerate(self.slices))

    def set(self, i: int, j: int, value: int) -> None:
        if not 0 <= value < self.ctx.order:
            raise ValueError(f"element {value} out of range for GF(2^{self.ctx.e})")
        for k, s in enumerate(self.slices):
            s.set(i, j, (value >> k) & 1)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint16)
        for k, s in enumerate(self.slices):
            out |= s.to_array().astype(np.uint16) << k
        return out

    def swap_rows(self, i: int, j: int) -> None:
        for s in self.slices:
            s.swap_rows(i, j)

    row_swap = swap_rows

    def col_swap(self, c1: int, c2: int, row_start: int = 0) -> None:
        for s in self.slices:
            s.col_swap(c1, c2, row_start)

    def _check_compat(self, other: "SlicedMatrix") -> None:
        if self.ctx != other.ctx:
            raise ValueError(f"field mismatch: {self.ctx} vs {other.ctx}")
        if self.shape != other.shape:
            raise ValueError(f"dimension mismatch: {self.shape} vs {other.shape}")

    def add(self, other: "SlicedMatrix") -> "SlicedMatrix":
        """Slicewise XOR."""
        self._check_compat(other)
        return SlicedMatrix(self.ctx, self.nrows, self.ncols,
                            [a.add(b) for a, b in zip(self.slices, other.slices)])

    __xor__ = add


def slice_packed(A: PackedMatrix) -> SlicedMatrix:
    """Transpose a packed matrix into its e coefficient slices."""
    arr = A.to_array()
    slices = [BitMatrix.from_array((arr >> k) & 1) for k in range(A.ctx.e)]
    return SlicedMatrix(A.ctx, A.nrows, A.ncols, slices)


def cling(S: SlicedMatrix) -> PackedMatrix:
    """Inverse of slicing: rebuild the packed matrix from the slices."""
    return PackedMatrix.from_array(S.ctx, S.to_array())


def mul_by_x(S: SlicedMatrix) -> SlicedMatrix:
    """Multiply every entry by alpha (the class of x), reducing mod f.

    The slices shift up one degree; the overflowing top slice folds back
    into the slices picked out by the low coefficients of f.
    """
    e = S.ctx.e
    top = S.slices[e - 1]
    out = [BitMatrix(S.nrows, S.ncols)]
    out.extend(S.slices[k - 1].copy() for k in range(1, e))
    for k in range(e):
        if (S.ctx.f >> k) & 1:
            out[k].iadd(top)
    return SlicedMatrix(S.ctx, S.nrows, S.ncols, out)
