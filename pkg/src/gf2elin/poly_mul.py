"""Multiplication backends above the quadratic base cases.

Two routes to a GF(2^e) matrix product:

* Strassen-Winograd recursion directly on packed matrices, peeling odd
  fringes and dropping to table-based multiplication at the crossover.

* Karatsuba on the sliced representation: treat both operands as
  polynomials with GF(2)-matrix coefficients, multiply the polynomials
  with recursively applied Karatsuba splits (a dedicated six-product
  formula for three terms), and fold the degree-(2e-2) result back to
  degree < e with the field polynomial.

A MulCounters threaded through either route records how many base GF(2)
matrix products and matrix additions were performed, which is how the
per-field product counts are asserted.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import mat_gf2
from .gf2e import FieldCtx
from .mat_gf2 import BitMatrix
from .mat_packed import PackedMatrix
from .mat_sliced import SlicedMatrix, cling, slice_packed
from .newton_john import nj_mul, _check_mul_operands
from .tuning import DEFAULT_PACKED_MUL_CROSSOVER


@dataclass
class MulCounters:
    """Operation counts accumulated over one multiplication call."""

    gf2_matmul_count: int = 0
    additions: int = 0
    peak_live_products: int = 0

    def reset(self) -> None:
        self.gf2_matmul_count = 0
        self.additions = 0
        self.peak_live_products = 0


# -- Strassen-Winograd over packed matrices ---------------------------------------


def _strassen_packed(A: PackedMatrix, B: PackedMatrix, crossover: int,
                     counters: MulCounters | None) -> PackedMatrix:
    m, inner, n = A.nrows, A.ncols, B.ncols
    if min(m, inner, n) <= crossover:
        return nj_mul(A, B)
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
    if counters is not None:
        counters.additions += 8

    p1 = _strassen_packed(a11, b11, crossover, counters)
    p2 = _strassen_packed(a12, b21, crossover, counters)
    p3 = _strassen_packed(s4, b22, crossover, counters)
    p4 = _strassen_packed(a22, t4, crossover, counters)
    p5 = _strassen_packed(s1, t1, crossover, counters)
    p6 = _strassen_packed(s2, t2, crossover, counters)
    p7 = _strassen_packed(s3, t3, crossover, counters)

    u2 = p1 ^ p6
    u3 = u2 ^ p7
    u4 = u2 ^ p5
    if counters is not None:
        counters.additions += 7

    C = PackedMatrix(A.ctx, m, n)
    C.paste_window(0, 0, p1 ^ p2)
    C.paste_window(0, hn, u4 ^ p3)
    C.paste_window(hm, 0, u3 ^ p4)
    C.paste_window(hm, hn, u3 ^ p5)

    if inner != i2:
        C.xor_window(0, 0, nj_mul(A.copy_window(0, i2, m2, inner - i2),
                                  B.copy_window(i2, 0, inner - i2, n2)))
    if n != n2:
        C.paste_window(0, n2, nj_mul(A.copy_window(0, 0, m2, inner),
                                     B.copy_window(0, n2, inner, n - n2)))
    if m != m2:
        C.paste_window(m2, 0, nj_mul(A.copy_window(m2, 0, m - m2, inner), B))
    return C


def strassen_nj_mul(A: PackedMatrix, B: PackedMatrix,
                    crossover: int | None = None,
                    counters: MulCounters | None = None) -> PackedMatrix:
    """Strassen-Winograd product with table-based base cases.

    Odd rows and columns are peeled off and fixed up with base-case
    products of the trimmed strips; the even-dimension halves recurse
    until they fit the crossover.  Bit-identical to nj_mul for every
    crossover setting.
    """
    _check_mul_operands(A, B)
    cx = DEFAULT_PACKED_MUL_CROSSOVER if crossover is None else crossover
    if cx < 1:
        raise ValueError(f"crossover must be >= 1, got {cx}")
    return _strassen_packed(A, B, cx, counters)


# -- Karatsuba over sliced matrices -------------------------------------------------


class _LiveProducts:
    """High-water mark of simultaneously held product matrices."""

    __slots__ = ("live", "peak")

    def __init__(self):
        self.live = 0
        self.peak = 0

    def grab(self, k: int = 1) -> None:
        self.live += k
        if self.live > self.peak:
            self.peak = self.live

    def drop(self, k: int = 1) -> None:
        self.live -= k


def _base_product(a: BitMatrix, b: BitMatrix, counters: MulCounters | None,
                  live: _LiveProducts) -> BitMatrix:
    out = mat_gf2.mul(a, b, counters=counters)
    live.grab()
    return out


def _add_lists(xs: list[BitMatrix], ys: list[BitMatrix],
               counters: MulCounters | None) -> list[BitMatrix]:
    """Coefficient-wise XOR of two slice polynomials of any lengths."""
    if len(xs) < len(ys):
        xs, ys = ys, xs
    out = [x.copy() for x in xs]
    for k, y in enumerate(ys):
        out[k].iadd(y)
    if counters is not None:
        counters.additions += len(ys)
    return out


def _kara(a: list[BitMatrix], b: list[BitMatrix], counters: MulCounters | None,
          live: _LiveProducts) -> list[BitMatrix]:
    """Product of two slice polynomials, recursively split.

    One term multiplies directly; three terms use the six-product
    formula; longer polynomials split into ceil(k/2) low and floor(k/2)
    high terms and recurse three times.  Products are never skipped, so
    the count is a deterministic function of the lengths alone.
    """
    ka, kb = len(a), len(b)
    if ka != kb:
        raise ValueError("slice polynomials must have equal length")
    if ka == 1:
        return [_base_product(a[0], b[0], counters, live)]
    if ka == 3:
        d0 = _base_product(a[0], b[0], counters, live)
        d1 = _base_product(a[1], b[1], counters, live)
        d2 = _base_product(a[2], b[2], counters, live)
        d01 = _base_product(a[0] ^ a[1], b[0] ^ b[1], counters, live)
        d02 = _base_product(a[0] ^ a[2], b[0] ^ b[2], counters, live)
        d12 = _base_product(a[1] ^ a[2], b[1] ^ b[2], counters, live)
        c1 = d01 ^ d0 ^ d1
        c2 = d02 ^ d0 ^ d1 ^ d2
        c3 = d12 ^ d1 ^ d2
        if counters is not None:
            counters.additions += 6 + 7
        live.drop(6)
        live.grab(5)
        return [d0, c1, c2, c3, d2]
    h = (ka + 1) // 2
    a_lo, a_hi = a[:h], a[h:]
    b_lo, b_hi = b[:h], b[h:]
    lo = _kara(a_lo, b_lo, counters, live)
    hi = _kara(a_hi, b_hi, counters, live)
    mid = _kara(_add_lists(a_lo, a_hi, counters),
                _add_lists(b_lo, b_hi, counters), counters, live)
    # mid := (lo + hi) + (a_lo + a_hi)(b_lo + b_hi), shifted by h
    for k, x in enumerate(lo):
        mid[k].iadd(x)
    for k, x in enumerate(hi):
        mid[k].iadd(x)
    if counters is not None:
        counters.additions += len(lo) + len(hi)
    out = [BitMatrix(a[0].nrows, b[0].ncols) for _ in range(ka + kb - 1)]
    for k, x in enumerate(lo):
        out[k].iadd(x)
    for k, x in enumerate(mid):
        out[h + k].iadd(x)
    for k, x in enumerate(hi):
        out[2 * h + k].iadd(x)
    if counters is not None:
        counters.additions += len(lo) + len(mid) + len(hi)
    live.drop(len(lo) + len(hi) + len(mid))
    live.grab(len(out))
    return out


def reduce_mod_f(slices: list[BitMatrix], ctx: FieldCtx,
                 counters: MulCounters | None = None) -> list[BitMatrix]:
    """Fold a degree-(2e-2) slice polynomial down to degree < e.

    For each degree d from 2e-2 down to e, slice d is added into the
    slices selected by the nonzero low coefficients of f, exactly the
    schoolbook reduction x^d = x^(d-e) * (f - x^e).
    """
    e = ctx.e
    if len(slices) != 2 * e - 1:
        raise ValueError(f"expected {2 * e - 1} coefficient slices, got {len(slices)}")
    work = [s.copy() for s in slices]
    low_bits = [k for k in range(e) if (ctx.f >> k) & 1]
    for d in range(2 * e - 2, e - 1, -1):
        top = work[d]
        for k in low_bits:
            work[d - e + k].iadd(top)
            if counters is not None:
                counters.additions += 1
    return work[:e]


def karatsuba_mul(A: SlicedMatrix, B: SlicedMatrix,
                  counters: MulCounters | None = None) -> SlicedMatrix:
    """GF(2^e) product via slice-polynomial Karatsuba plus reduction."""
    if A.ctx != B.ctx:
        raise ValueError(f"field mismatch: {A.ctx} vs {B.ctx}")
    if A.ncols != B.nrows:
        raise ValueError(
            f"inner dimensions differ: {A.nrows}x{A.ncols} times {B.nrows}x{B.ncols}"
        )
    live = _LiveProducts()
    prod = _kara(list(A.slices), list(B.slices), counters, live)
    if counters is not None and live.peak > counters.peak_live_products:
        counters.peak_live_products = live.peak
    reduced = reduce_mod_f(prod, A.ctx, counters)
    return SlicedMatrix(A.ctx, A.nrows, B.ncols, reduced)


def count_products(e: int, f: int | None = None) -> int:
    """Number of GF(2) matrix products one Karatsuba multiplication
    performs for this field, measured on a small probe."""
    from .gf2e import field_new

    ctx = field_new(e, f)
    probe_a = slice_packed(PackedMatrix.random(ctx, 4, 4, seed=11))
    probe_b = slice_packed(PackedMatrix.random(ctx, 4, 4, seed=12))
    counters = MulCounters()
    karatsuba_mul(probe_a, probe_b, counters)
    return counters.gf2_matmul_count


def karatsuba_mul_packed(A: PackedMatrix, B: PackedMatrix,
                         counters: MulCounters | None = None) -> PackedMatrix:
    """Convenience wrapper: slice, multiply, cling back to packed."""
    return cling(karatsuba_mul(slice_packed(A), slice_packed(B), counters))
