"""Arithmetic for the binary extension fields GF(2^e), 2 <= e <= 10.

A field element is an integer in [0, 2^e) whose binary digits are the
coefficients of its polynomial representative, so 0b110 stands for
x^2 + x.  Addition is XOR.  Multiplication and inversion go through
dense lookup tables built once per field from a carry-less multiply
reduced modulo an irreducible polynomial f of degree e; the generator
alpha is the class of x, i.e. the integer 2.
"""

from __future__ import annotations

import numpy as np

MIN_DEGREE = 2
MAX_DEGREE = 10

# Minimal-weight irreducible polynomials, one per supported degree,
# encoded with bit i holding the coefficient of x^i.  Every entry is
# re-checked for irreducibility by FieldCtx, so a bad entry cannot go
# unnoticed.
DEFAULT_POLYS = {
    2: 0b111,           # x^2 + x + 1
    3: 0b1011,          # x^3 + x + 1
    4: 0b10011,         # x^4 + x + 1
    5: 0b100101,        # x^5 + x^2 + 1
    6: 0b1000011,       # x^6 + x + 1
    7: 0b10000011,      # x^7 + x + 1
    8: 0b100011101,     # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,    # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
}


def poly_degree(p: int) -> int:
    """Degree of a GF(2) polynomial given as a bit vector (-1 for 0)."""
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def poly_mod(a: int, m: int) -> int:
    """Remainder of a modulo m over GF(2); m must be nonzero."""
    dm = poly_degree(m)
    while poly_degree(a) >= dm:
        a ^= m << (poly_degree(a) - dm)
    return a


def is_irreducible(f: int) -> bool:
    """Trial division by every polynomial of degree 1 .. deg(f)//2."""
    d = poly_degree(f)
    if d < 1:
        return False
    if d == 1:
        return True
    if f & 1 == 0:  # divisible by x
        return False
    for g in range(2, 1 << (d // 2 + 1)):
        if poly_degree(g) >= 1 and poly_mod(f, g) == 0:
            return False
    return True


def is_primitive(f: int) -> bool:
    """True when x generates the full multiplicative group modulo f.

    Assumes f irreducible.  Walks the powers of x; the order of x must
    be exactly 2^deg(f) - 1.
    """
    e = poly_degree(f)
    group_order = (1 << e) - 1
    val = 2 % (1 << e) if e > 1 else 1
    acc = val
    for k in range(1, group_order):
        if acc == 1:
            return False
        acc = poly_mod(poly_mul(acc, 2), f)
    return acc == 1


def _build_tables(e: int, f: int) -> tuple[np.ndarray, np.ndarray]:
    """Full multiplication and inverse tables via vectorized clmul + reduce."""
    q = 1 << e
    a = np.arange(q, dtype=np.uint32)[:, None]
    b = np.arange(q, dtype=np.uint32)[None, :]
    prod = np.zeros((q, q), dtype=np.uint32)
    for k in range(e):
        prod ^= ((a >> k) & 1) * (b << k)
    for d in range(2 * e - 2, e - 1, -1):
        carry = (prod >> d) & 1
        prod ^= carry * np.uint32(f << (d - e))
    mul_table = prod.astype(np.uint16)
    ones_a, ones_b = np.nonzero(mul_table == 1)
    inv_table = np.zeros(q, dtype=np.uint16)
    inv_table[ones_a] = ones_b
    return mul_table, inv_table


class FieldCtx:
    """One GF(2^e) field: modulus, multiplication and inverse tables.

    Instances are immutable after construction (the scale-table cache
    used by packed scalar multiplication is append-only) and safe to
    share across threads.

    Attributes:
        e: extension degree.
        f: irreducible modulus polynomial as an (e+1)-bit integer.
        order: number of field elements, 2^e.
        mul_table: (2^e, 2^e) uint16 array of products.
        inv_table: 2^e uint16 array; inv_table[0] is 0 and unused.
        alpha_pow: tuple of alpha^0 .. alpha^(e-1) as integers.
    """

    def __init__(self, e: int, f: int | None = None):
        if not MIN_DEGREE <= e <= MAX_DEGREE:
            raise ValueError(
                f"extension degree must be in {MIN_DEGREE}..{MAX_DEGREE}, got {e}"
            )
        if f is None:
            f = DEFAULT_POLYS[e]
        if poly_degree(f) != e:
            raise ValueError(
                f"modulus 0x{f:x} has degree {poly_degree(f)}, expected {e}"
            )
        if not is_irreducible(f):
            raise ValueError(f"modulus 0x{f:x} is not irreducible over GF(2)")
        self.e = e
        self.f = f
        self.order = 1 << e
        self.mul_table, self.inv_table = _build_tables(e, f)
        self.alpha_pow = tuple(1 << k for k in range(e))
        # per-scalar tables for packed scalar multiplication, filled lazily
        self._scale_tables: dict[int, np.ndarray] = {}

    def mul(self, a: int, b: int) -> int:
        """Field product of two elements."""
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        """Multiplicative inverse of a nonzero element."""
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^e)")
        return int(self.inv_table[a])

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and self.e == other.e and self.f == other.f

    def __hash__(self) -> int:
        return hash((self.e, self.f))

    def __repr__(self) -> str:
        return f"FieldCtx(e={self.e}, f=0x{self.f:x})"


_FIELD_CACHE: dict[tuple[int, int], FieldCtx] = {}


def field_new(e: int, f: int | None = None) -> FieldCtx:
    """Return the (cached) GF(2^e) context for the given or default modulus."""
    if not MIN_DEGREE <= e <= MAX_DEGREE:
        raise ValueError(
            f"extension degree must be in {MIN_DEGREE}..{MAX_DEGREE}, got {e}"
        )
    key = (e, DEFAULT_POLYS[e] if f is None else f)
    ctx = _FIELD_CACHE.get(key)
    if ctx is None:
        ctx = FieldCtx(e, f)
        _FIELD_CACHE[key] = ctx
    return ctx
