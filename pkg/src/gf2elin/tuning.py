"""Default tuning knobs, all run-time overridable through parameters.

The values below are starting points chosen on commodity x86-64; every
algorithm is bit-exact for any positive setting, so these only affect
speed.  The CLI additionally honours the GF2E_CROSSOVER environment
variable as a global crossover override.
"""

# Strassen-Winograd over raw GF(2) matrices switches to Gray-table base
# cases at or below this dimension.
DEFAULT_GF2_MUL_CROSSOVER = 2048

# Gray-table group width (rows of B combined per table) for GF(2)
# multiplication.
DEFAULT_M4RM_BITS = 8

# Strassen-Winograd over packed GF(2^e) matrices with Newton-John base
# cases.
DEFAULT_PACKED_MUL_CROSSOVER = 256

# Recursive PLE / TRSM switch to their quadratic base cases at or below
# this dimension; also the point where multiplication updates move to
# the sliced Karatsuba backend.
DEFAULT_PLE_CROSSOVER = 64

# Simultaneous Newton-John tables (block width of the vectorized table
# builder).  1 reproduces the single-table algorithm exactly; raising it
# only batches work.
DEFAULT_NJ_TABLE_COUNT = 8
