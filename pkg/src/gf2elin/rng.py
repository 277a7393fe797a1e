"""Deterministic, platform-independent pseudo-randomness for fixtures.

Uses the splitmix64 mixing function (Steele, Lea & Flood constants:
increment 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB) applied counter-style: value i of seed s is
mix(s + (i+1) * GOLDEN).  The same (seed, index) pair yields the same
64-bit word on every platform, which keeps test fixtures and CLI
`random` output stable.  Never uses the OS RNG.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def word_stream(seed: int, count: int) -> np.ndarray:
    """Return `count` pseudo-random uint64 words for the given seed."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return z


def element_stream(seed: int, count: int, e: int) -> np.ndarray:
    """Return `count` uniform field elements in [0, 2^e) as uint16."""
    words = word_stream(seed, count)
    mask = np.uint64((1 << e) - 1)
    return (words & mask).astype(np.uint16)
