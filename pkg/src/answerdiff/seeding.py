"""Deterministic 64-bit seed derivation (splitmix64 mixing).

Every tree in a forest draws from its own generator seeded by
``derive_seed(master, label_index, tree_index)``, so training order and
thread count cannot change the result.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(*parts: int) -> int:
    """Mix integer parts into a single 64-bit seed, order-sensitively."""
    state = 0
    for part in parts:
        state = splitmix64(state ^ (int(part) & _MASK))
    return state
