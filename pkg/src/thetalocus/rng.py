"""Portable 64-bit linear congruential generator.

Fixtures sampled with this generator are reproducible in any language that
has wrapping 64-bit unsigned arithmetic:

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64
    uniform() = (state >> 11) / 2**53          (state advanced first)

The seed is reduced mod 2**64 and used directly as the initial state.
"""

from __future__ import annotations

_MUL = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1


class LCG64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (_MUL * self.state + _INC) & _MASK
        return self.state

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return low + (high - low) * u

    def randbelow(self, n: int) -> int:
        """Integer in ``[0, n)`` taken from the high bits."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() >> 32) % n
