"""Deterministic 64-bit generator behind every seeded scenario.

SplitMix64: the state advances by the golden-ratio increment
``0x9E3779B97F4A7C15`` and the output is two xorshift-multiply rounds
(constants ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``). The whole
algorithm is ten lines of integer arithmetic, so seeded scenarios can be
reproduced bit-for-bit from any language without importing this package.
"""

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform double in ``[lo, hi)`` from the top 53 bits."""
        u = (self.next_u64() >> 11) * 2.0**-53
        return lo + (hi - lo) * u

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` (modulo reduction; spans here
        are tiny relative to 2^64 so the bias is negligible)."""
        return lo + self.next_u64() % (hi - lo + 1)

    def sign(self) -> float:
        return 1.0 if (self.next_u64() >> 63) == 0 else -1.0

    def normal(self) -> float:
        """Standard normal via Box-Muller; one draw consumes two words."""
        u1 = ((self.next_u64() >> 11) + 1) * 2.0**-53  # (0, 1]
        u2 = (self.next_u64() >> 11) * 2.0**-53  # [0, 1)
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
