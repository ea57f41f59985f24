"""Seeded, portable pseudo-random generator used for every random decision.

All shuffles and tie-break draws flow through SplitMix64 so that a fold
assignment is reproducible bit-for-bit across platforms and across the
compiled/pure kernel backends. The generator id below is recorded in
exported manifests.
"""

from __future__ import annotations

GENERATOR_ID = "splitmix64-v1"

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 stream (Steele, Lea & Flood 2014), 64-bit state.

    Chosen for portability: the update is a handful of exact 64-bit
    integer ops, trivially replicated in C for the compiled kernel.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        """Draw from [0, n). Plain modulo; bias is irrelevant at our n."""
        if n <= 0:
            raise ValueError(f"next_below needs n >= 1, got {n}")
        return self.next_u64() % n

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle driven by this stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]
