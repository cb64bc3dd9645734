"""Seeded deterministic PRNG.

SplitMix64 is used for every random choice in the package so that any
artifact (an image, a model, a challenge) is reproducible bit-for-bit
from its seed, on any platform.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class Rng:
    """SplitMix64 generator. State is a single 64-bit word."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        """Advance the state and return the next 64-bit output."""
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) / 9007199254740992.0  # 2**53

    def next_below(self, k: int) -> int:
        """Uniform integer in [0, k). k must be positive."""
        if k <= 0:
            raise ValueError(f"next_below needs k >= 1, got {k}")
        return int(self.next_float() * k)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Rng(state=0x{self.state:016x})"
