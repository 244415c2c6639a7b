"""Deterministic pseudo-random number generation.

The generators here are specified by algorithm (splitmix64 seeding a
xoshiro256** stream) rather than delegating to the platform RNG, so that
fixtures such as seeded random graphs can be replicated exactly by any
implementation that follows the same recipe.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class SplitMix64:
    """64-bit splitmix64 stream; used to expand seeds into generator state."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)


class Xoshiro256StarStar:
    """xoshiro256** generator seeded from a single 64-bit seed via splitmix64."""

    def __init__(self, seed: int) -> None:
        sm = SplitMix64(seed)
        self._s = [sm.next_uint64() for _ in range(4)]

    def next_uint64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) built from the top 53 bits."""
        return (self.next_uint64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randrange(self, k: int) -> int:
        """Integer in [0, k). k must be positive and small (no rejection)."""
        if k <= 0:
            raise ValueError("k must be positive")
        return int(self.random() * k)


def derive_seed(seed: int, index: int) -> int:
    """Derive an independent 64-bit stream seed from (seed, index).

    Used to give each trial or sub-component its own reproducible stream.
    """
    return _mix64((seed + (index + 1) * _GOLDEN) & _MASK64)
