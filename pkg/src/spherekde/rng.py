"""Portable seeded generator used for splits and samplers.

SplitMix64 (Steele, Lea and Flood): the state advances by the golden-ratio
increment 0x9E3779B97F4A7C15 modulo 2**64 and each output is

    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

with all arithmetic modulo 2**64. Doubles in [0, 1) are ``(z >> 11) * 2**-53``.
Any language with unsigned 64-bit integers reproduces the same streams.
"""

from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix(self.state)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def u64_array(self, k: int) -> np.ndarray:
        """The next ``k`` outputs as a uint64 array (same stream as ``next_u64``)."""
        steps = np.arange(1, k + 1, dtype=np.uint64)
        z = steps * np.uint64(GOLDEN_GAMMA) + np.uint64(self.state)
        self.state = (self.state + k * GOLDEN_GAMMA) & MASK64
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_2)
        return z ^ (z >> np.uint64(31))

    def uniform_array(self, k: int) -> np.ndarray:
        """The next ``k`` doubles in [0, 1)."""
        return (self.u64_array(k) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def below(self, bound: int) -> int:
        """Integer in [0, bound) as ``next_u64() % bound``.

        The modulo bias is below 2**-40 for bounds under 2**24, which covers
        every sample size this package shuffles.
        """
        return self.next_u64() % bound


def derive_seed(seed: int, index: int) -> int:
    """Child seed for stream ``index``: first output of SplitMix64(seed + index)."""
    return SplitMix64((int(seed) + int(index)) & MASK64).next_u64()
