"""SplitMix64 stream, used wherever sampling must reproduce across platforms.

Output ``k`` (0-based) of the stream seeded with ``s`` is::

    z = s + (k + 1) * 0x9E3779B97F4A7C15          (mod 2**64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

and a uniform double in [0, 1) is ``(z >> 11) * 2**-53``.  Because each
output depends only on its index, streams can be generated in vectorized
blocks.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = np.uint64(seed % 2**64)
        self.counter = 0

    def next_u64(self, n: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            z = self.state + k * _GOLDEN
            z = (z ^ (z >> np.uint64(30))) * _MIX1
            z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def uniform(self, low=0.0, high=1.0, size: int = 1) -> np.ndarray:
        u = (self.next_u64(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return low + (high - low) * u
