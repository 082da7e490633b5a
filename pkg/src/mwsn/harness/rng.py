"""Portable seeded generator: xoshiro256** with splitmix64 seeding.

Implemented in plain integer arithmetic so that the stream is identical in any
language that reproduces the same three steps:

* state words ``s0..s3`` are four consecutive splitmix64 outputs of ``seed``;
* each draw is a xoshiro256** output;
* ``uniform()`` maps a draw to ``(x >> 11) * 2**-53`` in [0, 1).
"""
from __future__ import annotations

MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """Return ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK


class Xoshiro256:
    def __init__(self, seed: int):
        state = int(seed) & MASK
        words = []
        for _ in range(4):
            state, out = splitmix64(state)
            words.append(out)
        self.s = words

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u
