"""Portable pseudo-random numbers for reproducible instances.

xoshiro256** seeded through splitmix64. Both are fixed, published algorithms,
so a generated topology is identical on every platform and in any port that
implements the same two functions.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple, TypeVar

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


def splitmix64(state: int) -> Tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Derive the index-th independent sub-seed of a master seed."""
    _, out = splitmix64((master + index * GOLDEN_GAMMA) & MASK64)
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """
    xoshiro256** generator.

    Only the operations the generator and experiment runner need are exposed:
    raw 64-bit words, unit floats, unbiased bounded integers and choice.
    """

    def __init__(self, seed: int) -> None:
        state = seed & MASK64
        words = []
        for _ in range(4):
            state, out = splitmix64(state)
            words.append(out)
        if not any(words):
            words[0] = 1
        self._s = words

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def choice(self, items: Sequence[T]) -> T:
        return items[self.below(len(items))]

    def points(self, count: int) -> List[Tuple[float, float]]:
        """``count`` points uniform in the unit square, x drawn before y."""
        return [(self.random(), self.random()) for _ in range(count)]
