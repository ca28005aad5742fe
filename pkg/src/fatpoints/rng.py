"""Seeded pseudorandom numbers, reproducible across implementations.

Seeding is SplitMix64: ``z += 0x9E3779B97F4A7C15``, then
``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``,
``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``, ``z ^= z >> 31`` (mod 2**64).
The stream is xorshift64*: ``x ^= x >> 12; x ^= x << 25; x ^= x >> 27``,
output ``x * 0x2545F4914F6CDD1D`` (mod 2**64).  Integers in [0, bound) are
drawn by rejection from the top of the 64-bit range so they are unbiased.

Per-record seeds of a sweep come from ``derive_seed(master, index)``, which
is SplitMix64 applied to ``master ^ (index * 0xD1B54A32D192ED03)``.
"""

from __future__ import annotations

MASK = (1 << 64) - 1


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    return splitmix64((master ^ (index * 0xD1B54A32D192ED03)) & MASK)


class XorShift64Star:
    def __init__(self, seed: int):
        state = splitmix64(seed & MASK)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % bound

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
