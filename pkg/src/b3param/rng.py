"""SplitMix64: the seeded generator behind every random draw in the package.

The sequence depends only on the 64-bit seed, so reports are reproducible
across platforms and Python versions.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed=0):
        self.state = seed & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound):
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        bits = bound.bit_length()
        while True:
            # draw enough 64-bit words to cover the bound, then mask
            acc, have = 0, 0
            while have < bits:
                acc = (acc << 64) | self.next_u64()
                have += 64
            acc >>= have - bits
            if acc < bound:
                return acc

    def randint(self, lo, hi):
        """Uniform integer in the closed range [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def fork(self, tag):
        """Independent child stream, derived deterministically from a tag."""
        return SplitMix64(self.next_u64() ^ (hash_tag(tag) & MASK64))


def hash_tag(tag):
    # FNV-1a over the textual tag; Python's hash() is salted per process
    h = 0xCBF29CE484222325
    for byte in str(tag).encode():
        h ^= byte
        h = (h * 0x100000001B3) & MASK64
    return h
