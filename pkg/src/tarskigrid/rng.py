"""Seedable deterministic RNG used by every randomized component.

Language-default generators are deliberately avoided so that instance
streams and benchmark schedules reproduce bit-for-bit across ports. The
generator is xorshift64*, fully specified by:

    state ^= state >> 12        (64-bit wrapping)
    state ^= state << 25
    state ^= state >> 27
    output = (state * 0x2545F4914F6CDD1D) mod 2^64

Seeding: ``state = seed mod 2^64``; a zero state (illegal for xorshift) is
replaced by the constant ``0x9E3779B97F4A7C15``. Bounded draws use the plain
modulo reduction ``lo + next_u64() % (hi - lo + 1)``; the modulo bias is
irrelevant here and the simple rule keeps cross-implementation agreement.
"""

from .errors import UsageError

_MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED_SUB = 0x9E3779B97F4A7C15


class XorShift64Star:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64
        if self.state == 0:
            self.state = _ZERO_SEED_SUB

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & _MASK64
        s ^= s >> 27
        self.state = s
        return (s * _MULT) & _MASK64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in the inclusive range [lo, hi]."""
        if lo > hi:
            raise UsageError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def sign(self) -> int:
        """A value from {-1, 0, +1}."""
        return self.randint(-1, 1)

    def point(self, box) -> tuple:
        """A uniform point of ``box``, drawn coordinate by coordinate."""
        return tuple(self.randint(a, b) for a, b in zip(box.lo, box.hi))


def mix(*parts: int) -> int:
    """Derive a child seed from integer parts, deterministically.

    Feeds each part through one xorshift64* step and combines with distinct
    odd multipliers, so (base, n, rep, ...) schedules never collide in
    practice and are identical across runs.
    """
    acc = 0x106689D45497FDB5
    for i, p in enumerate(parts):
        g = XorShift64Star(p ^ (0xA24BAED4963EE407 * (i + 1)) & _MASK64)
        acc = (acc ^ g.next_u64()) * 0x9FB21C651E98DF25 & _MASK64
    return acc
