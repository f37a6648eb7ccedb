"""Deterministic 64-bit PRNG with tagged substreams.

Every piece of randomness in the package flows through this module so
that levels and episodes are bit-reproducible from integer seeds on any
platform.  The generator is the add-and-mix ("splitmix"-style) recipe
below; the exact constants and mixing steps are normative, so any port
in another language must agree with it bit for bit.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
SEED_SPACE = 1 << 32

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_SEED_STRIDE = 0x100000001

# Substream purpose tags. One tag per generation phase keeps draws for
# different phases uncorrelated; the assignments are part of the level
# JSON schema (see levels.schema) and must not be renumbered.
TAG_LAYOUT = 0
TAG_ENTITIES = 1
TAG_PALETTE = 2
TAG_EPISODE = 3
TAG_AUGMENT = 4
TAG_PROTOCOL = 5


class Rng:
    """64-bit add-and-mix generator.

    A tiny value type: copying the instance copies the stream.  Each
    environment owns its own instances; nothing here is shared.
    """

    __slots__ = ("state",)

    def __init__(self, state: int = 0):
        self.state = state & MASK64

    def clone(self) -> "Rng":
        return Rng(self.state)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Rng) and other.state == self.state

    def __repr__(self) -> str:
        return f"Rng(state=0x{self.state:016X})"

    def next_u64(self) -> int:
        """Advance one step and return the next 64-bit value."""
        self.state = s = (self.state + _GOLDEN) & MASK64
        z = ((s ^ (s >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive.

        Rejection sampling removes the modulo bias; a degenerate range
        still consumes exactly one draw so call sequences stay aligned.
        """
        if lo > hi:
            raise ValueError(f"invalid range: lo={lo} > hi={hi}")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            r = self.next_u64()
            if r < limit:
                return lo + (r % span)

    def bernoulli(self, p: float) -> bool:
        """True with probability p, via a threshold on one raw draw."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"invalid probability: {p}")
        return self.next_u64() < int(p * 2.0**64)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle (descending index order)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.uniform_int(0, i)
            items[i], items[j] = items[j], items[i]

    def choice(self, items):
        """Uniformly chosen element of a non-empty sequence."""
        if not items:
            raise ValueError("cannot choose from an empty sequence")
        return items[self.uniform_int(0, len(items) - 1)]


def derive_stream(seed: int, purpose_tag: int) -> Rng:
    """Independent stream for (32-bit seed, purpose tag).

    The initial state is ``seed * 0x100000001 + tag`` advanced once, so
    distinct (seed, tag) pairs start from distinct states and the first
    draw is already well mixed.
    """
    if not 0 <= seed < SEED_SPACE:
        raise ValueError(f"seed out of 32-bit range: {seed}")
    if not 0 <= purpose_tag < SEED_SPACE:
        raise ValueError(f"purpose tag out of 32-bit range: {purpose_tag}")
    rng = Rng(seed * _SEED_STRIDE + purpose_tag)
    rng.next_u64()
    return rng
