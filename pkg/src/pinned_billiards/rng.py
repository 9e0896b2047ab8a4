"""Deterministic random number generation for simulation runs.

The generator is PCG32 (64-bit LCG state, XSH-RR output) seeded through
splitmix64, so a single 64-bit seed fully determines a run.  The same
update is mirrored bit-for-bit inside the compiled engine kernel; this
module is the reference implementation used by the step-at-a-time API
and by tests that replay kernel runs.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1

PCG_MULT = 6364136223846793005

# Recorded in run metadata so outputs are attributable to the exact stream.
ALGORITHM_ID = "pcg32-xsh-rr/splitmix64-seeded/v1"


def splitmix64_next(x: int) -> tuple[int, int]:
    """Advance a splitmix64 state, returning (new_state, output)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    z = z ^ (z >> 31)
    return x, z


class Pcg32:
    """Seedable PCG32 stream with unbiased bounded sampling."""

    def __init__(self, seed: int):
        seed &= MASK64
        sm = seed
        sm, initstate = splitmix64_next(sm)
        sm, initseq = splitmix64_next(sm)
        self.state = 0
        self.inc = ((initseq << 1) | 1) & MASK64
        self.next_u32()
        self.state = (self.state + initstate) & MASK64
        self.next_u32()

    def next_u32(self) -> int:
        old = self.state
        self.state = (old * PCG_MULT + self.inc) & MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & MASK32
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((32 - rot) & 31))) & MASK32

    def uniform_index(self, n: int) -> int:
        """Uniform draw from {0, ..., n-1} via rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = (1 << 32) % n
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % n

    def getstate(self) -> tuple[int, int]:
        return (self.state, self.inc)

    def setstate(self, state: tuple[int, int]) -> None:
        self.state, self.inc = state
