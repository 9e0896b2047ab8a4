"""Compiled inner loop: PCG32 pair sampling plus approach-gated exchanges.

The RNG update here must stay bit-identical to rng.Pcg32; tests replay the
same seed through both paths and compare streams.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64
PCG_MULT = U64(6364136223846793005)
M32 = U64(0xFFFFFFFF)
_S18 = U64(18)
_S27 = U64(27)
_S59 = U64(59)
_C32 = U64(32)
_C31 = U64(31)
TWO32 = U64(4294967296)

# Effectively "no bound" for the stopping-rule counters.
NO_LIMIT = np.int64(2**62)


@njit(cache=True)
def _pcg32_next(state, inc):
    old = state
    state = old * PCG_MULT + inc
    x = (((old >> _S18) ^ old) >> _S27) & M32
    rot = old >> _S59
    out = ((x >> rot) | (x << ((_C32 - rot) & _C31))) & M32
    return state, out


@njit(cache=True)
def any_approaching(vel, pi, pj, dx, dy):
    """Exact scan: is any adjacent pair still approaching?"""
    for k in range(pi.shape[0]):
        i = pi[k]
        j = pj[k]
        rel = dx[k] * (vel[i, 0] - vel[j, 0]) + dy[k] * (vel[i, 1] - vel[j, 1])
        if rel < 0.0:
            return True
    return False


@njit(cache=True)
def run_steps(vel, pi, pj, dx, dy, state, inc, accepted, attempted,
              acc_target, att_target, stall_limit):
    """Advance the chain in place until a counter reaches its target.

    Bounded configurations can reach an absorbing state with no approaching
    pair left; after ``stall_limit`` consecutive rejections a full scan
    decides whether the process has terminated (the scan consumes no
    randomness, so the stream is unaffected).

    Returns (state, accepted, attempted, terminated).
    """
    n = U64(pi.shape[0])
    threshold = TWO32 % n
    stall = np.int64(0)
    while accepted < acc_target and attempted < att_target:
        while True:
            state, r = _pcg32_next(state, inc)
            if r >= threshold:
                break
        k = np.int64(r % n)
        attempted += 1
        i = pi[k]
        j = pj[k]
        dkx = dx[k]
        dky = dy[k]
        rel = dkx * (vel[i, 0] - vel[j, 0]) + dky * (vel[i, 1] - vel[j, 1])
        if rel < 0.0:
            a1 = vel[i, 0] * dkx + vel[i, 1] * dky
            a2 = vel[j, 0] * dkx + vel[j, 1] * dky
            diff = a2 - a1
            vel[i, 0] += diff * dkx
            vel[i, 1] += diff * dky
            vel[j, 0] -= diff * dkx
            vel[j, 1] -= diff * dky
            accepted += 1
            stall = 0
        else:
            stall += 1
            if stall >= stall_limit:
                if not any_approaching(vel, pi, pj, dx, dy):
                    return state, accepted, attempted, True
                stall = 0
    return state, accepted, attempted, False
