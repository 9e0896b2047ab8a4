"""Monte Carlo driver: seeded adjacent-pair sampling with approach-gated
collisions, snapshot scheduling, and batch orchestration.

The hot loop lives in _kernel (numba); the pure-Python ``step`` below uses
the identical RNG stream, so step-at-a-time runs and kernel runs replay the
same event sequence for a given seed.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import _kernel
from .core import kinetic_energy
from .errors import AnchorError, DuplicateSeedError, InvalidSpecError
from .lattice import KIND_HALF_PLANE, Configuration, LatticeSpec, build
from .rng import ALGORITHM_ID, MASK64, Pcg32

ENERGY_RTOL = 1e-9


@dataclass(frozen=True)
class InitialCondition:
    """One ball gets all the energy; everything else starts at rest."""

    ball: int | str = "boundary-center"  # index, "boundary-center" or "corner"
    direction: tuple[float, float] = (0.0, 1.0)
    total_energy: float = 100.0


@dataclass(frozen=True)
class StoppingRule:
    accepted: int | None = None
    attempted: int | None = None

    def __post_init__(self):
        if (self.accepted is None) == (self.attempted is None):
            raise InvalidSpecError("set exactly one of accepted/attempted")
        target = self.accepted if self.accepted is not None else self.attempted
        if target < 0:
            raise InvalidSpecError("stop target must be >= 0")


@dataclass(frozen=True)
class SimConfig:
    lattice: LatticeSpec
    seed: int
    initial: InitialCondition = InitialCondition()
    stop: StoppingRule = StoppingRule(accepted=0)
    snapshots: tuple[int, ...] = ()

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        if list(snaps) != sorted(snaps):
            raise InvalidSpecError("snapshot counts must be ascending")
        if self.stop.accepted is not None and any(s > self.stop.accepted for s in snaps):
            raise InvalidSpecError("snapshot count beyond the stop target")
        object.__setattr__(self, "snapshots", snaps)


@dataclass
class SimState:
    velocities: np.ndarray  # (N, 2) float64
    rng: Pcg32
    accepted: int = 0
    attempted: int = 0
    # Bounded configurations admit only finitely many pseudo-collisions;
    # set once no adjacent pair is approaching any more.
    terminated: bool = False

    def energy(self) -> float:
        return kinetic_energy(self.velocities)


class StepEvent(NamedTuple):
    pair_index: int
    applied: bool


class Snapshot(NamedTuple):
    accepted: int
    attempted: int
    velocities: np.ndarray
    energy: float


@dataclass
class RunResult:
    config: SimConfig
    configuration: Configuration
    state: SimState
    snapshots: list[Snapshot] = field(default_factory=list)
    rng_algorithm: str = ALGORITHM_ID


def resolve_anchor(initial: InitialCondition, configuration: Configuration) -> int:
    ball = initial.ball
    n = configuration.n_balls
    if isinstance(ball, int):
        if not 0 <= ball < n:
            raise AnchorError(f"ball index {ball} out of range 0..{n - 1}")
        idx = ball
    elif ball == "boundary-center":
        if configuration.kind != KIND_HALF_PLANE:
            raise AnchorError("boundary-center needs a half-plane lattice; "
                             "give an explicit index on the torus")
        row0 = np.nonzero(configuration.band_of == 0)[0]
        idx = int(row0[(len(row0) - 1) // 2])
    elif ball == "corner":
        idx = n - 1 if configuration.kind != KIND_HALF_PLANE else 0
    else:
        raise AnchorError(f"unknown anchor {ball!r}")

    if configuration.kind == KIND_HALF_PLANE:
        if configuration.band_of[idx] != 0:
            raise AnchorError("half-plane anchor must sit on the boundary row")
        if initial.direction[1] <= 0:
            raise AnchorError("half-plane direction must point into the lattice")
    return idx


def init(config: SimConfig, configuration: Configuration) -> SimState:
    """All balls at rest except the anchored one at speed sqrt(2 E)."""
    dx, dy = config.initial.direction
    norm = float(np.hypot(dx, dy))
    if norm == 0.0:
        raise AnchorError("initial direction must be nonzero")
    if config.initial.total_energy <= 0:
        raise InvalidSpecError("total energy must be positive")
    idx = resolve_anchor(config.initial, configuration)
    vel = np.zeros((configuration.n_balls, 2), dtype=np.float64)
    speed = np.sqrt(2.0 * config.initial.total_energy)
    vel[idx, 0] = speed * dx / norm
    vel[idx, 1] = speed * dy / norm
    return SimState(velocities=vel, rng=Pcg32(config.seed))


def step(state: SimState, configuration: Configuration) -> StepEvent:
    """One Monte Carlo move: sample an adjacent pair, collide if approaching."""
    adj = configuration.adjacency
    k = state.rng.uniform_index(adj.shape[0])
    state.attempted += 1
    i, j = adj[k]
    dkx, dky = configuration.pair_dirs[k]
    vel = state.velocities
    rel = dkx * (vel[i, 0] - vel[j, 0]) + dky * (vel[i, 1] - vel[j, 1])
    applied = rel < 0.0
    if applied:
        a1 = vel[i, 0] * dkx + vel[i, 1] * dky
        a2 = vel[j, 0] * dkx + vel[j, 1] * dky
        diff = a2 - a1
        vel[i, 0] += diff * dkx
        vel[i, 1] += diff * dky
        vel[j, 0] -= diff * dkx
        vel[j, 1] -= diff * dky
        state.accepted += 1
    return StepEvent(pair_index=int(k), applied=bool(applied))


# Consecutive rejections before the kernel scans for an absorbing state,
# as a multiple of the adjacency-list size.
STALL_SCAN_FACTOR = 16


def _advance(state: SimState, configuration: Configuration,
             acc_target: int, att_target: int) -> None:
    """Run the compiled kernel until a counter reaches its target or the
    process terminates (no approaching pair left)."""
    if state.terminated:
        return
    adj = configuration.adjacency
    s, inc = state.rng.getstate()
    new_state, accepted, attempted, terminated = _kernel.run_steps(
        state.velocities,
        np.ascontiguousarray(adj[:, 0]),
        np.ascontiguousarray(adj[:, 1]),
        np.ascontiguousarray(configuration.pair_dirs[:, 0]),
        np.ascontiguousarray(configuration.pair_dirs[:, 1]),
        np.uint64(s), np.uint64(inc),
        np.int64(state.accepted), np.int64(state.attempted),
        np.int64(acc_target), np.int64(att_target),
        np.int64(STALL_SCAN_FACTOR * adj.shape[0]))
    state.rng.setstate((int(new_state) & MASK64, inc))
    state.accepted = int(accepted)
    state.attempted = int(attempted)
    state.terminated = bool(terminated)


def run(config: SimConfig, configuration: Configuration | None = None) -> RunResult:
    """Run to the stopping rule, emitting snapshots at scheduled counts."""
    if configuration is None:
        configuration = build(config.lattice)
    state = init(config, configuration)
    e0 = state.energy()

    if config.stop.accepted is not None:
        acc_stop, att_stop = config.stop.accepted, int(_kernel.NO_LIMIT)
    else:
        acc_stop, att_stop = int(_kernel.NO_LIMIT), config.stop.attempted

    result = RunResult(config=config, configuration=configuration, state=state)

    def take_snapshot():
        e = state.energy()
        if abs(e - e0) > ENERGY_RTOL * e0:
            raise ArithmeticError(
                f"energy drifted: {e} vs {e0} after {state.accepted} collisions")
        result.snapshots.append(Snapshot(
            accepted=state.accepted, attempted=state.attempted,
            velocities=state.velocities.copy(), energy=e))

    for target in config.snapshots:
        if target == state.accepted:
            take_snapshot()
            continue
        _advance(state, configuration, min(target, acc_stop), att_stop)
        if state.accepted == target:
            take_snapshot()
        if (state.terminated or state.accepted >= acc_stop
                or state.attempted >= att_stop):
            break
    _advance(state, configuration, acc_stop, att_stop)
    if not result.snapshots or result.snapshots[-1].accepted != state.accepted:
        take_snapshot()
    return result


def _run_seeded(args) -> RunResult:
    base, seed, configuration = args
    return run(replace(base, seed=seed), configuration)


def run_batch(base: SimConfig, seeds: list[int],
              workers: int = 1) -> list[RunResult]:
    """Independent runs, one per seed; output identical at any concurrency."""
    if len(set(seeds)) != len(seeds):
        raise DuplicateSeedError(f"seeds contain duplicates: {seeds}")
    if not seeds:
        return []
    configuration = build(base.lattice)
    jobs = [(base, seed, configuration) for seed in seeds]
    if workers <= 1 or len(seeds) == 1:
        results = [_run_seeded(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_seeded, jobs))
    return results
