import math
from dataclasses import replace

import numpy as np
import pytest

from pinned_billiards.core import total_momentum
from pinned_billiards.engine import (InitialCondition, SimConfig,
                                     StoppingRule, init, run, run_batch, step)
from pinned_billiards.errors import (AnchorError, DuplicateSeedError,
                                     InvalidSpecError)
from pinned_billiards.lattice import KIND_HALF_PLANE, KIND_TORUS, LatticeSpec, build

TORUS_4 = LatticeSpec(KIND_TORUS, 4, 4)
HALF_4 = LatticeSpec(KIND_HALF_PLANE, 4, 4)


def torus_cfg(lattice=TORUS_4, **kw):
    kw.setdefault("seed", 1)
    kw.setdefault("initial", InitialCondition(ball="corner", direction=(1.0, 1.0)))
    kw.setdefault("stop", StoppingRule(accepted=100))
    return SimConfig(lattice=lattice, **kw)


class TestStoppingRule:
    def test_requires_exactly_one(self):
        with pytest.raises(InvalidSpecError):
            StoppingRule()
        with pytest.raises(InvalidSpecError):
            StoppingRule(accepted=1, attempted=1)

    def test_negative_target(self):
        with pytest.raises(InvalidSpecError):
            StoppingRule(accepted=-1)

    def test_snapshots_must_fit_stop(self):
        with pytest.raises(InvalidSpecError):
            SimConfig(lattice=TORUS_4, seed=0, stop=StoppingRule(accepted=10),
                      snapshots=(20,))


class TestInit:
    def test_energy_hundred_speed(self):
        cfg = torus_cfg()
        state = init(cfg, build(TORUS_4))
        speed = np.hypot(*state.velocities.T).max()
        assert speed == pytest.approx(math.sqrt(200), rel=1e-12)
        assert state.energy() == pytest.approx(100.0, rel=1e-12)

    def test_unit_energy_direction(self):
        cfg = torus_cfg(initial=InitialCondition(ball=0, direction=(0, 1),
                                                 total_energy=0.5))
        state = init(cfg, build(TORUS_4))
        assert state.velocities[0].tolist() == pytest.approx([0.0, 1.0], abs=1e-12)

    def test_zero_direction_rejected(self):
        cfg = torus_cfg(initial=InitialCondition(ball=0, direction=(0, 0)))
        with pytest.raises(AnchorError):
            init(cfg, build(TORUS_4))

    def test_boundary_center_on_torus_rejected(self):
        cfg = torus_cfg(initial=InitialCondition(ball="boundary-center"))
        with pytest.raises(AnchorError):
            init(cfg, build(TORUS_4))

    def test_half_plane_outward_direction_rejected(self):
        cfg = SimConfig(lattice=HALF_4, seed=0,
                        initial=InitialCondition(direction=(0, -1)),
                        stop=StoppingRule(accepted=1))
        with pytest.raises(AnchorError):
            init(cfg, build(HALF_4))

    def test_half_plane_anchor_off_boundary_rejected(self):
        configuration = build(HALF_4)
        off_row = int(np.nonzero(configuration.band_of == 1)[0][0])
        cfg = SimConfig(lattice=HALF_4, seed=0,
                        initial=InitialCondition(ball=off_row),
                        stop=StoppingRule(accepted=1))
        with pytest.raises(AnchorError):
            init(cfg, configuration)


class TestStep:
    def test_head_on_applies(self):
        configuration = build(LatticeSpec(KIND_HALF_PLANE, 2, 2))
        cfg = SimConfig(lattice=LatticeSpec(KIND_HALF_PLANE, 2, 2), seed=5,
                        stop=StoppingRule(accepted=1))
        state = init(cfg, configuration)
        state.velocities[:] = 0.0
        # find which pair gets sampled first, then point ball i at ball j
        probe = init(cfg, configuration)
        k = probe.rng.uniform_index(configuration.adjacency.shape[0])
        i, j = configuration.adjacency[k]
        d = configuration.pair_dirs[k]
        state.velocities[i] = -d  # moving from i toward j (approaching)
        event = step(state, configuration)
        assert event.applied
        assert state.accepted == 1 and state.attempted == 1
        assert np.allclose(state.velocities[j], -d, atol=1e-12)
        assert np.allclose(state.velocities[i], 0.0, atol=1e-12)

    def test_at_rest_rejects(self):
        configuration = build(LatticeSpec(KIND_HALF_PLANE, 2, 2))
        cfg = SimConfig(lattice=LatticeSpec(KIND_HALF_PLANE, 2, 2), seed=5,
                        stop=StoppingRule(accepted=1))
        state = init(cfg, configuration)
        state.velocities[:] = 0.0
        event = step(state, configuration)
        assert not event.applied
        assert state.accepted == 0 and state.attempted == 1

    def test_step_replay_matches_kernel_run(self):
        lattice = TORUS_4
        configuration = build(lattice)
        cfg = torus_cfg(stop=StoppingRule(accepted=200))
        result = run(cfg, configuration)
        state = init(cfg, configuration)
        while state.accepted < 200:
            step(state, configuration)
        assert state.attempted == result.state.attempted
        assert np.array_equal(state.velocities, result.state.velocities)


class TestRun:
    def test_stop_at_zero_is_identity(self):
        cfg = torus_cfg(stop=StoppingRule(accepted=0))
        configuration = build(TORUS_4)
        result = run(cfg, configuration)
        assert result.state.accepted == 0
        assert result.state.attempted == 0
        expected = init(cfg, configuration)
        assert np.array_equal(result.state.velocities, expected.velocities)

    def test_determinism_bit_identical(self):
        cfg = torus_cfg(stop=StoppingRule(accepted=5000), snapshots=(1000, 5000))
        r1 = run(cfg)
        r2 = run(cfg)
        assert np.array_equal(r1.state.velocities, r2.state.velocities)
        assert r1.state.attempted == r2.state.attempted
        for s1, s2 in zip(r1.snapshots, r2.snapshots):
            assert np.array_equal(s1.velocities, s2.velocities)
            assert (s1.accepted, s1.attempted) == (s2.accepted, s2.attempted)

    def test_snapshots_scheduled(self):
        cfg = torus_cfg(stop=StoppingRule(accepted=500), snapshots=(0, 100, 500))
        result = run(cfg)
        assert [s.accepted for s in result.snapshots] == [0, 100, 500]
        for s in result.snapshots:
            assert s.energy == pytest.approx(100.0, rel=1e-9)

    def test_attempted_stop(self):
        cfg = torus_cfg(stop=StoppingRule(attempted=300))
        result = run(cfg)
        assert result.state.attempted == 300
        assert result.state.accepted <= 300

    def test_counters_consistent(self):
        result = run(torus_cfg(stop=StoppingRule(accepted=1000)))
        assert result.state.accepted <= result.state.attempted

    def test_momentum_conserved(self):
        cfg = torus_cfg(lattice=LatticeSpec(KIND_TORUS, 8, 8),
                        stop=StoppingRule(accepted=200_000))
        configuration = build(cfg.lattice)
        p0 = total_momentum(init(cfg, configuration).velocities)
        result = run(cfg, configuration)
        p1 = total_momentum(result.state.velocities)
        assert abs(p1.x - p0.x) <= 1e-9
        assert abs(p1.y - p0.y) <= 1e-9

    def test_half_plane_termination(self):
        # bounded configurations only admit finitely many collisions
        cfg = SimConfig(lattice=LatticeSpec(KIND_HALF_PLANE, 4, 4), seed=3,
                        stop=StoppingRule(accepted=10**9))
        result = run(cfg)
        assert result.state.terminated
        assert result.state.accepted < 10**9
        # terminal state: no adjacent pair is approaching
        configuration = result.configuration
        vel = result.state.velocities
        adj = configuration.adjacency
        rel = np.sum((vel[adj[:, 0]] - vel[adj[:, 1]]) * configuration.pair_dirs,
                     axis=1)
        assert (rel >= 0).all()


class TestRunBatch:
    def test_empty(self):
        assert run_batch(torus_cfg(), []) == []

    def test_duplicate_seeds(self):
        with pytest.raises(DuplicateSeedError):
            run_batch(torus_cfg(), [7, 7])

    def test_batch_matches_sequential_and_concurrent(self):
        base = torus_cfg(stop=StoppingRule(accepted=2000))
        seeds = [11, 22, 33, 44]
        seq = run_batch(base, seeds, workers=1)
        par = run_batch(base, seeds, workers=4)
        assert [r.config.seed for r in seq] == seeds
        for a, b in zip(seq, par):
            assert np.array_equal(a.state.velocities, b.state.velocities)
            assert a.state.attempted == b.state.attempted
