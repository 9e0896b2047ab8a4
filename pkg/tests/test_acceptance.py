"""End-to-end acceptance checks.

Each test prints a single PASS/FAIL line so the suite output doubles as a
checklist.  These runs are heavier than the unit tests (tens of millions of
collisions in total) but complete in a few minutes on a desktop machine.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from pinned_billiards.cli import EXIT_OK, main
from pinned_billiards.core import Vec2, collide, is_approaching
from pinned_billiards.engine import (InitialCondition, SimConfig,
                                     StoppingRule, run, run_batch)
from pinned_billiards.io import read_manifest
from pinned_billiards.lattice import (KIND_TORUS, LatticeSpec,
                                      adjacency_oracle, build)
from pinned_billiards.presets import SWEEP_PRESETS, get_preset
from pinned_billiards.stats import (collisional_correlation, energy_profile,
                                    ks_threshold, normality_statistic,
                                    value_histogram, xy_correlation)

TORUS_38 = LatticeSpec(KIND_TORUS, 38, 38)


def report(name: str, ok: bool, detail: str = "") -> None:
    tail = f" ({detail})" if detail else ""
    print(f"\n[acceptance] {name}: {'PASS' if ok else 'FAIL'}{tail}")
    assert ok, f"{name}{tail}"


def torus_config(seed: int, accepted: int, snapshots=()) -> SimConfig:
    return SimConfig(lattice=TORUS_38, seed=seed,
                     initial=InitialCondition(ball="corner", direction=(1.0, 1.0)),
                     stop=StoppingRule(accepted=accepted),
                     snapshots=tuple(snapshots))


def rand_collision_inputs(rng):
    v1 = Vec2(rng.uniform(-10, 10), rng.uniform(-10, 10))
    v2 = Vec2(rng.uniform(-10, 10), rng.uniform(-10, 10))
    theta = rng.uniform(0, 2 * math.pi)
    return v1, v2, Vec2(math.cos(theta), math.sin(theta))


def test_energy_conservation_million_collisions():
    cfg = torus_config(seed=20260823, accepted=1_000_000,
                       snapshots=range(0, 1_000_001, 100_000))
    run(cfg, build(TORUS_38), )  # warm the compiled kernel before timing
    t0 = time.perf_counter()
    result = run(cfg)
    elapsed = time.perf_counter() - t0
    drift = max(abs(s.energy - 100.0) / 100.0 for s in result.snapshots)
    ok = drift <= 1e-9 and elapsed < 10.0
    report("energy-conservation", ok,
           f"max drift {drift:.2e}, {elapsed:.2f}s for 1e6 collisions")


def test_collision_invariants_random_suite():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100_000):
        v1, v2, d = rand_collision_inputs(rng)
        v1p, v2p = collide(v1, v2, d)
        e = abs((v1p.dot(v1p) + v2p.dot(v2p)) - (v1.dot(v1) + v2.dot(v2)))
        px = abs((v1p.x + v2p.x) - (v1.x + v2.x))
        py = abs((v1p.y + v2p.y) - (v1.y + v2.y))
        dp = d.perp()
        perp = max(abs((v1p - v1).dot(dp)), abs((v2p - v2).dot(dp)))
        w1, w2 = collide(v1p, v2p, d)
        inv = max(abs(w1.x - v1.x), abs(w1.y - v1.y),
                  abs(w2.x - v2.x), abs(w2.y - v2.y))
        worst = max(worst, e / max(1.0, abs(v1.dot(v1) + v2.dot(v2))),
                    px, py, perp, inv)
    report("collision-invariants", worst <= 1e-12, f"worst residual {worst:.2e}")


def exchange_oracle(a: float, b: float) -> float:
    """Non-trivial root of the 1-D two-equation conservation system,
    with the discriminant computed in exact rational arithmetic."""
    fa, fb = Fraction(a), Fraction(b)
    s = fa + fb
    disc = 2 * (fa * fa + fb * fb) - s * s
    r = math.sqrt(float(disc))
    r1 = (float(s) + r) / 2
    r2 = (float(s) - r) / 2
    return r1 if abs(r1 - a) >= abs(r2 - a) else r2


def test_collision_oracle_equivalence():
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(10_000):
        v1, v2, d = rand_collision_inputs(rng)
        v1p, _ = collide(v1, v2, d)
        expected = exchange_oracle(v1.dot(d), v2.dot(d))
        worst = max(worst, abs(v1p.dot(d) - expected) / max(1.0, abs(expected)))
    report("collision-oracle-equivalence", worst <= 1e-12,
           f"worst residual {worst:.2e}")


def test_lattice_matches_brute_force_oracle():
    ok = True
    details = []
    for name in ["rect-10x5", "rect-60x30", "rect-100x50"]:
        cfg = build(get_preset(name))
        oracle = adjacency_oracle(cfg.positions, cfg.radius)
        same = {tuple(p) for p in cfg.adjacency.tolist()} == \
            {tuple(p) for p in oracle.tolist()}
        ok = ok and same
        details.append(f"{name} N={cfg.n_balls}")
    for cols, rows in [(4, 4), (12, 8), (38, 38)]:
        cfg = build(LatticeSpec(KIND_TORUS, cols, rows))
        oracle = adjacency_oracle(cfg.positions, cfg.radius, wrap=cfg.extents)
        same = {tuple(p) for p in cfg.adjacency.tolist()} == \
            {tuple(p) for p in oracle.tolist()}
        ok = ok and same and (cfg.degrees() == 6).all()
    report("lattice-oracle", ok, "; ".join(details) + "; torus degree 6")


def test_half_plane_boundary_concentration():
    spec = get_preset("rect-100x50")
    base = SimConfig(lattice=spec, seed=0, stop=StoppingRule(accepted=45_158))
    results = run_batch(base, list(range(20)), workers=4)
    configuration = results[0].configuration
    fracs = [energy_profile(r.state.velocities, configuration).band_fraction[0]
             for r in results]
    mean = float(np.mean(fracs))
    ok = abs(mean - 0.30) <= 0.10
    report("boundary-concentration", ok,
           f"mean band-0 fraction {mean:.3f} over 20 seeds, target 0.30+/-0.10")


def test_size_sweep_far_energy_trend():
    budget_per_ball = 600.0
    seeds = list(range(10))
    means = []
    for name in SWEEP_PRESETS:
        spec = get_preset(name)
        configuration = build(spec)
        budget = int(round(budget_per_ball * configuration.n_balls))
        base = SimConfig(lattice=spec, seed=0, stop=StoppingRule(accepted=budget))
        results = run_batch(base, seeds, workers=4)
        far = [energy_profile(r.state.velocities, configuration)
               .band_fraction[11:].sum() for r in results]
        means.append(float(np.mean(far)))
    violations = sum(1 for a, b in zip(means, means[1:]) if b > a)
    detail = ", ".join(f"{n.split('-')[1]}={m:.3f}"
                       for n, m in zip(SWEEP_PRESETS, means))
    ok = violations <= 1
    report("size-sweep-trend", ok,
           f"far-energy means [{detail}]; {violations} increasing pairs of 6")


def test_torus_component_normality():
    n = TORUS_38.cols * TORUS_38.rows
    sigma = math.sqrt(100.0 / n)
    threshold = ks_threshold(n, alpha=0.01, reps=1000, seed=7)
    base = torus_config(seed=0, accepted=422_834)
    results = run_batch(base, list(range(20)), workers=4)
    var_ok = True
    ks_pass = 0
    ks_total = 0
    for r in results:
        for axis in (0, 1):
            comp = r.state.velocities[:, axis]
            var = float(np.mean(comp * comp))
            if abs(var - sigma ** 2) > 0.15 * sigma ** 2:
                var_ok = False
            ks_total += 1
            if normality_statistic(comp, sigma) < threshold:
                ks_pass += 1
    ok = var_ok and ks_pass >= 0.9 * ks_total
    report("torus-normality", ok,
           f"variance within 15%: {var_ok}; KS below calibrated 1% threshold "
           f"in {ks_pass}/{ks_total} axis checks")


def test_correlation_nullity_batch():
    base = torus_config(seed=0, accepted=422_834)
    results = run_batch(base, list(range(240)), workers=4)
    configuration = results[0].configuration
    coll = np.array([collisional_correlation(r.state.velocities,
                                             configuration).value
                     for r in results])
    xy = np.array([xy_correlation(r.state.velocities).value for r in results])
    means_ok = abs(coll.mean()) <= 0.02 and abs(xy.mean()) <= 0.02
    unimodal = True
    for values in (coll, xy):
        hist = value_histogram(values, 0.02)
        counts = hist.counts
        peak = int(np.argmax(counts))
        # unimodal around 0: counts rise up to the modal bin and fall after
        # it, the modal bin touches the origin, and the far tails are empty
        rises = (np.diff(counts[:peak + 1]) >= 0).all()
        falls = (np.diff(counts[peak:]) <= 0).all()
        near_zero = abs(hist.centers[peak]) <= 0.03 + 1e-9
        if not (rises and falls and near_zero) or np.abs(values).max() > 0.2:
            unimodal = False
    ok = means_ok and unimodal
    report("correlation-nullity", ok,
           f"mean collisional {coll.mean():+.4f}, mean xy {xy.mean():+.4f}, "
           f"unimodal near 0: {unimodal}")


def test_cli_determinism(tmp_path):
    argv = ["simulate", "--preset", "torus-38x38", "--seed", "31",
            "--stop-accepted", "20000", "--snap", "0", "--snap", "20000"]
    rc1 = main(argv + ["--out", str(tmp_path / "a")])
    rc2 = main(argv + ["--out", str(tmp_path / "b")])
    _, inv1 = read_manifest(tmp_path / "a" / "manifest.txt")
    _, inv2 = read_manifest(tmp_path / "b" / "manifest.txt")
    ok = rc1 == EXIT_OK and rc2 == EXIT_OK and inv1 == inv2 and len(inv1) > 0
    report("cli-determinism", ok,
           f"{len(inv1)} files, manifest digests identical: {inv1 == inv2}")
