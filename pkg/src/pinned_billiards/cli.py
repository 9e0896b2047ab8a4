"""Command-line entry point: simulate / sweep / batch.

Config precedence is flags > config file > preset defaults; the fully
resolved configuration is echoed into the manifest, which is written last
and inventories every emitted file with a sha256 digest.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .engine import (InitialCondition, RunResult, SimConfig, StoppingRule,
                     run, run_batch)
from .errors import SimulationError
from .io import (write_adjacency, write_histogram, write_manifest,
                 write_positions, write_profile, write_snapshot, write_table)
from .lattice import KIND_HALF_PLANE, KIND_TORUS, LatticeSpec, build
from .presets import SWEEP_PRESETS, get_preset
from .rng import ALGORITHM_ID
from .stats import (collisional_correlation, component_histogram,
                    energy_profile, gaussian_fit, value_histogram,
                    xy_correlation)

OUT_ENV = "PINNED_BILLIARDS_OUT"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _out_dir(args, command: str) -> Path:
    if args.out is not None:
        return Path(args.out)
    root = os.environ.get(OUT_ENV, "out")
    return Path(root) / command


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    return json.loads(Path(path).read_text())


def _resolve(args, filecfg: dict, key: str, default):
    """flags > config file > default."""
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return flag
    if key in filecfg:
        return filecfg[key]
    return default


def _resolve_lattice(args, filecfg: dict) -> tuple[LatticeSpec, str]:
    preset = _resolve(args, filecfg, "preset", None)
    if preset is not None:
        spec = get_preset(preset)
        # explicit geometry flags override preset fields
        kind = _resolve(args, filecfg, "kind", spec.kind)
        cols = _resolve(args, filecfg, "cols", spec.cols)
        rows = _resolve(args, filecfg, "rows", spec.rows)
        radius = _resolve(args, filecfg, "radius", spec.radius)
        return LatticeSpec(kind=kind, cols=cols, rows=rows, radius=radius), preset
    kind = _resolve(args, filecfg, "kind", None)
    cols = _resolve(args, filecfg, "cols", None)
    rows = _resolve(args, filecfg, "rows", None)
    if kind is None or cols is None or rows is None:
        raise SimulationError("give --preset or all of --kind/--cols/--rows")
    radius = _resolve(args, filecfg, "radius", 0.5)
    return LatticeSpec(kind=kind, cols=int(cols), rows=int(rows),
                       radius=float(radius)), "custom"


def _parse_direction(text) -> tuple[float, float]:
    if isinstance(text, (list, tuple)):
        dx, dy = text
    else:
        dx, dy = (float(p) for p in str(text).split(","))
    return (float(dx), float(dy))


def _parse_anchor(text):
    if text in ("boundary-center", "corner"):
        return text
    return int(text)


def _resolve_sim_config(args, filecfg: dict) -> tuple[SimConfig, str]:
    spec, preset = _resolve_lattice(args, filecfg)
    seed = int(_resolve(args, filecfg, "seed", 0))
    stop_accepted = _resolve(args, filecfg, "stop-accepted", None)
    stop_attempted = _resolve(args, filecfg, "stop-attempted", None)
    if stop_accepted is None and stop_attempted is None:
        raise SimulationError("give --stop-accepted or --stop-attempted")
    if stop_accepted is not None and stop_attempted is not None:
        raise SimulationError("give only one stopping rule")
    stop = (StoppingRule(accepted=int(stop_accepted)) if stop_accepted is not None
            else StoppingRule(attempted=int(stop_attempted)))
    snaps = _resolve(args, filecfg, "snap", None) or []
    default_dir = (0.0, 1.0) if spec.kind == KIND_HALF_PLANE else (1.0, 1.0)
    default_anchor = "boundary-center" if spec.kind == KIND_HALF_PLANE else "corner"
    direction = _parse_direction(_resolve(args, filecfg, "direction", default_dir))
    anchor = _parse_anchor(_resolve(args, filecfg, "anchor", default_anchor))
    energy = float(_resolve(args, filecfg, "energy", 100.0))
    config = SimConfig(
        lattice=spec,
        seed=seed,
        initial=InitialCondition(ball=anchor, direction=direction,
                                 total_energy=energy),
        stop=stop,
        snapshots=tuple(sorted(int(s) for s in snaps)),
    )
    return config, preset


def _config_manifest_fields(config: SimConfig, preset: str, command: str) -> dict:
    stop = (f"accepted={config.stop.accepted}" if config.stop.accepted is not None
            else f"attempted={config.stop.attempted}")
    return {
        "command": command,
        "artifact_version": __version__,
        "rng_algorithm": ALGORITHM_ID,
        "preset": preset,
        "lattice_kind": config.lattice.kind,
        "cols": config.lattice.cols,
        "rows": config.lattice.rows,
        "radius": config.lattice.radius,
        "seed": config.seed,
        "stop": stop,
        "snapshots": ",".join(str(s) for s in config.snapshots) or "none",
        "anchor": config.initial.ball,
        "direction": f"{config.initial.direction[0]},{config.initial.direction[1]}",
        "total_energy": config.initial.total_energy,
    }


def _emit_snapshot_stats(outdir: Path, result: RunResult, snap, bin_width: float,
                         files: list[Path]) -> None:
    tag = f"{snap.accepted:09d}"
    path = outdir / f"snapshot_{tag}.csv"
    write_snapshot(path, result.configuration, snap.velocities)
    files.append(path)
    if result.configuration.kind == KIND_HALF_PLANE:
        p = outdir / f"profile_{tag}.csv"
        write_profile(p, energy_profile(snap.velocities, result.configuration))
        files.append(p)
    for axis in ("x", "y"):
        try:
            hist = component_histogram(snap.velocities, axis, bin_width)
        except SimulationError:
            continue  # all-at-rest snapshot has no scale
        samples = snap.velocities[:, 0 if axis == "x" else 1] / hist.scale_used
        fit = gaussian_fit(samples)
        p = outdir / f"hist_{axis}_{tag}.csv"
        write_histogram(p, hist, fit, extra_meta={"axis": axis})
        files.append(p)


def cmd_simulate(args) -> int:
    filecfg = _load_config_file(args.config)
    config, preset = _resolve_sim_config(args, filecfg)
    outdir = _out_dir(args, "simulate")
    outdir.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    fields = _config_manifest_fields(config, preset, "simulate")
    try:
        result = run(config)
        write_positions(outdir / "positions.csv", result.configuration)
        write_adjacency(outdir / "adjacency.csv", result.configuration)
        files += [outdir / "positions.csv", outdir / "adjacency.csv"]
        for snap in result.snapshots:
            _emit_snapshot_stats(outdir, result, snap, args.bin_width, files)
        fields.update({
            "balls": result.configuration.n_balls,
            "accepted": result.state.accepted,
            "attempted": result.state.attempted,
            "energy_initial": result.snapshots[0].energy if result.snapshots else "",
            "energy_final": result.state.energy(),
            "status": "complete",
        })
    except Exception:
        fields["status"] = "incomplete"
        write_manifest(outdir / "manifest.txt", fields, files)
        raise
    write_manifest(outdir / "manifest.txt", fields, files)
    return EXIT_OK


def cmd_sweep(args) -> int:
    sizes = args.sizes.split(",") if args.sizes else list(SWEEP_PRESETS)
    specs = [(name, get_preset(name)) for name in sizes]
    outdir = _out_dir(args, "sweep")
    outdir.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    combined = []
    fields = {
        "command": "sweep",
        "artifact_version": __version__,
        "rng_algorithm": ALGORITHM_ID,
        "sizes": ",".join(sizes),
        "seeds_per_size": args.seeds_per_size,
        "base_seed": args.seed,
        "budget_per_ball": args.budget_per_ball,
        "status": "incomplete",
    }
    try:
        for name, spec in specs:
            configuration = build(spec)
            n = configuration.n_balls
            budget = int(round(args.budget_per_ball * n))
            base = SimConfig(lattice=spec, seed=0,
                             stop=StoppingRule(accepted=budget))
            seeds = [args.seed + k for k in range(args.seeds_per_size)]
            results = run_batch(base, seeds, workers=args.workers)
            profiles = [energy_profile(r.state.velocities, configuration)
                        for r in results]
            mean_fraction = np.mean([p.band_fraction for p in profiles], axis=0)
            mean_energy = np.mean([p.band_energy for p in profiles], axis=0)
            distance = profiles[0].band_distance
            rows = [(b, distance[b], mean_energy[b], mean_fraction[b])
                    for b in range(len(mean_fraction))]
            path = outdir / f"profile_{name}.csv"
            write_table(path, ["band", "distance", "energy", "fraction"], rows,
                        meta={"preset": name, "balls": n, "budget": budget,
                              "seeds": args.seeds_per_size})
            files.append(path)
            for b in range(len(mean_fraction)):
                combined.append((name, n, b, mean_fraction[b]))
        path = outdir / "sweep_combined.csv"
        write_table(path, ["size", "balls", "band", "fraction"], combined)
        files.append(path)
        fields["status"] = "complete"
    except Exception:
        write_manifest(outdir / "manifest.txt", fields, files)
        raise
    write_manifest(outdir / "manifest.txt", fields, files)
    return EXIT_OK


def cmd_batch(args) -> int:
    filecfg = _load_config_file(args.config)
    if args.seeds:
        seeds = [int(s) for s in args.seeds.split(",")]
    else:
        base_seed = args.seed if args.seed is not None else 0
        seeds = [base_seed + k for k in range(args.runs)]
    config, preset = _resolve_sim_config(args, filecfg)
    outdir = _out_dir(args, "batch")
    outdir.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    fields = _config_manifest_fields(config, preset, "batch")
    fields.update({"runs": len(seeds), "workers": args.workers,
                   "correlation_snapshot": "final", "status": "incomplete"})
    try:
        results = run_batch(config, seeds, workers=args.workers)
        rows = []
        coll_values, xy_values = [], []
        for r in results:
            c = collisional_correlation(r.state.velocities, r.configuration)
            x = xy_correlation(r.state.velocities)
            rows.append((r.config.seed, "collisional", c.value, c.n))
            rows.append((r.config.seed, "xy", x.value, x.n))
            coll_values.append(c.value)
            xy_values.append(x.value)
        path = outdir / "correlations.csv"
        write_table(path, ["seed", "kind", "value", "n"], rows)
        files.append(path)
        for kind, values in (("collisional", coll_values), ("xy", xy_values)):
            hist = value_histogram(np.array(values), args.bin_width)
            path = outdir / f"corr_hist_{kind}.csv"
            write_histogram(path, hist,
                            extra_meta={"kind": kind, "bin_width": args.bin_width})
            files.append(path)
        fields["status"] = "complete"
    except Exception:
        write_manifest(outdir / "manifest.txt", fields, files)
        raise
    write_manifest(outdir / "manifest.txt", fields, files)
    return EXIT_OK


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--preset", help="named lattice preset")
    p.add_argument("--kind", choices=[KIND_HALF_PLANE, KIND_TORUS])
    p.add_argument("--cols", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--stop-accepted", type=int)
    p.add_argument("--stop-attempted", type=int)
    p.add_argument("--anchor", help="ball index, boundary-center, or corner")
    p.add_argument("--direction", help="dx,dy (normalized internally)")
    p.add_argument("--energy", type=float, help="initial total kinetic energy")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV}/<cmd>)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pinned-billiards")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one seeded run with snapshots")
    _add_sim_flags(p)
    p.add_argument("--snap", type=int, action="append",
                   help="emit a snapshot at this accepted-collision count")
    p.add_argument("--bin-width", type=float, default=0.025)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="energy profiles across lattice sizes")
    p.add_argument("--sizes", help="comma-separated preset names")
    p.add_argument("--seeds-per-size", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--budget-per-ball", type=float, default=600.0,
                   help="accepted-collision cap per ball; runs stop earlier "
                        "if the process terminates")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("batch", help="many seeds, correlation statistics")
    _add_sim_flags(p)
    p.add_argument("--runs", type=int, default=240)
    p.add_argument("--seeds", help="explicit comma-separated seed list")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--bin-width", type=float, default=0.02)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (SimulationError, ValueError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # pragma: no cover - defensive
        print(f"runtime error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
