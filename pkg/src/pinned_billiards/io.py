"""Delimited-text emission: snapshots, statistics tables, and manifests.

All reals are written with 17 significant digits so files round-trip exactly
and reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .lattice import Configuration
from .stats import EnergyProfile, GaussianFit, Histogram


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_table(path: Path, header: list[str], rows, meta: dict | None = None) -> None:
    lines = []
    if meta:
        pairs = " ".join(f"{k}={fmt(v) if not isinstance(v, str) else v}"
                         for k, v in meta.items())
        lines.append(f"# {pairs}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(v) if not isinstance(v, str) else v for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_positions(path: Path, configuration: Configuration) -> None:
    rows = [(i, p[0], p[1], b) for i, (p, b) in
            enumerate(zip(configuration.positions, configuration.band_of))]
    write_table(path, ["index", "x", "y", "band"], rows)


def write_adjacency(path: Path, configuration: Configuration) -> None:
    write_table(path, ["i", "j"], [(i, j) for i, j in configuration.adjacency])


def write_snapshot(path: Path, configuration: Configuration,
                   velocities: np.ndarray) -> None:
    rows = [(i, p[0], p[1], v[0], v[1]) for i, (p, v) in
            enumerate(zip(configuration.positions, velocities))]
    write_table(path, ["index", "x", "y", "vx", "vy"], rows)


def write_profile(path: Path, profile: EnergyProfile) -> None:
    rows = [(band, profile.band_distance[band], profile.band_energy[band],
             profile.band_fraction[band])
            for band in range(len(profile.band_energy))]
    write_table(path, ["band", "distance", "energy", "fraction"], rows,
                meta={"total": profile.total})


def write_histogram(path: Path, hist: Histogram, fit: GaussianFit | None = None,
                    extra_meta: dict | None = None) -> None:
    meta = {"scale_used": hist.scale_used, "n": int(hist.counts.sum())}
    if fit is not None:
        meta["sigma"] = fit.sigma
    if extra_meta:
        meta.update(extra_meta)
    density = hist.density
    rows = [(hist.bin_edges[k], hist.bin_edges[k + 1], hist.counts[k], density[k])
            for k in range(len(hist.counts))]
    write_table(path, ["bin_left", "bin_right", "count", "density"], rows, meta=meta)


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def write_manifest(path: Path, fields: dict, files: list[Path]) -> None:
    """Key-value run manifest, written last; inventories every output file."""
    lines = [f"{k}: {v}" for k, v in fields.items()]
    for f in sorted(files, key=lambda p: p.name):
        lines.append(f"file: {f.name} sha256={sha256_file(f)}")
    path.write_text("\n".join(lines) + "\n")


def read_manifest(path: Path) -> tuple[dict, dict]:
    """Returns (fields, {filename: digest})."""
    fields, inventory = {}, {}
    for line in path.read_text().splitlines():
        key, _, value = line.partition(": ")
        if key == "file":
            name, _, digest = value.partition(" sha256=")
            inventory[name] = digest
        else:
            fields[key] = value
    return fields, inventory
