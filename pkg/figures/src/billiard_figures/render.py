"""Rendering the five figure kinds from simulator output tables.

Every renderer takes table paths plus an output image path, draws with the
non-interactive Agg backend, and returns a small summary dict that tests can
inspect (arrow counts, the overlay sigma, bin widths).
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import SchemaMismatchError  # noqa: E402
from .tables import Table, read_table, require_columns  # noqa: E402

KINDS = ("quiver", "energy-bars", "sweep-lines", "component-hist",
         "correlation-hist")

DPI = 150
QUIVER_ARROW_SCALE = 0.08  # axis units of arrow length per unit speed


def _save(fig, out: str | Path) -> None:
    fig.savefig(out, dpi=DPI)
    plt.close(fig)


def render_quiver(snapshot: str | Path, out: str | Path) -> dict:
    """One grey dot per ball, one arrow per ball scaled by speed."""
    table = read_table(snapshot)
    require_columns(table, ["x", "y", "vx", "vy"], "quiver")
    x, y = table["x"], table["y"]
    vx, vy = table["vx"], table["vy"]
    speed = np.hypot(vx, vy)
    fig, ax = plt.subplots(figsize=(7, 7))
    ax.scatter(x, y, s=12, color="0.6", zorder=1)
    moving = speed > 0
    if moving.any():
        ax.quiver(x[moving], y[moving], vx[moving], vy[moving], speed[moving],
                  angles="xy", scale_units="xy",
                  scale=1.0 / QUIVER_ARROW_SCALE, cmap="viridis", zorder=2)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    _save(fig, out)
    return {"kind": "quiver", "balls": int(table.n_rows),
            "arrows": int(moving.sum())}


def render_energy_bars(profile: str | Path, out: str | Path) -> dict:
    """Energy fraction per band as a bar chart."""
    table = read_table(profile)
    require_columns(table, ["band", "distance", "energy", "fraction"],
                    "energy-bars")
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.bar(table["band"], table["fraction"], width=0.9, color="tab:blue")
    ax.set_xlabel("band (rows from boundary)")
    ax.set_ylabel("energy fraction")
    _save(fig, out)
    return {"kind": "energy-bars", "bands": int(table.n_rows),
            "fraction_total": float(table["fraction"].sum())}


def render_sweep_lines(combined: str | Path, out: str | Path) -> dict:
    """Energy fraction vs band, one line per lattice size."""
    table = read_table(combined)
    require_columns(table, ["size", "balls", "band", "fraction"], "sweep-lines")
    sizes = list(dict.fromkeys(table["size"].tolist()))  # first-seen order
    fig, ax = plt.subplots(figsize=(8, 5))
    for size in sizes:
        mask = table["size"] == size
        order = np.argsort(table["band"][mask])
        ax.plot(table["band"][mask][order], table["fraction"][mask][order],
                marker=".", label=str(size))
    ax.set_xlabel("band (rows from boundary)")
    ax.set_ylabel("energy fraction")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    _save(fig, out)
    return {"kind": "sweep-lines", "lines": len(sizes)}


def _check_uniform_edges(table: Table, kind: str) -> float:
    widths = table["bin_right"] - table["bin_left"]
    if not np.allclose(widths, widths[0], atol=1e-12):
        raise SchemaMismatchError(f"{table.path}: {kind} needs uniform bins")
    gaps = table["bin_left"][1:] - table["bin_right"][:-1]
    if len(gaps) and not np.allclose(gaps, 0.0, atol=1e-12):
        raise SchemaMismatchError(f"{table.path}: {kind} needs contiguous bins")
    return float(widths[0])


def render_component_hist(hist: str | Path, out: str | Path) -> dict:
    """Normalized component histogram with the fitted Gaussian overlaid.

    The overlay sigma is read from the table's metadata header, never
    refitted here, so the figure reflects exactly what the simulator
    measured.
    """
    table = read_table(hist)
    require_columns(table, ["bin_left", "bin_right", "count", "density"],
                    "component-hist")
    width = _check_uniform_edges(table, "component-hist")
    sigma = table.meta_float("sigma")
    if sigma <= 0:
        raise SchemaMismatchError(f"{table.path}: sigma must be positive")
    centers = 0.5 * (table["bin_left"] + table["bin_right"])
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.bar(centers, table["density"], width=width, color="tab:blue",
           edgecolor="white", linewidth=0.3)
    grid = np.linspace(table["bin_left"][0], table["bin_right"][-1], 400)
    pdf = np.exp(-0.5 * (grid / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    ax.plot(grid, pdf, color="tab:red", linewidth=2)
    axis = table.meta.get("axis", "")
    ax.set_xlabel(f"normalized v{axis} component" if axis else
                  "normalized component")
    ax.set_ylabel("density")
    _save(fig, out)
    return {"kind": "component-hist", "bins": int(table.n_rows),
            "bin_width": width, "sigma": sigma,
            "overlay_mass": float(np.trapezoid(pdf, grid))}


def render_correlation_hist(hist: str | Path, out: str | Path) -> dict:
    """Correlation-value histogram over the [-1, 1] range."""
    table = read_table(hist)
    require_columns(table, ["bin_left", "bin_right", "count", "density"],
                    "correlation-hist")
    width = _check_uniform_edges(table, "correlation-hist")
    centers = 0.5 * (table["bin_left"] + table["bin_right"])
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.bar(centers, table["count"], width=width, color="tab:green",
           edgecolor="white", linewidth=0.3)
    ax.set_xlim(-1.0, 1.0)
    ax.set_xlabel(table.meta.get("kind", "correlation") + " correlation")
    ax.set_ylabel("runs")
    _save(fig, out)
    return {"kind": "correlation-hist", "bins": int(table.n_rows),
            "bin_width": width, "total": int(table["count"].sum())}


RENDERERS = {
    "quiver": render_quiver,
    "energy-bars": render_energy_bars,
    "sweep-lines": render_sweep_lines,
    "component-hist": render_component_hist,
    "correlation-hist": render_correlation_hist,
}


def render(kind: str, table_path: str | Path, out: str | Path) -> dict:
    try:
        renderer = RENDERERS[kind]
    except KeyError:
        raise SchemaMismatchError(
            f"unknown figure kind {kind!r}; choose from {', '.join(KINDS)}")
    return renderer(table_path, out)
