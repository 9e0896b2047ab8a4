"""Triangular-lattice builders: staggered half-plane rectangles and flat tori.

Positions are analytic, so contacts are exact up to rounding; adjacency is
built with a uniform spatial grid (cell size = one diameter) and verified in
tests against the O(N^2) oracle below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError

KIND_HALF_PLANE = "half-plane-rect"
KIND_TORUS = "torus"

# Relative tolerance on the contact distance 2*radius.
CONTACT_RTOL = 1e-9

ROW_SPACING = math.sqrt(3.0)  # times radius


@dataclass(frozen=True)
class LatticeSpec:
    kind: str
    cols: int
    rows: int
    radius: float = 0.5

    def __post_init__(self):
        if self.kind not in (KIND_HALF_PLANE, KIND_TORUS):
            raise InvalidSpecError(f"unknown lattice kind {self.kind!r}")
        if self.radius <= 0:
            raise InvalidSpecError("radius must be positive")
        if self.cols < 2 or self.rows < 2:
            raise InvalidSpecError("need cols >= 2 and rows >= 2")
        if self.kind == KIND_TORUS:
            if self.rows % 2 != 0:
                raise InvalidSpecError("torus needs an even number of rows")
            if self.cols < 4 or self.rows < 4:
                raise InvalidSpecError("torus needs cols >= 4 and rows >= 4")


@dataclass
class Configuration:
    """Immutable lattice geometry shared read-only by simulation workers."""

    kind: str
    radius: float
    positions: np.ndarray  # (N, 2) float64
    adjacency: np.ndarray  # (M, 2) int64, i < j, lexicographically sorted
    band_of: np.ndarray  # (N,) int64 row distance from the injection boundary
    extents: tuple[float, float] | None = None  # torus domain (width, height)
    # Unit contact direction per adjacency entry, pointing from the higher
    # index ball toward the lower (minimum image on the torus).
    pair_dirs: np.ndarray = field(default=None)  # type: ignore[assignment]

    @property
    def n_balls(self) -> int:
        return self.positions.shape[0]

    def degrees(self) -> np.ndarray:
        return np.bincount(self.adjacency.ravel(), minlength=self.n_balls)


def _min_image(delta: np.ndarray, extents: tuple[float, float]) -> np.ndarray:
    ext = np.asarray(extents, dtype=np.float64)
    return delta - ext * np.round(delta / ext)


def _pair_directions(positions, adjacency, extents) -> np.ndarray:
    delta = positions[adjacency[:, 0]] - positions[adjacency[:, 1]]
    if extents is not None:
        delta = _min_image(delta, extents)
    dist = np.hypot(delta[:, 0], delta[:, 1])
    return delta / dist[:, None]


def _grid_adjacency(positions: np.ndarray, radius: float,
                    extents: tuple[float, float] | None) -> np.ndarray:
    """Contact pairs via spatial hashing; linear in ball count."""
    target = 2.0 * radius
    tol = CONTACT_RTOL * target
    cell = target
    if extents is None:
        origin = positions.min(axis=0)
        idx = np.floor((positions - origin) / cell).astype(np.int64)
        wrap = None
    else:
        nx = max(1, int(extents[0] // cell))
        ny = max(1, int(extents[1] // cell))
        cw = extents[0] / nx
        ch = extents[1] / ny
        idx = np.empty((positions.shape[0], 2), dtype=np.int64)
        idx[:, 0] = np.minimum((positions[:, 0] // cw).astype(np.int64), nx - 1)
        idx[:, 1] = np.minimum((positions[:, 1] // ch).astype(np.int64), ny - 1)
        wrap = (nx, ny)

    buckets: dict[tuple[int, int], list[int]] = {}
    for i, (cx, cy) in enumerate(idx):
        buckets.setdefault((int(cx), int(cy)), []).append(i)

    pairs = set()
    for (cx, cy), members in buckets.items():
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                kx, ky = cx + dx, cy + dy
                if wrap is not None:
                    kx %= wrap[0]
                    ky %= wrap[1]
                others = buckets.get((kx, ky))
                if not others:
                    continue
                for i in members:
                    pi = positions[i]
                    for j in others:
                        if j <= i:
                            continue
                        d = positions[j] - pi
                        if extents is not None:
                            d = _min_image(d, extents)
                        if abs(math.hypot(d[0], d[1]) - target) <= tol:
                            pairs.add((i, j))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    out = np.array(sorted(pairs), dtype=np.int64)
    return out


def adjacency_oracle(positions: np.ndarray, radius: float,
                     wrap: tuple[float, float] | None = None) -> np.ndarray:
    """Brute-force all-pairs contact list (test oracle, O(N^2))."""
    positions = np.asarray(positions, dtype=np.float64)
    n = positions.shape[0]
    target = 2.0 * radius
    tol = CONTACT_RTOL * target
    pairs = []
    for i in range(n):
        delta = positions[i + 1:] - positions[i]
        if wrap is not None:
            delta = _min_image(delta, wrap)
        dist = np.hypot(delta[:, 0], delta[:, 1])
        hits = np.nonzero(np.abs(dist - target) <= tol)[0]
        for h in hits:
            pairs.append((i, i + 1 + int(h)))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.array(sorted(pairs), dtype=np.int64)


def build_half_plane_rect(spec: LatticeSpec) -> Configuration:
    """Staggered rectangle against a straight wall at y = 0.

    Row k sits at y = k*sqrt(3)*radius; even rows carry ``cols`` balls,
    odd rows ``cols - 1`` offset by one radius.  Row 0 is the injection
    boundary and band_of is the row index.
    """
    if spec.kind != KIND_HALF_PLANE:
        raise InvalidSpecError(f"expected kind {KIND_HALF_PLANE!r}, got {spec.kind!r}")
    r = spec.radius
    xs, ys, bands = [], [], []
    for row in range(spec.rows):
        y = row * ROW_SPACING * r
        if row % 2 == 0:
            row_x = [2.0 * r * c for c in range(spec.cols)]
        else:
            row_x = [r + 2.0 * r * c for c in range(spec.cols - 1)]
        xs.extend(row_x)
        ys.extend([y] * len(row_x))
        bands.extend([row] * len(row_x))
    positions = np.column_stack([np.array(xs), np.array(ys)]).astype(np.float64)
    adjacency = _grid_adjacency(positions, r, None)
    cfg = Configuration(
        kind=KIND_HALF_PLANE,
        radius=r,
        positions=positions,
        adjacency=adjacency,
        band_of=np.array(bands, dtype=np.int64),
        extents=None,
    )
    cfg.pair_dirs = _pair_directions(positions, adjacency, None)
    return cfg


def build_torus(spec: LatticeSpec) -> Configuration:
    """Flat torus: cols balls in every row, odd rows offset, periodic wrap."""
    if spec.kind != KIND_TORUS:
        raise InvalidSpecError(f"expected kind {KIND_TORUS!r}, got {spec.kind!r}")
    r = spec.radius
    width = 2.0 * r * spec.cols
    height = ROW_SPACING * r * spec.rows
    xs, ys = [], []
    for row in range(spec.rows):
        y = row * ROW_SPACING * r
        offset = r if row % 2 == 1 else 0.0
        for c in range(spec.cols):
            xs.append((offset + 2.0 * r * c) % width)
            ys.append(y % height)
    positions = np.column_stack([np.array(xs), np.array(ys)]).astype(np.float64)
    extents = (width, height)
    adjacency = _grid_adjacency(positions, r, extents)
    n = positions.shape[0]
    cfg = Configuration(
        kind=KIND_TORUS,
        radius=r,
        positions=positions,
        adjacency=adjacency,
        band_of=np.zeros(n, dtype=np.int64),
        extents=extents,
    )
    cfg.pair_dirs = _pair_directions(positions, adjacency, extents)
    return cfg


def build(spec: LatticeSpec) -> Configuration:
    if spec.kind == KIND_TORUS:
        return build_torus(spec)
    return build_half_plane_rect(spec)
