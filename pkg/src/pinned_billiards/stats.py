"""Measurements over simulation snapshots: energy-by-band profiles,
normalized velocity-component histograms, zero-mean Gaussian fits, a
Kolmogorov-Smirnov normality statistic, and the two correlation estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import (
    AllZeroVelocitiesError,
    BandingUnavailableError,
    DegenerateSigmaError,
    DegenerateVarianceError,
    InsufficientSamplesError,
)
from .lattice import KIND_HALF_PLANE, ROW_SPACING, Configuration


@dataclass
class EnergyProfile:
    band_energy: np.ndarray  # (n_bands,)
    band_fraction: np.ndarray
    band_distance: np.ndarray  # physical distance of each band from the wall
    total: float


@dataclass
class Histogram:
    bin_edges: np.ndarray  # ascending, len = counts + 1
    counts: np.ndarray  # int64
    normalization: str  # "count" or "density"
    scale_used: float  # divisor applied to raw samples

    @property
    def density(self) -> np.ndarray:
        widths = np.diff(self.bin_edges)
        n = self.counts.sum()
        if n == 0:
            return np.zeros_like(widths)
        return self.counts / (n * widths)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


@dataclass
class GaussianFit:
    mu: float  # fixed at 0 by symmetry
    sigma: float
    n: int
    degenerate: bool = False


@dataclass
class CorrelationSample:
    kind: str  # "collisional" or "xy"
    value: float
    n: int


def energy_profile(velocities: np.ndarray, configuration: Configuration) -> EnergyProfile:
    """Kinetic energy per row distance from the injection boundary."""
    if configuration.kind != KIND_HALF_PLANE:
        raise BandingUnavailableError("band profile needs a boundary (half-plane)")
    per_ball = 0.5 * np.sum(velocities * velocities, axis=1)
    n_bands = int(configuration.band_of.max()) + 1
    band_energy = np.bincount(configuration.band_of, weights=per_ball,
                              minlength=n_bands)
    total = float(band_energy.sum())
    fractions = band_energy / total if total > 0 else np.zeros_like(band_energy)
    distance = np.arange(n_bands) * ROW_SPACING * configuration.radius
    return EnergyProfile(band_energy=band_energy, band_fraction=fractions,
                         band_distance=distance, total=total)


def _tile_edges(bin_width: float) -> np.ndarray:
    n_bins = int(round(2.0 / bin_width))
    return np.linspace(-1.0, 1.0, n_bins + 1)


def component_histogram(velocities: np.ndarray, axis: str,
                        bin_width: float = 0.025) -> Histogram:
    """Histogram of one velocity component, normalized so the largest
    absolute component (over both axes) lands at +/-1."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    scale = float(np.max(np.abs(velocities)))
    if scale == 0.0:
        raise AllZeroVelocitiesError("all components zero; scale undefined")
    samples = velocities[:, 0 if axis == "x" else 1] / scale
    edges = _tile_edges(bin_width)
    counts, _ = np.histogram(samples, bins=edges)
    return Histogram(bin_edges=edges, counts=counts.astype(np.int64),
                     normalization="count", scale_used=scale)


def value_histogram(values: np.ndarray, bin_width: float = 0.02) -> Histogram:
    """Histogram of already-bounded values (e.g. correlations) on [-1, 1]."""
    edges = _tile_edges(bin_width)
    counts, _ = np.histogram(np.clip(values, -1.0, 1.0), bins=edges)
    return Histogram(bin_edges=edges, counts=counts.astype(np.int64),
                     normalization="count", scale_used=1.0)


def gaussian_fit(samples: np.ndarray) -> GaussianFit:
    """Max-likelihood normal fit with the mean pinned at zero."""
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.size
    if n < 2:
        raise InsufficientSamplesError(f"need >= 2 samples, got {n}")
    sigma = float(np.sqrt(np.mean(samples * samples)))
    return GaussianFit(mu=0.0, sigma=sigma, n=n, degenerate=sigma == 0.0)


def normality_statistic(samples: np.ndarray, sigma: float) -> float:
    """Kolmogorov-Smirnov distance to a centered normal with the given sigma."""
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.size
    if n < 8:
        raise InsufficientSamplesError(f"need >= 8 samples, got {n}")
    if sigma <= 0:
        raise DegenerateSigmaError(f"sigma must be positive, got {sigma}")
    s = np.sort(samples)
    cdf = norm.cdf(s / sigma)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    return float(max(d_plus, d_minus))


def ks_threshold(n: int, alpha: float = 0.01, reps: int = 1000,
                 seed: int = 0) -> float:
    """Monte Carlo critical value for the KS statistic with known sigma."""
    rng = np.random.default_rng(seed)
    stats = np.empty(reps)
    for r in range(reps):
        stats[r] = normality_statistic(rng.standard_normal(n), 1.0)
    return float(np.quantile(stats, 1.0 - alpha))


def pearson(xs: np.ndarray, ys: np.ndarray) -> float:
    """Sample Pearson correlation with explicit degenerate handling."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape:
        raise ValueError(f"length mismatch: {xs.shape} vs {ys.shape}")
    if xs.size < 2:
        raise InsufficientSamplesError(f"need >= 2 pairs, got {xs.size}")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    vx = float(np.dot(dx, dx))
    vy = float(np.dot(dy, dy))
    if vx == 0.0 or vy == 0.0:
        raise DegenerateVarianceError("a margin has zero variance")
    return float(np.dot(dx, dy) / np.sqrt(vx * vy))


def collisional_correlation(velocities: np.ndarray,
                            configuration: Configuration) -> CorrelationSample:
    """Correlation of the two velocities projected on the contact line,
    one sample per adjacent pair (direction from higher toward lower index)."""
    adj = configuration.adjacency
    if adj.shape[0] == 0:
        raise InsufficientSamplesError("no adjacent pairs")
    d = configuration.pair_dirs
    xs = np.sum(velocities[adj[:, 0]] * d, axis=1)
    ys = np.sum(velocities[adj[:, 1]] * d, axis=1)
    return CorrelationSample(kind="collisional", value=pearson(xs, ys),
                             n=adj.shape[0])


def xy_correlation(velocities: np.ndarray) -> CorrelationSample:
    """Pearson correlation of the x and y components across balls."""
    return CorrelationSample(kind="xy",
                             value=pearson(velocities[:, 0], velocities[:, 1]),
                             n=velocities.shape[0])
