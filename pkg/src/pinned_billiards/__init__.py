"""Deterministic Monte Carlo simulator for pinned billiard balls on
triangular lattices (staggered half-plane rectangles and flat tori)."""

__version__ = "0.1.0"

from .core import (Vec2, VelocityPair, collide, is_approaching,
                   kinetic_energy, total_momentum, unit_direction)
from .engine import (InitialCondition, RunResult, SimConfig, SimState,
                     StoppingRule, init, run, run_batch, step)
from .lattice import (Configuration, LatticeSpec, adjacency_oracle, build,
                      build_half_plane_rect, build_torus)
from .presets import PRESETS, SWEEP_PRESETS, get_preset

__all__ = [
    "Vec2", "VelocityPair", "collide", "is_approaching", "kinetic_energy",
    "total_momentum", "unit_direction",
    "InitialCondition", "RunResult", "SimConfig", "SimState", "StoppingRule",
    "init", "run", "run_batch", "step",
    "Configuration", "LatticeSpec", "adjacency_oracle", "build",
    "build_half_plane_rect", "build_torus",
    "PRESETS", "SWEEP_PRESETS", "get_preset",
    "__version__",
]
