"""Two-body elastic pseudo-collision algebra and conservation diagnostics.

Velocities live on pinned balls: positions never change, only the velocity
labels are exchanged along contact directions.  Everything here is a pure
function in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import CoincidentPointsError, NonUnitDirectionError

# Distance below which two centers cannot define a contact direction.
COINCIDENT_EPS = 1e-12
# Allowed deviation of ||d|| from 1 for direction arguments.
UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite components: ({self.x}, {self.y})")

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    def perp(self) -> "Vec2":
        return Vec2(-self.y, self.x)


class VelocityPair(NamedTuple):
    v1: Vec2
    v2: Vec2


def unit_direction(p1: Vec2, p2: Vec2, eps: float = COINCIDENT_EPS) -> Vec2:
    """Unit vector pointing from p2 toward p1."""
    dx = p1.x - p2.x
    dy = p1.y - p2.y
    dist = math.hypot(dx, dy)
    if dist <= eps:
        raise CoincidentPointsError(f"centers within {eps}: {p1} vs {p2}")
    return Vec2(dx / dist, dy / dist)


def _check_unit(d: Vec2) -> None:
    if abs(d.norm() - 1.0) > UNIT_TOL:
        raise NonUnitDirectionError(f"||d|| = {d.norm()} is not 1 within {UNIT_TOL}")


def is_approaching(v1: Vec2, v2: Vec2, d: Vec2) -> bool:
    """True iff the pair moves together along d (strict: grazing is not a hit)."""
    _check_unit(d)
    return d.dot(v1 - v2) < 0.0


def collide(v1: Vec2, v2: Vec2, d: Vec2) -> VelocityPair:
    """Exchange the velocity components parallel to d, equal masses.

    Unconditional: callers gate on is_approaching when simulating.
    """
    _check_unit(d)
    a1 = v1.dot(d)
    a2 = v2.dot(d)
    v1p = Vec2(v1.x + (a2 - a1) * d.x, v1.y + (a2 - a1) * d.y)
    v2p = Vec2(v2.x + (a1 - a2) * d.x, v2.y + (a1 - a2) * d.y)
    return VelocityPair(v1p, v2p)


def _as_array(velocities) -> np.ndarray:
    if isinstance(velocities, np.ndarray):
        return velocities.reshape(-1, 2)
    return np.array([(v.x, v.y) for v in velocities], dtype=np.float64).reshape(-1, 2)


def kinetic_energy(velocities: Iterable[Vec2] | np.ndarray) -> float:
    """Total kinetic energy at unit mass: half the sum of squared speeds."""
    arr = _as_array(velocities)
    return 0.5 * float(np.sum(arr * arr))


def total_momentum(velocities: Iterable[Vec2] | np.ndarray) -> Vec2:
    """Component-wise sum of all velocities (unit masses)."""
    arr = _as_array(velocities)
    if arr.size == 0:
        return Vec2(0.0, 0.0)
    s = arr.sum(axis=0)
    return Vec2(float(s[0]), float(s[1]))
