"""Named lattice presets.

Half-plane presets are labeled rect-WxH by the nominal region size.  The
100x50 anchor uses cols=57, rows=25; the other sizes scale cols and rows
proportionally from that anchor (cols = 57*W/100, rows = H/2, rounded,
floor 2).
"""

from __future__ import annotations

from .errors import InvalidSpecError
from .lattice import KIND_HALF_PLANE, KIND_TORUS, LatticeSpec

_HALF_PLANE_SIZES = [
    (10, 5), (60, 30), (100, 50), (200, 100), (300, 150), (400, 200), (500, 250),
]


def _half_plane_spec(w: int, h: int) -> LatticeSpec:
    cols = max(2, round(57 * w / 100))
    rows = max(2, round(h / 2))
    return LatticeSpec(kind=KIND_HALF_PLANE, cols=cols, rows=rows)


PRESETS: dict[str, LatticeSpec] = {
    f"rect-{w}x{h}": _half_plane_spec(w, h) for w, h in _HALF_PLANE_SIZES
}
PRESETS["torus-38x38"] = LatticeSpec(kind=KIND_TORUS, cols=38, rows=38)

SWEEP_PRESETS = [f"rect-{w}x{h}" for w, h in _HALF_PLANE_SIZES]


def get_preset(name: str) -> LatticeSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise InvalidSpecError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")
