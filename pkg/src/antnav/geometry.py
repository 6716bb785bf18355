"""Shared 2D helpers: angle wrapping, robot pose, 8-connected grid directions."""
from __future__ import annotations

import math
from dataclasses import dataclass

Cell = tuple[int, int]  # (row, col); row grows with world +y, col with +x
Point = tuple[float, float]  # world-frame meters

SQRT2 = math.sqrt(2.0)


def wrap_angle(a: float) -> float:
    """Wrap an angle in radians to (-pi, pi]."""
    w = math.fmod(a, math.tau)
    if w > math.pi:
        w -= math.tau
    elif w <= -math.pi:
        w += math.tau
    return w


@dataclass(frozen=True)
class Pose:
    """Robot pose in the world frame; yaw is wrapped to (-pi, pi] on construction."""

    x: float
    y: float
    psi: float

    def __post_init__(self):
        object.__setattr__(self, "psi", wrap_angle(self.psi))

    @property
    def xy(self) -> Point:
        return (self.x, self.y)


# Canonical 8-neighbor order used everywhere a neighborhood is enumerated
# (roulette selection, deposits, candidate scans): N, NE, E, SE, S, SW, W, NW,
# with N = +row = +y.
DIR_OFFSETS: tuple[Cell, ...] = (
    (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1),
)
DIR_ANGLES: tuple[float, ...] = tuple(math.atan2(dr, dc) for dr, dc in DIR_OFFSETS)
DIR_INDEX: dict[Cell, int] = {off: i for i, off in enumerate(DIR_OFFSETS)}
DIR_IS_DIAGONAL: tuple[bool, ...] = tuple(dr != 0 and dc != 0 for dr, dc in DIR_OFFSETS)
