"""Robot-centered local occupancy grid: the square discretization of the scan disc.

The grid is axis-aligned in the world frame and centered on the scan origin,
so when the robot sits on a world cell center with matching cell size, local
cells coincide with world cells. Occupied cells are inflated by marking their
8-neighborhood (configurable ring count) as non-traversable.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import floor

import numpy as np

from .errors import InvalidExtent, NoCandidates
from .geometry import Cell, Point, Pose
from .scan import Scan, polar_to_world, sector_of


class CellState(enum.IntEnum):
    FREE = 0
    OCCUPIED = 1
    INFLATED = 2
    ROBOT = 3


@dataclass(frozen=True)
class LocalGrid:
    """Square 2*half_extent+1 grid of CellState; the robot occupies the exact center."""

    center: Pose
    cell_size: float
    half_extent: int
    cells: np.ndarray  # int8 array of CellState, shape (side, side)

    @property
    def side(self) -> int:
        return 2 * self.half_extent + 1

    @property
    def center_cell(self) -> Cell:
        return (self.half_extent, self.half_extent)

    def state_at(self, cell: Cell) -> CellState:
        return CellState(self.cells[cell])

    def world_center(self, cell: Cell) -> Point:
        r, c = cell
        h = self.half_extent
        return (self.center.x + (c - h) * self.cell_size,
                self.center.y + (r - h) * self.cell_size)

    def world_offsets(self) -> dict[Cell, Point]:
        """World-frame center coordinates for every cell of the grid."""
        side = self.side
        return {(r, c): self.world_center((r, c)) for r in range(side) for c in range(side)}

    def cell_containing(self, point: Point) -> Cell | None:
        """Grid cell containing a world point, or None when outside the square."""
        h = self.half_extent
        dc = floor((point[0] - self.center.x) / self.cell_size + 0.5)
        dr = floor((point[1] - self.center.y) / self.cell_size + 0.5)
        r, c = h + int(dr), h + int(dc)
        if 0 <= r < self.side and 0 <= c < self.side:
            return (r, c)
        return None

    def traversable_mask(self) -> np.ndarray:
        """Boolean mask of cells an ant may occupy (free cells plus the robot cell)."""
        return (self.cells == CellState.FREE) | (self.cells == CellState.ROBOT)


@dataclass(frozen=True)
class CandidateSet:
    """Sub-goal candidates: (cell, world center) pairs in row-major order."""

    cells: tuple[tuple[Cell, Point], ...]


def build_local_grid(scan: Scan, cell_size: float, half_extent: int,
                     inflation_rings: int = 1, n_sectors: int = 36) -> LocalGrid:
    """Rasterize a scan into the local grid and inflate obstacles.

    Samples are grouped per bearing sector before cell assignment (the grouping
    does not change the result; marking is idempotent). Samples landing outside
    the square are discarded. Raises InvalidExtent when the square would poke
    out of the scan disc (half_extent * cell_size > scan radius).
    """
    if half_extent < 1:
        raise InvalidExtent("half_extent must be >= 1")
    if half_extent * cell_size > scan.radius + 1e-9:
        raise InvalidExtent(
            f"half_extent {half_extent} x cell_size {cell_size} exceeds scan radius {scan.radius}")
    if inflation_rings < 0:
        raise ValueError("inflation_rings must be >= 0")

    side = 2 * half_extent + 1
    h = half_extent
    cells = np.full((side, side), CellState.FREE, dtype=np.int8)

    by_sector: dict[int, list] = {}
    for s in scan.samples:
        by_sector.setdefault(sector_of(s, n_sectors), []).append(s)

    ox, oy = scan.origin.x, scan.origin.y
    for sector in sorted(by_sector):
        for s in by_sector[sector]:
            wx, wy = polar_to_world(scan.origin, s)
            c = h + int(floor((wx - ox) / cell_size + 0.5))
            r = h + int(floor((wy - oy) / cell_size + 0.5))
            if 0 <= r < side and 0 <= c < side and (r, c) != (h, h):
                cells[r, c] = CellState.OCCUPIED

    if inflation_rings > 0:
        occupied = np.argwhere(cells == CellState.OCCUPIED)
        k = inflation_rings
        for r, c in occupied:
            r0, r1 = max(0, r - k), min(side, r + k + 1)
            c0, c1 = max(0, c - k), min(side, c + k + 1)
            block = cells[r0:r1, c0:c1]
            block[block == CellState.FREE] = CellState.INFLATED

    cells[h, h] = CellState.ROBOT
    return LocalGrid(scan.origin, cell_size, half_extent, cells)


def candidate_cells(grid: LocalGrid) -> CandidateSet:
    """Marginal free cells eligible as sub-goals.

    A free cell is marginal when it lies on the outer ring of the square or is
    8-adjacent to an occupied/inflated cell. Raises NoCandidates when the set
    is empty (robot enclosed).
    """
    side = grid.side
    cells = grid.cells
    blocked = (cells == CellState.OCCUPIED) | (cells == CellState.INFLATED)
    out: list[tuple[Cell, Point]] = []
    for r in range(side):
        for c in range(side):
            if cells[r, c] != CellState.FREE:
                continue
            if r == 0 or c == 0 or r == side - 1 or c == side - 1:
                marginal = True
            else:
                marginal = bool(blocked[r - 1:r + 2, c - 1:c + 2].any())
            if marginal:
                out.append(((r, c), grid.world_center((r, c))))
    if not out:
        raise NoCandidates("no free marginal cells around the robot")
    return CandidateSet(tuple(out))
