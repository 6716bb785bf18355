"""Ground-truth simulation world: static occupancy grid plus movers on waypoint schedules.

World snapshots are immutable; ``advanced()`` returns the next tick. Movers
occupy whole cells and their position is a pure function of the tick, so
replays are bit-identical.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MapParseError, OutOfBounds
from .geometry import Cell, Point, Pose


class MoverPolicy(enum.Enum):
    LOOP = "loop"
    PINGPONG = "pingpong"
    STOP = "stop"


@dataclass(frozen=True)
class MovingObstacle:
    """Obstacle following a waypoint schedule, one waypoint hop per ticks_per_move ticks."""

    waypoints: tuple[Cell, ...]
    ticks_per_move: int = 1
    policy: MoverPolicy = MoverPolicy.STOP
    footprint: tuple[Cell, ...] = ((0, 0),)  # cell offsets around the waypoint

    def __post_init__(self):
        if not self.waypoints:
            raise ValueError("mover needs at least one waypoint")
        if self.ticks_per_move < 1:
            raise ValueError("ticks_per_move must be >= 1")
        if not self.footprint:
            raise ValueError("mover footprint must be non-empty")
        for (r0, c0), (r1, c1) in zip(self.waypoints, self.waypoints[1:]):
            if max(abs(r1 - r0), abs(c1 - c0)) > 1:
                raise ValueError(f"waypoints {(r0, c0)} -> {(r1, c1)} are not 8-adjacent or identical")

    def anchor_at(self, tick: int) -> Cell:
        """Waypoint the mover sits on at the given tick."""
        moves = tick // self.ticks_per_move
        n = len(self.waypoints)
        if n == 1:
            return self.waypoints[0]
        if self.policy is MoverPolicy.STOP:
            idx = min(moves, n - 1)
        elif self.policy is MoverPolicy.LOOP:
            idx = moves % n
        else:  # PINGPONG over 0..n-1..0
            period = 2 * (n - 1)
            k = moves % period
            idx = k if k < n else period - k
        return self.waypoints[idx]

    def cells_at(self, tick: int) -> list[Cell]:
        ar, ac = self.anchor_at(tick)
        return [(ar + dr, ac + dc) for dr, dc in self.footprint]


class WorldMap:
    """Static occupancy bitmap plus movers; immutable snapshot at one tick."""

    def __init__(self, static_cells: np.ndarray, cell_size: float,
                 movers: tuple[MovingObstacle, ...] = (), tick: int = 0):
        static_cells = np.asarray(static_cells, dtype=bool)
        if static_cells.ndim != 2:
            raise ValueError("static_cells must be a 2D array")
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        self.static_cells = static_cells
        self.cell_size = float(cell_size)
        self.movers = tuple(movers)
        self.tick = int(tick)
        self._occ: np.ndarray | None = None
        for m in self.movers:
            for cell in m.cells_at(tick):
                if not self.in_bounds(cell):
                    raise ValueError(f"mover cell {cell} outside world bounds at tick {tick}")

    @property
    def height(self) -> int:
        return self.static_cells.shape[0]

    @property
    def width(self) -> int:
        return self.static_cells.shape[1]

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.height and 0 <= c < self.width

    def occupancy_at(self, cell: Cell) -> bool:
        """True when the cell is occupied by the static map or any mover footprint."""
        if not self.in_bounds(cell):
            raise OutOfBounds(f"cell {cell} outside {self.height}x{self.width} world")
        return bool(self.occupancy_grid()[cell])

    def occupancy_grid(self) -> np.ndarray:
        """Composed static+mover occupancy at this tick (cached; treat as read-only)."""
        if self._occ is None:
            occ = self.static_cells.copy()
            for m in self.movers:
                for cell in m.cells_at(self.tick):
                    occ[cell] = True
            self._occ = occ
        return self._occ

    def advanced(self) -> "WorldMap":
        """Snapshot at the next tick; the static bitmap is shared, not copied."""
        nxt = WorldMap.__new__(WorldMap)
        nxt.static_cells = self.static_cells
        nxt.cell_size = self.cell_size
        nxt.movers = self.movers
        nxt.tick = self.tick + 1
        nxt._occ = None
        for m in nxt.movers:
            for cell in m.cells_at(nxt.tick):
                if not nxt.in_bounds(cell):
                    raise ValueError(f"mover cell {cell} outside world bounds at tick {nxt.tick}")
        return nxt

    def cell_of(self, x: float, y: float) -> Cell:
        return (int(math.floor(y / self.cell_size)), int(math.floor(x / self.cell_size)))

    def cell_center(self, cell: Cell) -> Point:
        r, c = cell
        return ((c + 0.5) * self.cell_size, (r + 0.5) * self.cell_size)


@dataclass(frozen=True)
class ParsedMap:
    """Result of parsing a map file: the world plus start pose and goal point."""

    world: WorldMap
    start: Pose
    goal: Point
    start_cell: Cell = field(compare=False, default=(0, 0))
    goal_cell: Cell = field(compare=False, default=(0, 0))


def parse_map(text: str) -> ParsedMap:
    """Parse the ASCII map format.

    Grid rows are lines of ``#`` (occupied) and ``.`` (free); the first grid
    line in the file is the top row of the world (highest row index).
    Directives: ``cellsize <m>``, ``start <col> <row> <psi_deg>``,
    ``goal <col> <row>``, and mover blocks ``mover <ticks_per_move> <policy>``
    followed by ``wp <col> <row>`` lines. Raises MapParseError with the
    offending line number.
    """
    cell_size: float | None = None
    start_spec: tuple[int, int, float] | None = None
    goal_spec: tuple[int, int] | None = None
    grid_rows: list[tuple[int, str]] = []  # (line_no, row text), file order
    movers: list[MovingObstacle] = []
    pending: tuple[int, MoverPolicy, list[Cell]] | None = None  # open mover block

    def close_pending(line_no: int):
        nonlocal pending
        if pending is None:
            return
        ticks, policy, wps = pending
        if not wps:
            raise MapParseError("mover block has no waypoints", line_no)
        try:
            movers.append(MovingObstacle(tuple(wps), ticks, policy))
        except ValueError as exc:
            raise MapParseError(str(exc), line_no) from exc
        pending = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if set(stripped) <= {"#", "."}:
            close_pending(line_no)
            grid_rows.append((line_no, stripped))
            continue
        parts = stripped.split()
        key = parts[0]
        if key == "cellsize":
            close_pending(line_no)
            if len(parts) != 2:
                raise MapParseError("expected: cellsize <meters>", line_no)
            try:
                cell_size = float(parts[1])
            except ValueError:
                raise MapParseError(f"bad cellsize value {parts[1]!r}", line_no)
            if cell_size <= 0:
                raise MapParseError("cellsize must be positive", line_no)
        elif key == "start":
            close_pending(line_no)
            if len(parts) != 4:
                raise MapParseError("expected: start <col> <row> <psi_deg>", line_no)
            try:
                start_spec = (int(parts[1]), int(parts[2]), float(parts[3]))
            except ValueError:
                raise MapParseError("bad start values", line_no)
        elif key == "goal":
            close_pending(line_no)
            if len(parts) != 3:
                raise MapParseError("expected: goal <col> <row>", line_no)
            try:
                goal_spec = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise MapParseError("bad goal values", line_no)
        elif key == "mover":
            close_pending(line_no)
            if len(parts) != 3:
                raise MapParseError("expected: mover <ticks_per_move> <policy>", line_no)
            try:
                ticks = int(parts[1])
            except ValueError:
                raise MapParseError("bad ticks_per_move value", line_no)
            try:
                policy = MoverPolicy(parts[2].lower())
            except ValueError:
                raise MapParseError(f"unknown mover policy {parts[2]!r}", line_no)
            pending = (ticks, policy, [])
        elif key == "wp":
            if pending is None:
                raise MapParseError("wp line outside a mover block", line_no)
            if len(parts) != 3:
                raise MapParseError("expected: wp <col> <row>", line_no)
            try:
                col, row = int(parts[1]), int(parts[2])
            except ValueError:
                raise MapParseError("bad waypoint values", line_no)
            pending[2].append((row, col))
        else:
            raise MapParseError(f"unknown directive {key!r}", line_no)

    last_line = text.count("\n") + 1
    close_pending(last_line)

    if not grid_rows:
        raise MapParseError("map has no grid rows", last_line)
    if cell_size is None:
        raise MapParseError("missing cellsize directive", last_line)
    if start_spec is None:
        raise MapParseError("missing start directive", last_line)
    if goal_spec is None:
        raise MapParseError("missing goal directive", last_line)

    width = len(grid_rows[0][1])
    height = len(grid_rows)
    static = np.zeros((height, width), dtype=bool)
    # First file line is the top row: file index i -> world row height-1-i.
    for i, (line_no, row_text) in enumerate(grid_rows):
        if len(row_text) != width:
            raise MapParseError(f"grid row has {len(row_text)} cells, expected {width}", line_no)
        static[height - 1 - i, :] = [ch == "#" for ch in row_text]

    world = WorldMap(static, cell_size, tuple(movers))

    s_col, s_row, psi_deg = start_spec
    if not world.in_bounds((s_row, s_col)):
        raise MapParseError(f"start cell ({s_col}, {s_row}) outside the grid", last_line)
    if world.static_cells[s_row, s_col]:
        raise MapParseError(f"start cell ({s_col}, {s_row}) is occupied", last_line)
    g_col, g_row = goal_spec
    if not world.in_bounds((g_row, g_col)):
        raise MapParseError(f"goal cell ({g_col}, {g_row}) outside the grid", last_line)

    sx, sy = world.cell_center((s_row, s_col))
    start = Pose(sx, sy, math.radians(psi_deg))
    goal = world.cell_center((g_row, g_col))
    return ParsedMap(world, start, goal, (s_row, s_col), (g_row, g_col))


def load_map(path) -> ParsedMap:
    with open(path, "r", encoding="utf-8") as f:
        return parse_map(f.read())
