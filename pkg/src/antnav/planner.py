"""Receding-horizon planner loop: scan, local grid, sub-goal, sub-path, one step.

Each cycle replans from scratch against the latest scan and executes exactly
one cell of the planned sub-path; the heading after a cycle is the direction
of the executed step. Moving obstacles advance one schedule tick per cycle
before the scan.
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .aco import AcoMode, AcoParams, plan_subpath
from .baselines import ApfParams, apf_step
from .errors import LocalMinimum, NoCandidates, NoPathFound
from .geometry import Cell, Point, Pose, SQRT2
from .grid import CellState, LocalGrid, build_local_grid, candidate_cells
from .metrics import RunMetrics, RunStatus, corner_count, path_length
from .scan import simulate_scan
from .subgoal import CostWeights, rank_candidates
from .world import WorldMap

if TYPE_CHECKING:
    from .scenario import Scenario


class PlannerKind(enum.Enum):
    PROPOSED = "proposed"
    CONVENTIONAL_ACO = "conventional-aco"
    APF = "apf"


@dataclass(frozen=True)
class PlannerConfig:
    """Everything a run needs besides the world, start, goal and seed."""

    weights: CostWeights = CostWeights()
    aco: AcoParams = AcoParams()
    apf: ApfParams = ApfParams()
    planner: PlannerKind = PlannerKind.PROPOSED
    lidar_radius: float = 6.0
    n_rays: int = 360
    cell_size: float = 1.5
    half_extent: int = 4
    inflation_rings: int = 1
    n_sectors: int = 36
    goal_tolerance: float | None = None  # None = half a cell
    max_robot_steps: int | None = None  # None = 10 * max(world side)

    def resolved_goal_tolerance(self) -> float:
        return self.goal_tolerance if self.goal_tolerance is not None else 0.5 * self.cell_size

    def resolved_max_steps(self, world: WorldMap) -> int:
        if self.max_robot_steps is not None:
            return self.max_robot_steps
        return 10 * max(world.width, world.height)

    def aco_for_planner(self) -> AcoParams:
        """Mode override: the conventional baseline is the same planner in CONVENTIONAL mode."""
        if self.planner is PlannerKind.CONVENTIONAL_ACO:
            return replace(self.aco, mode=AcoMode.CONVENTIONAL)
        return self.aco


@dataclass(frozen=True)
class PlannerState:
    pose: Pose
    step_index: int
    desired_path: tuple[Point, ...]  # accumulated world-frame trajectory
    status: RunStatus


@dataclass(frozen=True)
class CycleRecord:
    cycle: int
    pose: Pose
    subgoal: Point | None
    subpath: tuple[Point, ...]  # world centers of the planned sub-path cells
    dist_to_goal: float
    aco_series: tuple[float, ...]
    status: RunStatus


@dataclass(frozen=True)
class RunResult:
    poses: tuple[Pose, ...]
    records: tuple[CycleRecord, ...]
    metrics: RunMetrics


def _goal_distance(pose: Pose, goal: Point) -> float:
    return math.hypot(pose.x - goal[0], pose.y - goal[1])


def _mask_occluded(grid: LocalGrid, scan) -> LocalGrid:
    """Mark free cells hidden behind scan hits as non-traversable.

    A free-looking cell whose bearing ray returned a hit closer than the cell
    was never actually observed; planning into such shadows produces phantom
    passages through walls. Cells in open directions (no hit on their ray)
    stay free, so the optimistic treatment of unexplored space is preserved.
    """
    if not scan.samples:
        return grid
    n = scan.n_rays
    sector = math.tau / n
    hit_by_ray: dict[int, float] = {}
    for s in scan.samples:
        hit_by_ray[int(round(s.theta / sector)) % n] = s.d
    cells = grid.cells.copy()
    side = grid.side
    origin = grid.center
    margin = 0.5 * SQRT2 * grid.cell_size
    changed = False
    for r in range(side):
        for c in range(side):
            if cells[r, c] != CellState.FREE:
                continue
            wx, wy = grid.world_center((r, c))
            dx, dy = wx - origin.x, wy - origin.y
            d = math.hypot(dx, dy)
            if d <= grid.cell_size:
                continue  # the adjacent ring is always observed
            theta = (origin.psi - math.atan2(dy, dx)) % math.tau
            hit = hit_by_ray.get(int(round(theta / sector)) % n)
            if hit is not None and hit < d - margin:
                cells[r, c] = CellState.INFLATED
                changed = True
    if not changed:
        return grid
    return LocalGrid(grid.center, grid.cell_size, grid.half_extent, cells)


def _clamp_to_world(grid: LocalGrid, world: WorldMap) -> LocalGrid:
    """Mark local cells lying outside the world map as occupied.

    The local square can poke past the simulated world's envelope; such cells
    can never be scanned and must not look like free space to plan through.
    No inflation is added: out-of-world cells always sit behind the map's own
    boundary obstacles.
    """
    cells = grid.cells.copy()
    side = grid.side
    changed = False
    for r in range(side):
        for c in range(side):
            wx, wy = grid.world_center((r, c))
            if not world.in_bounds(world.cell_of(wx, wy)):
                cells[r, c] = CellState.OCCUPIED
                changed = True
    if not changed:
        return grid
    return LocalGrid(grid.center, grid.cell_size, grid.half_extent, cells)


def _reachable_component(grid: LocalGrid) -> set[Cell]:
    """Cells 8-connected to the robot cell through traversable cells."""
    mask = grid.traversable_mask()
    side = grid.side
    start = grid.center_cell
    seen = {start}
    stack = [start]
    while stack:
        r, c = stack.pop()
        for nr in (r - 1, r, r + 1):
            for nc in (c - 1, c, c + 1):
                if 0 <= nr < side and 0 <= nc < side and (nr, nc) not in seen \
                        and mask[nr, nc]:
                    seen.add((nr, nc))
                    stack.append((nr, nc))
    return seen


def _advance_state(state: PlannerState, grid: LocalGrid, next_cell: Cell,
                   goal: Point, tolerance: float) -> PlannerState:
    h = grid.half_extent
    dr, dc = next_cell[0] - h, next_cell[1] - h
    wx, wy = grid.world_center(next_cell)
    pose = Pose(wx, wy, math.atan2(dr, dc))
    status = RunStatus.GOAL_REACHED if _goal_distance(pose, goal) <= tolerance else RunStatus.RUNNING
    return PlannerState(pose, state.step_index + 1, state.desired_path + ((wx, wy),), status)


def plan_cycle(world: WorldMap, state: PlannerState, goal: Point,
               config: PlannerConfig, seed: int, cycle: int) -> tuple[PlannerState, CycleRecord]:
    """One replanning cycle against the world at its current tick."""
    if state.status is not RunStatus.RUNNING:
        raise ValueError("plan_cycle requires a running state")
    pose = state.pose
    tolerance = config.resolved_goal_tolerance()
    scan = simulate_scan(world, pose, config.lidar_radius, config.n_rays)
    grid = build_local_grid(scan, config.cell_size, config.half_extent,
                            config.inflation_rings, config.n_sectors)
    grid = _clamp_to_world(_mask_occluded(grid, scan), world)

    def halted(status: RunStatus) -> tuple[PlannerState, CycleRecord]:
        halted_state = replace(state, status=status)
        rec = CycleRecord(cycle, pose, None, (), _goal_distance(pose, goal), (), status)
        return halted_state, rec

    if config.planner is PlannerKind.APF:
        try:
            next_cell = apf_step(grid, pose, goal, config.apf)
        except LocalMinimum:
            return halted(RunStatus.LOCAL_MINIMUM)
        new_state = _advance_state(state, grid, next_cell, goal, tolerance)
        rec = CycleRecord(cycle, new_state.pose, None, (),
                          _goal_distance(new_state.pose, goal), (), new_state.status)
        return new_state, rec

    try:
        candidates = candidate_cells(grid)
    except NoCandidates:
        return halted(RunStatus.STUCK)

    # Cells the robot can actually reach within this grid. When the reachable
    # free space is a closed pocket that touches no grid edge and does not
    # contain the goal, no sub-goal can ever make progress: the robot is stuck.
    component = _reachable_component(grid)
    goal_cell = grid.cell_containing(goal)
    goal_inside = goal_cell is not None and goal_cell in component
    side = grid.side
    if not goal_inside and not any(r in (0, side - 1) or c in (0, side - 1)
                                   for r, c in component):
        return halted(RunStatus.STUCK)

    # Terminal capture: a visible free goal cell overrides the cost function,
    # otherwise the chain of sub-goals can orbit the goal forever.
    trials: list[tuple[Cell, Point]] = []
    if goal_inside and goal_cell != grid.center_cell \
            and grid.state_at(goal_cell) is CellState.FREE:
        trials.append((goal_cell, grid.world_center(goal_cell)))
    ranked = rank_candidates(grid, candidates, pose, goal, config.weights)
    capture = trials[0][0] if trials else None
    trials.extend((sg.cell, sg.world) for sg in ranked
                  if sg.cell != capture and sg.cell in component)
    if not trials:
        return halted(RunStatus.STUCK)

    aco_params = config.aco_for_planner()
    path = None
    subgoal_world = None
    series: list[float] = []
    for attempt, (cell, wpt) in enumerate(trials):
        try:
            path, series = plan_subpath(grid, grid.center_cell, cell, aco_params,
                                        (seed, cycle, attempt))
        except NoPathFound:
            continue  # unreachable within the local grid; fall back to the next candidate
        subgoal_world = wpt
        break
    if path is None:
        return halted(RunStatus.STUCK)

    new_state = _advance_state(state, grid, path.cells[1], goal, tolerance)
    rec = CycleRecord(cycle, new_state.pose, subgoal_world,
                      tuple(grid.world_center(c) for c in path.cells),
                      _goal_distance(new_state.pose, goal), tuple(series), new_state.status)
    return new_state, rec


def run(scenario: "Scenario") -> RunResult:
    """Run a scenario to a verdict: GoalReached, Stuck, LocalMinimum, StepBudgetExhausted or Collision."""
    config = scenario.config
    world = scenario.world
    goal = scenario.goal
    tolerance = config.resolved_goal_tolerance()
    max_steps = config.resolved_max_steps(world)

    t0 = time.perf_counter()
    state = PlannerState(scenario.start, 0, (scenario.start.xy,), RunStatus.RUNNING)
    if _goal_distance(state.pose, goal) <= tolerance:
        state = replace(state, status=RunStatus.GOAL_REACHED)

    poses = [state.pose]
    records: list[CycleRecord] = []
    while state.status is RunStatus.RUNNING:
        if state.step_index >= max_steps:
            state = replace(state, status=RunStatus.STEP_BUDGET_EXHAUSTED)
            break
        world = world.advanced()
        robot_cell = world.cell_of(state.pose.x, state.pose.y)
        if world.occupancy_at(robot_cell):
            state = replace(state, status=RunStatus.COLLISION)
            break
        state, rec = plan_cycle(world, state, goal, config, scenario.seed, state.step_index)
        records.append(rec)
        poses.append(state.pose)
        if state.status is RunStatus.RUNNING \
                and world.occupancy_at(world.cell_of(state.pose.x, state.pose.y)):
            state = replace(state, status=RunStatus.COLLISION)
            break
    wall_ms = (time.perf_counter() - t0) * 1000.0

    points = [p.xy for p in poses]
    dist_series = (_goal_distance(poses[0], goal),) + tuple(r.dist_to_goal for r in records)
    metrics = RunMetrics(
        path_length=path_length(points),
        corners=corner_count(points),
        cycles=len(records),
        dist_series=dist_series,
        aco_series=tuple(r.aco_series for r in records),
        status=state.status,
        wall_ms=wall_ms,
    )
    return RunResult(tuple(poses), tuple(records), metrics)
