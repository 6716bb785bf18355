"""Receding-horizon grid navigation with an ant-colony sub-path planner.

Pipeline per cycle: simulate a LiDAR scan, rasterize it into a robot-centered
local grid, pick the minimum-cost sub-goal among marginal free cells, plan an
8-connected sub-path with the ant colony, execute one step, repeat.
"""

from .aco import (AcoMode, AcoParams, AntPath, AntState, GridGraph,
                  PheromoneField, PlanningGrid, corner_heuristic, heuristic,
                  plan_subpath, roulette_select, score, transition_probabilities,
                  update_pheromone, repair)
from .baselines import ApfParams, apf_step
from .errors import (AntnavError, CollisionDetected, DeadEnd, EmptyCandidates,
                     EmptyRuns, InvalidExtent, LocalMinimum, MapParseError,
                     NoBestPathYet, NoCandidates, NoPathFound, OutOfBounds,
                     PoseInObstacle, PoseOutOfBounds, ScenarioParseError,
                     UnfinishedPath)
from .geometry import Cell, Point, Pose, wrap_angle
from .grid import (CandidateSet, CellState, LocalGrid, build_local_grid,
                   candidate_cells)
from .metrics import (AggregateStats, RunMetrics, RunStatus, aggregate,
                      corner_count, path_length)
from .planner import (CycleRecord, PlannerConfig, PlannerKind, PlannerState,
                      RunResult, plan_cycle, run)
from .scan import Scan, ScanSample, polar_to_world, sector_counts, sector_of, simulate_scan
from .scenario import Scenario, WeightGroup, parse_groups, parse_scenario
from .subgoal import CostWeights, SubGoal, normalize, rank_candidates, raw_constraints, select_subgoal
from .world import MovingObstacle, MoverPolicy, ParsedMap, WorldMap, load_map, parse_map

__version__ = "0.1.0"
