"""Scenario files: line-oriented `key value` schema, versioned with a `format 1` header.

Example::

    format 1
    map corridor.map
    seed 7
    planner proposed
    half_extent 4
    alpha 4
    beta 1.8
    omega 1
    delta 0.7
    zeta 0.3

Only `map` is required. Unset keys fall back to defaults: cell_size and
lidar_radius derive from the map cell size and half_extent, goal_tolerance is
half a cell, max_robot_steps is 10x the larger map side. Map paths are
relative to the scenario file. Parse errors carry line numbers.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .aco import AcoParams
from .baselines import ApfParams
from .errors import ScenarioParseError
from .geometry import Point, Pose
from .planner import PlannerConfig, PlannerKind
from .subgoal import CostWeights
from .world import WorldMap, load_map

_INT_KEYS = {"seed", "lidar_rays", "half_extent", "inflation_rings", "sectors",
             "ants", "iterations", "elite_cutoff", "aco_max_steps",
             "max_robot_steps", "apf_step"}
_FLOAT_KEYS = {"cell_size", "lidar_radius", "alpha", "beta", "omega", "delta",
               "zeta", "phi", "gamma", "rho", "deposit", "tau0",
               "goal_tolerance", "apf_k_att", "apf_k_rep", "apf_d0"}
_STR_KEYS = {"map", "planner"}


@dataclass(frozen=True)
class Scenario:
    """A fully resolved run: world, endpoints, planner configuration and seed."""

    name: str
    map_path: str
    world: WorldMap
    start: Pose
    goal: Point
    config: PlannerConfig
    seed: int


def parse_scenario(path) -> Scenario:
    path = Path(path)
    values: dict[str, object] = {}
    seen_format = False
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        parts = line.split(None, 1)
        key = parts[0]
        if not seen_format:
            if key != "format" or len(parts) != 2 or parts[1].strip() != "1":
                raise ScenarioParseError("first directive must be 'format 1'", line_no)
            seen_format = True
            continue
        if len(parts) != 2:
            raise ScenarioParseError(f"directive {key!r} is missing a value", line_no)
        value = parts[1].strip()
        if key in values:
            raise ScenarioParseError(f"duplicate directive {key!r}", line_no)
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ScenarioParseError(f"bad integer for {key!r}: {value!r}", line_no)
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ScenarioParseError(f"bad number for {key!r}: {value!r}", line_no)
        elif key in _STR_KEYS:
            values[key] = value
        else:
            raise ScenarioParseError(f"unknown directive {key!r}", line_no)
    if not seen_format:
        raise ScenarioParseError("empty scenario file", 1)
    if "map" not in values:
        raise ScenarioParseError("missing 'map' directive", len(lines) or 1)

    seed = int(values.get("seed", 0))
    if seed < 0:
        raise ScenarioParseError("seed must be >= 0", 1)

    map_path = (path.parent / str(values["map"])).resolve()
    parsed = load_map(map_path)
    world = parsed.world

    planner_name = str(values.get("planner", "proposed"))
    try:
        planner = PlannerKind(planner_name)
    except ValueError:
        raise ScenarioParseError(
            f"unknown planner {planner_name!r} (expected proposed, conventional-aco or apf)", 1)

    cell_size = float(values.get("cell_size", world.cell_size))
    half_extent = int(values.get("half_extent", 4))
    lidar_radius = float(values.get("lidar_radius", half_extent * cell_size))

    try:
        weights = CostWeights(alpha=float(values.get("alpha", 4.0)),
                              beta=float(values.get("beta", 1.8)),
                              omega=float(values.get("omega", 1.0)))
        aco = AcoParams(phi=float(values.get("phi", 1.0)),
                        gamma=float(values.get("gamma", 5.0)),
                        rho=float(values.get("rho", 0.3)),
                        q=float(values.get("deposit", 1.0)),
                        n_ants=int(values.get("ants", 20)),
                        n_iters=int(values.get("iterations", 50)),
                        delta=float(values.get("delta", 0.7)),
                        zeta=float(values.get("zeta", 0.3)),
                        tau0=float(values.get("tau0", 1.0)),
                        max_steps=values.get("aco_max_steps"),
                        elite_cutoff=values.get("elite_cutoff"))
        apf = ApfParams(k_att=float(values.get("apf_k_att", 1.0)),
                        k_rep=float(values.get("apf_k_rep", 100.0)),
                        d0=values.get("apf_d0"),
                        step=int(values.get("apf_step", 1)))
        config = PlannerConfig(weights=weights, aco=aco, apf=apf, planner=planner,
                               lidar_radius=lidar_radius, n_rays=int(values.get("lidar_rays", 360)),
                               cell_size=cell_size, half_extent=half_extent,
                               inflation_rings=int(values.get("inflation_rings", 1)),
                               n_sectors=int(values.get("sectors", 36)),
                               goal_tolerance=values.get("goal_tolerance"),
                               max_robot_steps=values.get("max_robot_steps"))
    except ValueError as exc:
        raise ScenarioParseError(str(exc), 1) from exc

    return Scenario(name=path.stem, map_path=str(map_path), world=world,
                    start=parsed.start, goal=parsed.goal, config=config, seed=seed)


def with_seed(scenario: Scenario, seed: int) -> Scenario:
    return replace(scenario, seed=seed)


def with_planner(scenario: Scenario, planner: PlannerKind) -> Scenario:
    return replace(scenario, config=replace(scenario.config, planner=planner))


def with_weights(scenario: Scenario, weights: CostWeights, delta: float,
                 zeta: float) -> Scenario:
    aco = replace(scenario.config.aco, delta=delta, zeta=zeta)
    return replace(scenario, config=replace(scenario.config, weights=weights, aco=aco))


@dataclass(frozen=True)
class WeightGroup:
    name: str
    weights: CostWeights
    delta: float
    zeta: float


def parse_groups(path) -> list[WeightGroup]:
    """Groups file: one `name alpha beta omega delta zeta` line per group."""
    groups: list[WeightGroup] = []
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ScenarioParseError("expected: <name> <alpha> <beta> <omega> <delta> <zeta>",
                                     line_no)
        try:
            alpha, beta, omega, delta, zeta = (float(v) for v in parts[1:])
        except ValueError:
            raise ScenarioParseError("bad number in group line", line_no)
        try:
            groups.append(WeightGroup(parts[0], CostWeights(alpha, beta, omega), delta, zeta))
        except ValueError as exc:
            raise ScenarioParseError(str(exc), line_no) from exc
    if not groups:
        raise ScenarioParseError("groups file defines no groups", len(lines) or 1)
    return groups
