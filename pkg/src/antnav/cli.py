"""Command line front end: run one scenario, compare planners, sweep weight groups.

Exit codes for `run`: 0 goal reached, 1 parse error, 2 stuck / local minimum /
step budget exhausted, 3 collision. `compare` and `sweep` exit 0 once all runs
complete (individual verdicts land in the CSVs) and 1 on parse errors.

All CSVs are deterministic for a fixed seed; wall-clock numbers go to the
summary block and timings.csv only. REPLAN_THREADS caps worker threads for
ant construction (0 = serial) without changing any output.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .errors import AntnavError
from .geometry import SQRT2
from .metrics import (RunMetrics, RunStatus, aggregate, fmt,
                      write_aco_series_csv, write_aggregate_csv,
                      write_distance_csv, write_summary, write_trajectory_csv)
from .planner import PlannerKind, RunResult, run
from .plot import write_svg
from .scenario import (Scenario, parse_groups, parse_scenario, with_planner,
                       with_seed, with_weights)

_EXIT_BY_STATUS = {
    RunStatus.GOAL_REACHED: 0,
    RunStatus.STUCK: 2,
    RunStatus.LOCAL_MINIMUM: 2,
    RunStatus.STEP_BUDGET_EXHAUSTED: 2,
    RunStatus.COLLISION: 3,
}


def _load_scenario(args) -> Scenario:
    scenario = parse_scenario(args.scenario)
    if args.seed is not None:
        if args.seed < 0:
            raise AntnavError("seed must be >= 0")
        scenario = with_seed(scenario, args.seed)
    return scenario


def _trajectory_rows(result: RunResult):
    rows = [(0, result.poses[0].x, result.poses[0].y, result.poses[0].psi,
             result.metrics.dist_series[0])]
    for rec in result.records:
        rows.append((rec.cycle + 1, rec.pose.x, rec.pose.y, rec.pose.psi, rec.dist_to_goal))
    return rows


def _write_run_outputs(out_dir: Path, scenario: Scenario, result: RunResult,
                       plot: bool) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(out_dir / "trajectory.csv", _trajectory_rows(result))
    m = result.metrics
    write_summary(out_dir / "summary.txt", {
        "scenario": scenario.name,
        "map": scenario.map_path,
        "planner": scenario.config.planner.value,
        "seed": scenario.seed,
        "status": m.status.value,
        "cycles": m.cycles,
        "path_length_m": m.path_length,
        "corners": m.corners,
        "final_distance_m": m.dist_series[-1],
        "goal_tolerance_m": scenario.config.resolved_goal_tolerance(),
        "wall_ms": round(m.wall_ms, 3),
    })
    if plot:
        write_svg(out_dir / "plot.svg", scenario.world, result, scenario.goal)


def cmd_run(args) -> int:
    scenario = _load_scenario(args)
    result = run(scenario)
    _write_run_outputs(Path(args.out), scenario, result, args.plot)
    m = result.metrics
    print(f"{scenario.name}: {m.status.value} after {m.cycles} cycles, "
          f"path {m.path_length:.2f} m, {m.corners} corners")
    return _EXIT_BY_STATUS[m.status]


def _worst_case_length(scenario: Scenario) -> float:
    steps = scenario.config.resolved_max_steps(scenario.world)
    return steps * scenario.config.cell_size * SQRT2


def _planner_list(raw: str) -> list[PlannerKind]:
    kinds = []
    for name in raw.split(","):
        name = name.strip()
        try:
            kinds.append(PlannerKind(name))
        except ValueError:
            raise AntnavError(f"unknown planner {name!r} "
                              f"(expected proposed, conventional-aco or apf)")
    if not kinds:
        raise AntnavError("planner list is empty")
    return kinds


def cmd_compare(args) -> int:
    scenario = _load_scenario(args)
    kinds = _planner_list(args.planner)
    if args.repeats < 1:
        raise AntnavError("repeats must be >= 1")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    worst_case = _worst_case_length(scenario)

    all_runs: list[tuple[str, int, int, RunMetrics]] = []
    first_results: dict[str, RunResult] = {}
    for kind in kinds:
        base = with_planner(scenario, kind)
        for i in range(args.repeats):
            result = run(with_seed(base, scenario.seed + i))
            all_runs.append((kind.value, i, scenario.seed + i, result.metrics))
            if i == 0:
                first_results[kind.value] = result

    with open(out_dir / "compare_runs.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["planner", "run", "seed", "status", "path_length", "corners", "cycles"])
        for planner, i, seed, m in all_runs:
            w.writerow([planner, i, seed, m.status.value, fmt(m.path_length),
                        m.corners, m.cycles])

    with open(out_dir / "comparison.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["planner", "optimal_path_length", "average_path_length", "failures"])
        for kind in kinds:
            metrics = [m for planner, _, _, m in all_runs if planner == kind.value]
            # a failed run counts as the worst-case executed length
            lengths = [m.path_length if m.status is RunStatus.GOAL_REACHED else worst_case
                       for m in metrics]
            failures = sum(1 for m in metrics if m.status is not RunStatus.GOAL_REACHED)
            w.writerow([kind.value, fmt(min(lengths)), fmt(sum(lengths) / len(lengths)),
                        failures])

    with open(out_dir / "timings.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["planner", "average_wall_ms"])
        for kind in kinds:
            walls = [m.wall_ms for planner, _, _, m in all_runs if planner == kind.value]
            w.writerow([kind.value, round(sum(walls) / len(walls), 3)])

    for kind in kinds:
        result = first_results[kind.value]
        write_distance_csv(out_dir / f"distance_{kind.value}.csv", result.metrics.dist_series)
        if kind is not PlannerKind.APF:
            write_aco_series_csv(out_dir / f"aco_series_{kind.value}.csv",
                                 result.metrics.aco_series)

    print(f"compared {', '.join(k.value for k in kinds)} x{args.repeats} -> {out_dir}")
    return 0


def cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    groups = parse_groups(args.groups)
    if args.repeats < 1:
        raise AntnavError("repeats must be >= 1")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    tables = []
    with open(out_dir / "sweep_runs.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["group", "run", "seed", "status", "path_length", "corners", "cycles"])
        for group in groups:
            metrics = []
            base = with_weights(scenario, group.weights, group.delta, group.zeta)
            for i in range(args.repeats):
                result = run(with_seed(base, scenario.seed + i))
                m = result.metrics
                metrics.append(m)
                w.writerow([group.name, i, scenario.seed + i, m.status.value,
                            fmt(m.path_length), m.corners, m.cycles])
            tables.append((group.name, aggregate(metrics)))

    write_aggregate_csv(out_dir / "sweep.csv", tables)
    print(f"swept {len(groups)} groups x{args.repeats} -> {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antnav",
        description="Receding-horizon grid navigation with an ant-colony sub-path planner.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True, help="scenario file path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")

    p_run = sub.add_parser("run", help="run one scenario")
    common(p_run)
    p_run.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True,
                       help="write plot.svg (default on)")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run several planners on one scenario")
    common(p_cmp)
    p_cmp.add_argument("--planner", default="proposed,conventional-aco,apf",
                       help="comma-separated planner names")
    p_cmp.add_argument("--repeats", type=int, default=5)
    p_cmp.set_defaults(func=cmd_compare)

    p_swp = sub.add_parser("sweep", help="run weight groups on one scenario")
    common(p_swp)
    p_swp.add_argument("--groups", required=True, help="groups file path")
    p_swp.add_argument("--repeats", type=int, default=10)
    p_swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AntnavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
