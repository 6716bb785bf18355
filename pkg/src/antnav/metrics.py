"""Per-run metrics, multi-run aggregates, and deterministic CSV/summary writers.

Wall-clock time is reported in the summary block only; every CSV contains
only seed-determined values so repeated invocations are byte-identical.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

from .errors import EmptyRuns
from .geometry import Point


class RunStatus(enum.Enum):
    RUNNING = "running"
    GOAL_REACHED = "goal_reached"
    STUCK = "stuck"
    STEP_BUDGET_EXHAUSTED = "step_budget_exhausted"
    LOCAL_MINIMUM = "local_minimum"
    COLLISION = "collision"


@dataclass(frozen=True)
class RunMetrics:
    path_length: float
    corners: int
    cycles: int
    dist_series: tuple[float, ...]  # distance to goal, index 0 = before the first cycle
    aco_series: tuple[tuple[float, ...], ...]  # per cycle: best score per iteration
    status: RunStatus
    wall_ms: float


@dataclass(frozen=True)
class AggregateStats:
    best: float
    worst: float
    average: float


def aggregate(runs: list[RunMetrics]) -> dict[str, AggregateStats]:
    """Best (min), worst (max) and arithmetic mean of path length and corner count."""
    if not runs:
        raise EmptyRuns("aggregate needs at least one run")
    out = {}
    for name, values in (("path_length", [r.path_length for r in runs]),
                         ("corners", [float(r.corners) for r in runs])):
        out[name] = AggregateStats(min(values), max(values), sum(values) / len(values))
    return out


def corner_count(points: list[Point]) -> int:
    """Direction changes along a polyline of grid hops (45 and 90 degrees alike)."""
    corners = 0
    prev_dir = None
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        dx, dy = x1 - x0, y1 - y0
        if dx == 0 and dy == 0:
            continue
        step_dir = (_sign(dx), _sign(dy))
        if prev_dir is not None and step_dir != prev_dir:
            corners += 1
        prev_dir = step_dir
    return corners


def path_length(points: list[Point]) -> float:
    return sum(math.hypot(x1 - x0, y1 - y0)
               for (x0, y0), (x1, y1) in zip(points, points[1:]))


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def fmt(value) -> str:
    """Deterministic text form: shortest round-trip repr for floats."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _open_csv(path):
    return open(path, "w", newline="", encoding="utf-8")


def write_trajectory_csv(path, rows: list[tuple[int, float, float, float, float]]) -> None:
    """Rows of (cycle, x, y, psi, dist_to_goal)."""
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cycle", "x", "y", "psi", "dist_to_goal"])
        for cycle, x, y, psi, dist in rows:
            w.writerow([cycle, fmt(x), fmt(y), fmt(psi), fmt(dist)])


def write_distance_csv(path, dist_series) -> None:
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cycle", "dist_to_goal"])
        for cycle, dist in enumerate(dist_series):
            w.writerow([cycle, fmt(dist)])


def write_aco_series_csv(path, aco_series) -> None:
    """Rows of (cycle, iteration, best_score); iterations are 1-based."""
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["cycle", "iteration", "best_score"])
        for cycle, series in enumerate(aco_series, start=1):
            for it, value in enumerate(series, start=1):
                w.writerow([cycle, it, fmt(value)])


def write_aggregate_csv(path, tables: list[tuple[str, dict[str, AggregateStats]]]) -> None:
    """One row per (group, metric) with best/worst/average columns."""
    with _open_csv(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["group", "metric", "best", "worst", "average"])
        for group, stats in tables:
            for metric in ("path_length", "corners"):
                s = stats[metric]
                w.writerow([group, metric, fmt(s.best), fmt(s.worst), fmt(s.average)])


def write_summary(path, entries: dict) -> None:
    """Key: value lines, insertion order preserved."""
    with open(path, "w", encoding="utf-8") as f:
        for key, value in entries.items():
            f.write(f"{key}: {fmt(value)}\n")
