"""Ant-colony sub-path planner over 8-connected occupancy grids.

Improved mode adds three mechanisms on top of the classic transition/update
rules: a corner factor in the transition weights (inverse turn angle), a
rank-gated deposit weighted by a length+corner score, and a per-iteration
repair step that hands the incumbent best path to one straggler ant.
Conventional mode is the classic planner: pheromone/heuristic transitions and
length-based deposits from every finished ant, no repair.

Determinism: every ant walk draws from its own RNG substream keyed by
(seed, iteration, ant index), so serial and thread-parallel construction
produce identical results. REPLAN_THREADS > 0 enables a thread pool.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import DeadEnd, NoBestPathYet, NoPathFound, UnfinishedPath
from .geometry import (Cell, DIR_ANGLES, DIR_INDEX, DIR_IS_DIAGONAL, DIR_OFFSETS,
                       SQRT2, wrap_angle)
from .grid import LocalGrid


class AcoMode(enum.Enum):
    IMPROVED = "improved"
    CONVENTIONAL = "conventional"


@dataclass(frozen=True)
class AcoParams:
    """Tunables of the colony.

    phi/gamma are the pheromone/heuristic exponents, rho the evaporation rate,
    q the deposit constant, delta/zeta the length/corner weights of the path
    score. max_steps defaults to 4 * (number of grid cells); elite_cutoff
    defaults to n_ants - 1 (the worst-ranked ant never deposits).
    absolute_bearings switches the corner factor to penalize the magnitude of
    the world-frame bearing of each move instead of the turn angle.
    """

    phi: float = 1.0
    gamma: float = 5.0
    rho: float = 0.3
    q: float = 1.0
    n_ants: int = 20
    n_iters: int = 50
    delta: float = 0.7
    zeta: float = 0.3
    tau0: float = 1.0
    max_steps: int | None = None
    elite_cutoff: int | None = None
    mode: AcoMode = AcoMode.IMPROVED
    absolute_bearings: bool = False

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must be in (0, 1)")
        if self.q <= 0:
            raise ValueError("q must be positive")
        if self.n_ants < 2:
            raise ValueError("n_ants must be >= 2")
        if self.n_iters < 1:
            raise ValueError("n_iters must be >= 1")
        if self.delta < 0 or self.zeta < 0 or self.delta + self.zeta <= 0:
            raise ValueError("delta and zeta must be >= 0 with a positive sum")
        if self.tau0 <= 0:
            raise ValueError("tau0 must be positive")
        if self.elite_cutoff is not None and not 1 <= self.elite_cutoff <= self.n_ants - 1:
            raise ValueError("elite_cutoff must be in 1..n_ants-1")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    def resolved_elite_cutoff(self) -> int:
        return self.elite_cutoff if self.elite_cutoff is not None else self.n_ants - 1


@dataclass(frozen=True)
class PlanningGrid:
    """Bare planning surface: a boolean traversability mask plus the cell size."""

    traversable: np.ndarray
    cell_size: float


class GridGraph:
    """Adjacency tables over the traversable cells of a grid.

    For each cell id (row * cols + col) the neighbor table holds tuples
    (neighbor id, direction index, step length, heuristic 1/step, diagonal flag)
    in the canonical direction order N, NE, E, SE, S, SW, W, NW.
    """

    __slots__ = ("rows", "cols", "n", "cell_size", "mask", "nbrs")

    def __init__(self, mask: np.ndarray, cell_size: float):
        mask = np.asarray(mask, dtype=bool)
        self.rows, self.cols = mask.shape
        self.n = self.rows * self.cols
        self.cell_size = float(cell_size)
        self.mask = mask
        straight = self.cell_size
        diagonal = self.cell_size * SQRT2
        nbrs: list[tuple] = []
        for r in range(self.rows):
            for c in range(self.cols):
                if not mask[r, c]:
                    nbrs.append(())
                    continue
                row = []
                for d, (dr, dc) in enumerate(DIR_OFFSETS):
                    nr, nc = r + dr, c + dc
                    if 0 <= nr < self.rows and 0 <= nc < self.cols and mask[nr, nc]:
                        step = diagonal if DIR_IS_DIAGONAL[d] else straight
                        row.append((nr * self.cols + nc, d, step, 1.0 / step, DIR_IS_DIAGONAL[d]))
                nbrs.append(tuple(row))
        self.nbrs = tuple(nbrs)

    @classmethod
    def from_grid(cls, grid: "LocalGrid | PlanningGrid") -> "GridGraph":
        if isinstance(grid, LocalGrid):
            return cls(grid.traversable_mask(), grid.cell_size)
        return cls(grid.traversable, grid.cell_size)

    def id_of(self, cell: Cell) -> int:
        r, c = cell
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise ValueError(f"cell {cell} outside {self.rows}x{self.cols} grid")
        return r * self.cols + c

    def cell_of(self, cid: int) -> Cell:
        return divmod(cid, self.cols)

    def traversable(self, cell: Cell) -> bool:
        return bool(self.mask[cell])


class PheromoneField:
    """Strictly positive pheromone per directed edge of a GridGraph."""

    __slots__ = ("graph", "tau")

    def __init__(self, graph: GridGraph, tau0: float):
        if tau0 <= 0:
            raise ValueError("tau0 must be positive")
        self.graph = graph
        self.tau = [float(tau0)] * (graph.n * 8)

    @classmethod
    def _with_values(cls, graph: GridGraph, tau: list[float]) -> "PheromoneField":
        field = cls.__new__(cls)
        field.graph = graph
        field.tau = tau
        return field

    def get(self, i: Cell, j: Cell) -> float:
        """Pheromone on the directed edge i -> j; KeyError when no such edge exists."""
        delta = (j[0] - i[0], j[1] - i[1])
        d = DIR_INDEX.get(delta)
        if d is None or not (self.graph.traversable(i) and self.graph.traversable(j)):
            raise KeyError(f"no edge {i} -> {j}")
        return self.tau[self.graph.id_of(i) * 8 + d]

    def items(self):
        """Iterate ((i, j), tau) over the directed edges of the free graph."""
        graph = self.graph
        for cid in range(graph.n):
            i = graph.cell_of(cid)
            for nid, d, _step, _eta, _diag in graph.nbrs[cid]:
                yield (i, graph.cell_of(nid)), self.tau[cid * 8 + d]


@dataclass(frozen=True)
class AntState:
    """Walk state used by the public transition-probability function."""

    cell: Cell
    tabu: frozenset[Cell]
    prev_dir: float | None  # world-frame angle of the previous move, None on the first step


@dataclass(frozen=True)
class AntPath:
    """One constructed walk. Length sums straight/diagonal step costs; corners count direction changes."""

    cells: tuple[Cell, ...]
    length: float
    corners: int
    reached: bool
    score: float | None = None
    dirs: tuple[int, ...] = ()  # direction index per step; used for edge deposits


def heuristic(i: Cell, j: Cell, cell_size: float = 1.0) -> float:
    """Inverse Euclidean distance between the centers of two distinct cells."""
    d = math.hypot((j[0] - i[0]) * cell_size, (j[1] - i[1]) * cell_size)
    return 1.0 / d


def corner_heuristic(prev_dir: float | None, i: Cell, j: Cell,
                     absolute: bool = False) -> float:
    """Corner factor of the move i -> j.

    Default: inverse turn angle relative to the previous move direction, with
    1.0 for the first step or a straight continuation. With absolute=True the
    factor is the inverse magnitude of the move's world-frame bearing instead
    (first step included), which penalizes any deviation from due east.
    """
    move = math.atan2(j[0] - i[0], j[1] - i[1])
    if absolute:
        theta = abs(move)
    else:
        if prev_dir is None:
            return 1.0
        theta = abs(wrap_angle(move - prev_dir))
    return 1.0 if theta == 0.0 else 1.0 / theta


# Corner-factor lookup per (previous direction index + 1, next direction index);
# row 0 is "no previous direction". Built from corner_heuristic so the fast
# walker and the public function cannot drift apart.
_VTAB_TURN: tuple[tuple[float, ...], ...] = tuple(
    [tuple(1.0 for _ in range(8))]
    + [tuple(corner_heuristic(DIR_ANGLES[p], (0, 0), DIR_OFFSETS[d]) for d in range(8))
       for p in range(8)]
)
_VTAB_ABS: tuple[tuple[float, ...], ...] = tuple(
    tuple(corner_heuristic(None, (0, 0), DIR_OFFSETS[d], absolute=True) for d in range(8))
    for _ in range(9)
)


def transition_probabilities(field: PheromoneField, state: AntState,
                             params: AcoParams) -> list[tuple[Cell, float]]:
    """Move distribution over feasible neighbors, in canonical direction order.

    Weight of a neighbor: tau^phi * eta^gamma (* corner factor in improved
    mode); weights are normalized to sum to 1. Raises DeadEnd when no feasible
    neighbor remains.
    """
    graph = field.graph
    cid = graph.id_of(state.cell)
    improved = params.mode is AcoMode.IMPROVED
    out: list[tuple[Cell, float]] = []
    total = 0.0
    for nid, d, _step, eta, _diag in graph.nbrs[cid]:
        ncell = graph.cell_of(nid)
        if ncell in state.tabu:
            continue
        t = field.tau[cid * 8 + d]
        w = (t if params.phi == 1.0 else t ** params.phi) * eta ** params.gamma
        if improved:
            w *= corner_heuristic(state.prev_dir, state.cell, ncell,
                                  absolute=params.absolute_bearings)
        out.append((ncell, w))
        total += w
    if not out:
        raise DeadEnd(f"no feasible neighbor from {state.cell}")
    return [(cell, w / total) for cell, w in out]


def roulette_select(dist: list[tuple[Cell, float]], rng_draw: float) -> Cell:
    """Inverse-CDF pick from a distribution listed in canonical neighbor order."""
    acc = 0.0
    for cell, p in dist:
        acc += p
        if rng_draw < acc:
            return cell
    return dist[-1][0]  # guard against cumulative rounding just below 1


def score(path: AntPath, params: AcoParams) -> float:
    """Weighted path score delta * length + zeta * corners; finished paths only."""
    if not path.reached:
        raise UnfinishedPath("cannot score a path that never reached the sub-goal")
    return params.delta * path.length + params.zeta * path.corners


def update_pheromone(field: PheromoneField, paths: list[AntPath],
                     params: AcoParams) -> PheromoneField:
    """Evaporate every edge, then deposit.

    Improved mode: finished ants ranked ascending by score; ranks up to
    elite_cutoff deposit q/score on each traversed edge. Conventional mode:
    every finished ant deposits q/length. Unfinished ants never deposit.
    """
    decay = 1.0 - params.rho
    tau = [t * decay for t in field.tau]
    graph = field.graph
    finished = [p for p in paths if p.reached]
    if params.mode is AcoMode.CONVENTIONAL:
        deposits = [(p, params.q / p.length) for p in finished]
    else:
        ranked = sorted(finished, key=lambda p: score(p, params))
        cutoff = min(params.resolved_elite_cutoff(), len(ranked))
        deposits = [(p, params.q / score(p, params)) for p in ranked[:cutoff]]
    for path, amount in deposits:
        cid = graph.id_of(path.cells[0])
        for nxt, d in zip(path.cells[1:], path.dirs):
            tau[cid * 8 + d] += amount
            cid = graph.id_of(nxt)
    return PheromoneField._with_values(graph, tau)


def repair(paths: list[AntPath], best_so_far: AntPath | None,
           rng: np.random.Generator) -> list[AntPath]:
    """Replace one ant's path with the incumbent best.

    The replaced ant is drawn uniformly from the unfinished ants when any
    exist, otherwise from all ants. Raises NoBestPathYet without an incumbent.
    """
    if best_so_far is None:
        raise NoBestPathYet("repair needs a best path from a previous iteration")
    unfinished = [k for k, p in enumerate(paths) if not p.reached]
    if unfinished:
        s = unfinished[int(rng.integers(len(unfinished)))]
    else:
        s = int(rng.integers(len(paths)))
    out = list(paths)
    out[s] = best_so_far
    return out


def substream(*key: int) -> np.random.Generator:
    """Deterministic RNG substream for a tuple of non-negative integers."""
    return np.random.default_rng(np.random.SeedSequence(key))


def worker_count() -> int:
    """Worker thread cap from REPLAN_THREADS (0 or unset = serial)."""
    raw = os.environ.get("REPLAN_THREADS", "0").strip()
    return int(raw) if raw else 0


def _construct(graph: GridGraph, tau: list[float], start_id: int, goal_id: int,
               params: AcoParams, etag: tuple[float, float],
               vtab: tuple[tuple[float, ...], ...] | None, max_steps: int,
               gen: np.random.Generator) -> AntPath:
    """Roulette walk of a single ant with a tabu list and a step cap."""
    nbrs = graph.nbrs
    tabu = bytearray(graph.n)
    tabu[start_id] = 1
    pos = start_id
    prev = -1
    cells = [start_id]
    dirs: list[int] = []
    length = 0.0
    corners = 0
    reached = False
    phi = params.phi
    rand = gen.random
    for _ in range(max_steps):
        cand: list[tuple[int, int, float]] = []
        weights: list[float] = []
        total = 0.0
        for nid, d, step, _eta, diag in nbrs[pos]:
            if tabu[nid]:
                continue
            t = tau[pos * 8 + d]
            w = (t if phi == 1.0 else t ** phi) * etag[diag]
            if vtab is not None:
                w *= vtab[prev + 1][d]
            cand.append((nid, d, step))
            weights.append(w)
            total += w
        if not cand:
            break  # dead end: the ant is terminated unfinished
        draw = rand()
        pick = len(weights) - 1
        acc = 0.0
        for idx, w in enumerate(weights):
            acc += w / total
            if draw < acc:
                pick = idx
                break
        nid, d, step = cand[pick]
        if prev != -1 and d != prev:
            corners += 1
        length += step
        cells.append(nid)
        dirs.append(d)
        tabu[nid] = 1
        prev = d
        pos = nid
        if pos == goal_id:
            reached = True
            break
    return AntPath(tuple(graph.cell_of(cid) for cid in cells), length, corners,
                   reached, None, tuple(dirs))


def _as_graph(grid) -> GridGraph:
    if isinstance(grid, GridGraph):
        return grid
    return GridGraph.from_grid(grid)


def plan_subpath(grid, start: Cell, subgoal: Cell, params: AcoParams,
                 seed) -> tuple[AntPath, list[float]]:
    """Plan an 8-connected path from start to subgoal.

    Runs n_iters iterations of {construct n_ants walks, repair (improved mode,
    once an incumbent exists), score, update pheromone} and returns the best
    finished path by score (improved) or length (conventional) plus the
    best-score-so-far per iteration. Iterations before the first finisher
    record inf in the series; three consecutive all-fail iterations before any
    finisher raise NoPathFound, as does finishing all iterations without one.

    seed is an int or tuple of non-negative ints; ant k of iteration n walks
    on substream (seed..., n, k), so results are independent of whether ants
    run serially or on REPLAN_THREADS worker threads.
    """
    graph = _as_graph(grid)
    key = tuple(seed) if isinstance(seed, (tuple, list)) else (int(seed),)
    if start == subgoal:
        raise ValueError("start and subgoal must differ")
    if not graph.traversable(start):
        raise ValueError(f"start cell {start} is not traversable")
    if not graph.traversable(subgoal):
        raise ValueError(f"subgoal cell {subgoal} is not traversable")
    start_id = graph.id_of(start)
    goal_id = graph.id_of(subgoal)

    improved = params.mode is AcoMode.IMPROVED
    max_steps = params.max_steps if params.max_steps is not None else 4 * graph.n
    eta_straight = 1.0 / graph.cell_size
    eta_diag = 1.0 / (graph.cell_size * SQRT2)
    etag = (eta_straight ** params.gamma, eta_diag ** params.gamma)
    vtab = (_VTAB_ABS if params.absolute_bearings else _VTAB_TURN) if improved else None

    field = PheromoneField(graph, params.tau0)
    m = params.n_ants
    best: AntPath | None = None
    series: list[float] = []
    fail_streak = 0

    def walk(k_and_iter):
        n, k = k_and_iter
        return _construct(graph, field.tau, start_id, goal_id, params, etag,
                          vtab, max_steps, substream(*key, n, k))

    threads = worker_count()
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 0 else None
    try:
        for n in range(1, params.n_iters + 1):
            jobs = [(n, k) for k in range(m)]
            if pool is not None:
                paths = list(pool.map(walk, jobs))
            else:
                paths = [walk(j) for j in jobs]

            if best is None and not any(p.reached for p in paths):
                # no incumbent yet: skip repair/update and retry construction.
                # The improved loop gives up after three consecutive misses
                # (its repair stage needs an incumbent); the conventional
                # baseline has no such stage and runs its full budget.
                fail_streak += 1
                if improved and fail_streak >= 3:
                    raise NoPathFound(
                        f"no ant reached {subgoal} in {fail_streak} consecutive iterations")
                series.append(math.inf)
                continue

            if improved and best is not None:
                paths = repair(paths, best, substream(*key, n, m))

            objective = (lambda p: score(p, params)) if improved else (lambda p: p.length)
            paths = [replace(p, score=objective(p)) if p.reached else p for p in paths]
            field = update_pheromone(field, paths, params)

            for p in paths:
                if p.reached and (best is None or p.score < best.score):
                    best = p
            series.append(best.score if best is not None else math.inf)
    finally:
        if pool is not None:
            pool.shutdown(wait=False)

    if best is None:
        raise NoPathFound(f"no ant reached {subgoal} in {params.n_iters} iterations")
    return best, series
