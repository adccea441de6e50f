"""
Empirical attainment functions for two objectives.

A grid point (x, y) is attained by a run when some point of the run
weakly dominates it. The EAF level of a grid point is the fraction of runs
attaining it; the difference of two EAFs shows where one algorithm
attains regions the other does not.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from config import Config
from core.exceptions import AnalysisError, UnsupportedError
from models.indicators import EafDiff, EafGrid

Breaks = Tuple[np.ndarray, np.ndarray]


def _check_runs(run_sets: Sequence[np.ndarray]) -> list[np.ndarray]:
    if not run_sets:
        raise AnalysisError("EAF needs at least one run")
    runs = [np.atleast_2d(np.asarray(r, dtype=float)) for r in run_sets]
    for run in runs:
        if run.size and run.shape[1] != 2:
            raise UnsupportedError("eaf", f"{run.shape[1]} objectives (only 2 are supported)")
    return runs


def _thin(values: np.ndarray, max_breaks: int) -> np.ndarray:
    if values.size <= max_breaks:
        return values
    picked = np.quantile(values, np.linspace(0.0, 1.0, max_breaks), method="inverted_cdf")
    return np.unique(picked)


def build_grid(run_sets: Sequence[np.ndarray], max_breaks: int = Config.EAF_MAX_BREAKS) -> Breaks:
    """
    Grid breaks from the union of every run's coordinates.

    Exact while each axis has at most `max_breaks` distinct values;
    beyond that the breaks are thinned to quantiles of the observed values.
    """
    runs = [r for r in _check_runs(run_sets) if r.size]
    if not runs:
        raise AnalysisError("EAF grid needs at least one point")
    union = np.vstack(runs)
    return _thin(np.unique(union[:, 0]), max_breaks), _thin(np.unique(union[:, 1]), max_breaks)


def _attained(run: np.ndarray, x_breaks: np.ndarray, y_breaks: np.ndarray) -> np.ndarray:
    """(len(x), len(y)) indicator of grid points weakly dominated by the run."""
    if run.size == 0:
        return np.zeros((x_breaks.size, y_breaks.size), dtype=bool)
    order = np.argsort(run[:, 0], kind="stable")
    f1 = run[order, 0]
    best_f2 = np.minimum.accumulate(run[order, 1])
    count = np.searchsorted(f1, x_breaks, side="right")
    lowest = np.where(count > 0, best_f2[np.maximum(count - 1, 0)], np.inf)
    return lowest[:, None] <= y_breaks[None, :]


def _attainment_counts(runs: Sequence[np.ndarray], breaks: Breaks) -> np.ndarray:
    x_breaks, y_breaks = breaks
    counts = np.zeros((x_breaks.size, y_breaks.size), dtype=np.int64)
    for run in runs:
        counts += _attained(run, x_breaks, y_breaks)
    return counts


def eaf(run_sets: Sequence[np.ndarray], grid: Optional[Breaks] = None) -> EafGrid:
    """
    Attainment probability at every grid point.

    Args:
        run_sets: One (k, 2) point set per run
        grid: (x_breaks, y_breaks); built from the runs when omitted

    Raises:
        UnsupportedError: If the points do not have two objectives
    """
    runs = _check_runs(run_sets)
    breaks = grid if grid is not None else build_grid(runs)
    levels = _attainment_counts(runs, breaks) / len(runs)
    return EafGrid(x_breaks=breaks[0], y_breaks=breaks[1], levels=levels)


def attainment_surface(run_sets: Sequence[np.ndarray], grid: Breaks, level: float) -> np.ndarray:
    """
    Corner points of the region attained by at least a `level` fraction of runs.

    Returns:
        (K, 2) staircase corners, f1 ascending
    """
    runs = _check_runs(run_sets)
    counts = _attainment_counts(runs, grid)
    needed = max(1, int(np.ceil(level * len(runs) - 1e-9)))
    attained = counts >= needed

    x_breaks, y_breaks = grid
    has_any = attained.any(axis=1)
    first = np.argmax(attained, axis=1)
    y_at = np.where(has_any, y_breaks[first], np.inf)

    corners = []
    previous = np.inf
    for x, y in zip(x_breaks, y_at):
        if y < previous:
            corners.append((x, y))
            previous = y
    return np.array(corners, dtype=float).reshape(-1, 2)


def eaf_diff(runs_a: Sequence[np.ndarray], runs_b: Sequence[np.ndarray],
             grid: Optional[Breaks] = None) -> EafDiff:
    """
    EAF(a) - EAF(b) on a shared grid, plus the grand best and worst surfaces.

    The default grid is built from the union of both run collections, so
    swapping the arguments negates the levels exactly.
    """
    a = _check_runs(runs_a)
    b = _check_runs(runs_b)
    breaks = grid if grid is not None else build_grid(a + b)

    levels = _attainment_counts(a, breaks) / len(a) - _attainment_counts(b, breaks) / len(b)
    everything = a + b
    return EafDiff(
        grid=EafGrid(x_breaks=breaks[0], y_breaks=breaks[1], levels=levels, signed=True),
        grand_best=attainment_surface(everything, breaks, 1.0 / len(everything)),
        grand_worst=attainment_surface(everything, breaks, 1.0),
    )


def _cell_areas(diff: EafDiff | EafGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Cell areas and lower-left-corner levels; each cell spans two consecutive breaks per axis."""
    grid = diff.grid if isinstance(diff, EafDiff) else diff
    if grid.x_breaks.size < 2 or grid.y_breaks.size < 2:
        return np.zeros((0, 0)), np.zeros((0, 0))
    return np.outer(np.diff(grid.x_breaks), np.diff(grid.y_breaks)), grid.levels[:-1, :-1]


def positive_area_fraction(diff: EafDiff | EafGrid) -> float:
    """Share of the whole grid area where the first algorithm is ahead."""
    area, cells = _cell_areas(diff)
    total = float(area.sum())
    if total == 0.0:
        return 0.0
    return float(np.sum(area[cells > 0])) / total


def positive_share_of_differing_area(diff: EafDiff | EafGrid) -> float:
    """
    Share of the area where the EAFs differ at all in which the first
    algorithm is ahead. Returns 0 when they never differ.
    """
    area, cells = _cell_areas(diff)
    differing = float(np.sum(area[cells != 0]))
    if differing == 0.0:
        return 0.0
    return float(np.sum(area[cells > 0])) / differing


def write_eaf_csv(grid: EafGrid, path: Path | str) -> Path:
    """
    Gridded CSV with columns x, y, level.

    Each column of the grid is run-length encoded along y: a row is written
    for the first break and wherever the level changes.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["x", "y", "level"])
        for i, x in enumerate(grid.x_breaks.tolist()):
            column = grid.levels[i]
            changes = np.flatnonzero(np.concatenate([[True], column[1:] != column[:-1]]))
            for j in changes:
                writer.writerow([repr(x), repr(float(grid.y_breaks[j])), repr(float(column[j]))])
    return path


def read_eaf_csv(path: Path | str) -> EafGrid:
    """Inverse of write_eaf_csv."""
    with open(path, newline="", encoding="utf-8") as f:
        rows = [(float(r["x"]), float(r["y"]), float(r["level"])) for r in csv.DictReader(f)]
    if not rows:
        raise AnalysisError(f"EAF file {path} is empty")
    data = np.array(rows)
    x_breaks = np.unique(data[:, 0])
    y_breaks = np.unique(data[:, 1])
    levels = np.zeros((x_breaks.size, y_breaks.size))
    xi = np.searchsorted(x_breaks, data[:, 0])
    yj = np.searchsorted(y_breaks, data[:, 1])
    for i in range(x_breaks.size):
        mine = xi == i
        starts, values = yj[mine], data[mine, 2]
        order = np.argsort(starts)
        starts, values = starts[order], values[order]
        ends = np.append(starts[1:], y_breaks.size)
        for s, e, v in zip(starts, ends, values):
            levels[i, s:e] = v
    signed = bool(np.any(levels < 0))
    return EafGrid(x_breaks=x_breaks, y_breaks=y_breaks, levels=levels, signed=signed)
