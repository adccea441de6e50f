"""
Quality indicators: non-dominated filtering, non-dominated proportions,
normalization, hypervolume (2 and 3 objectives) and anytime trajectories.

All objectives are minimized. Hypervolume is taken in the normalized
space with reference point (1, ..., 1).
"""

from __future__ import annotations

from typing import Iterable, Tuple

import numpy as np

from core.exceptions import AnalysisError, UnsupportedError
from models.evaluation_set import EvalArchivePolicy, EvaluationSet
from models.indicators import NormalizationFrame, TrajectorySeries
from models.run_result import RunResult
from modules.archive import build_anytime_set

UNIQUE_DECIMALS = 12
_CHUNK = 256


def _as_points(points: EvaluationSet | np.ndarray) -> np.ndarray:
    if isinstance(points, EvaluationSet):
        points = points.points
    return np.atleast_2d(np.asarray(points, dtype=float))


# =============================================================================
# DOMINANCE
# =============================================================================

def nondominated_filter(points: np.ndarray) -> np.ndarray:
    """
    Boolean mask of points no other point dominates.

    Equal points do not dominate each other, so duplicates survive together.
    """
    P = _as_points(points)
    n = P.shape[0]
    mask = np.ones(n, dtype=bool)
    for start in range(0, n, _CHUNK):
        block = P[start:start + _CHUNK]
        # leq[a, b]: point b weakly dominates block point a
        leq = np.all(P[None, :, :] <= block[:, None, :], axis=2)
        lt = np.any(P[None, :, :] < block[:, None, :], axis=2)
        mask[start:start + _CHUNK] = ~np.any(leq & lt, axis=1)
    return mask


def unique_nondominated_proportion(points: EvaluationSet | np.ndarray) -> float:
    """
    Distinct non-dominated objective vectors over the set size.

    Distinctness is exact equality after rounding to 12 decimals.

    Raises:
        AnalysisError: If the set is empty
    """
    P = _as_points(points)
    if P.shape[0] == 0 or P.size == 0:
        raise AnalysisError("Non-dominated proportion of an empty set")
    distinct = np.unique(np.round(P, UNIQUE_DECIMALS), axis=0)
    return float(np.count_nonzero(nondominated_filter(distinct))) / P.shape[0]


def nondominated_proportion(points: EvaluationSet | np.ndarray) -> float:
    """Non-dominated members over the set size, duplicates counted."""
    P = _as_points(points)
    if P.shape[0] == 0 or P.size == 0:
        raise AnalysisError("Non-dominated proportion of an empty set")
    return float(np.mean(nondominated_filter(P)))


# =============================================================================
# NORMALIZATION
# =============================================================================

def normalize_objectives(points: EvaluationSet | np.ndarray, frame: NormalizationFrame) -> np.ndarray:
    """(f - lo) / (hi - lo), clamped to [0, 1]; degenerate components map to 0."""
    P = _as_points(points)
    span = frame.hi - frame.lo
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (P - frame.lo) / safe, 0.0)
    return np.clip(scaled, 0.0, 1.0)


# =============================================================================
# HYPERVOLUME
# =============================================================================

def _hv2d(P: np.ndarray, ref: np.ndarray) -> float:
    if P.shape[0] == 0:
        return 0.0
    order = np.lexsort((P[:, 1], P[:, 0]))
    x, y = P[order, 0], P[order, 1]
    best = np.minimum.accumulate(y)
    previous = np.concatenate([[ref[1]], best[:-1]])
    return float(np.sum((ref[0] - x) * (previous - best)))


def _hv3d(P: np.ndarray, ref: np.ndarray) -> float:
    if P.shape[0] == 0:
        return 0.0
    P = P[np.argsort(P[:, 2], kind="stable")]
    levels = np.unique(P[:, 2])
    tops = np.append(levels[1:], ref[2])
    total = 0.0
    for level, top in zip(levels, tops):
        active = P[P[:, 2] <= level, :2]
        total += _hv2d(active, ref[:2]) * (top - level)
    return total


def hypervolume(points: np.ndarray, ref: np.ndarray | None = None) -> float:
    """
    Volume dominated by `points` and bounded by `ref`.

    Args:
        points: (n, m) normalized objective vectors
        ref: Reference point, (1, ..., 1) by default

    Returns:
        Hypervolume (0 for an empty set)

    Raises:
        UnsupportedError: If m is not 2 or 3
    """
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        return 0.0
    P = np.atleast_2d(P)
    m = P.shape[1]
    if m not in (2, 3):
        raise UnsupportedError("hypervolume", f"{m} objectives (only 2 and 3 are supported)")
    ref = np.ones(m) if ref is None else np.asarray(ref, dtype=float)

    P = P[np.all(P <= ref, axis=1)]
    return _hv2d(P, ref) if m == 2 else _hv3d(P, ref)


def anytime_trajectory(result: RunResult, policy: EvalArchivePolicy,
                       frame: NormalizationFrame) -> TrajectorySeries:
    """Hypervolume of the policy's evaluation set after every checkpoint."""
    evals = result.checkpoint_evals
    hv = np.array([
        hypervolume(normalize_objectives(build_anytime_set(result, policy, int(e)), frame))
        for e in evals
    ])
    return TrajectorySeries(evals=evals, hv=hv)


def summarize(values: Iterable[float]) -> Tuple[float, float]:
    """
    Mean and standard error.

    Raises:
        AnalysisError: If there are no values
    """
    data = np.asarray(list(values), dtype=float)
    if data.size == 0:
        raise AnalysisError("Cannot summarize an empty sample")
    if data.size == 1:
        return float(data[0]), 0.0
    return float(data.mean()), float(data.std(ddof=1) / np.sqrt(data.size))
