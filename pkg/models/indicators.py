"""
Quality-indicator models: normalization frames, anytime series and
attainment grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Iterable

import numpy as np

from core.exceptions import AnalysisError


@dataclass(frozen=True)
class NormalizationFrame:
    """
    Per-objective bounds shared by every variant of one comparison group.

    Invariant: lo <= hi componentwise.
    """

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def from_sets(cls, point_sets: Iterable[np.ndarray]) -> "NormalizationFrame":
        """Frame spanning the union of all given point sets."""
        stacked = [np.asarray(p, dtype=float) for p in point_sets if len(p)]
        if not stacked:
            raise AnalysisError("Cannot build a normalization frame from empty sets")
        union = np.vstack(stacked)
        return cls(lo=union.min(axis=0), hi=union.max(axis=0))

    def to_dict(self) -> Dict[str, Any]:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NormalizationFrame":
        return cls(lo=np.asarray(data["lo"], dtype=float), hi=np.asarray(data["hi"], dtype=float))

    def denormalize(self, points: np.ndarray) -> np.ndarray:
        """Map unit-box coordinates back to raw objective values."""
        return self.lo + np.asarray(points, dtype=float) * (self.hi - self.lo)


@dataclass(frozen=True)
class TrajectorySeries:
    """Hypervolume after each checkpoint of one run; evals strictly increasing."""

    evals: np.ndarray
    hv: np.ndarray

    def value_at(self, evals: int) -> float:
        """HV of the last checkpoint with evals <= the given count."""
        pos = int(np.searchsorted(self.evals, evals, side="right")) - 1
        if pos < 0:
            raise AnalysisError(f"No checkpoint at or before {evals} evaluations",
                                {"first_checkpoint": int(self.evals[0])})
        return float(self.hv[pos])


@dataclass(frozen=True)
class EafGrid:
    """
    Attainment levels over a rectangular grid (2 objectives).

    levels[i, j] refers to the point (x_breaks[i], y_breaks[j]); probabilities
    lie in [0, 1], signed differences in [-1, 1].
    """

    x_breaks: np.ndarray
    y_breaks: np.ndarray
    levels: np.ndarray
    signed: bool = False


@dataclass(frozen=True)
class EafDiff:
    """Signed EAF difference plus the envelope of all compared runs."""

    grid: EafGrid
    """levels = EAF(a) - EAF(b)."""

    grand_best: np.ndarray
    """(K, 2) points of the surface attained by at least one run."""

    grand_worst: np.ndarray
    """(K, 2) points of the surface attained by every run."""
