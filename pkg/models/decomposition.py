"""
Decomposition models: the neighborhood table and the sub-problem view.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class NeighborhoodTable:
    """
    T nearest sub-problems of every sub-problem, plus the boundary indices.

    neighbors[i, 0] == i for every i.
    """

    neighbors: np.ndarray
    """(N, T) int array, nearest first."""

    boundary: Tuple[int, ...]
    """Index of the canonical basis vector of each objective axis, axis order."""

    @property
    def size(self) -> int:
        return int(self.neighbors.shape[1])

    def of(self, i: int) -> np.ndarray:
        return self.neighbors[i]


@dataclass(frozen=True)
class Subproblem:
    """
    One weighted scalarization and its incumbent.

    A read-only view assembled from the engine's population arrays.
    """

    index: int
    weight: np.ndarray
    neighbor_ids: np.ndarray
    incumbent_x: np.ndarray
    incumbent_f: np.ndarray
