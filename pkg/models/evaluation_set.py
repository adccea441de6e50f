"""
Evaluation archive models.

Variants with different population sizes are compared on sets of the same
size: the final population of a big population, or the union of the last
k populations of a small one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from core.exceptions import ConfigurationError


class ArchiveKind(Enum):
    """How the comparison set is assembled from a run."""

    FINAL_POPULATION = "final_population"
    LAST_K_UNION = "last_k_union"


@dataclass(frozen=True)
class EvalArchivePolicy:
    """
    Comparison-set recipe.

    Invariant: for LAST_K_UNION, k * N == capacity (checked by validate(N)).
    """

    kind: ArchiveKind
    """Assembly rule."""

    k: int = 1
    """Number of trailing checkpoints unioned (LAST_K_UNION only)."""

    capacity: int = 500
    """Target set size."""

    def __post_init__(self) -> None:
        if self.capacity <= 0:
            raise ConfigurationError("Archive capacity must be positive",
                                     parameter="capacity", value=self.capacity)
        if self.k < 1:
            raise ConfigurationError("Archive k must be at least 1", parameter="k", value=self.k)

    def validate(self, population_size: int) -> None:
        """Check the policy fits a population of the given size."""
        if self.kind is ArchiveKind.LAST_K_UNION and self.k * population_size != self.capacity:
            raise ConfigurationError(
                f"last_k_union needs k*N == capacity, got {self.k}*{population_size} != {self.capacity}",
                parameter="k", value=self.k,
            )
        if self.kind is ArchiveKind.FINAL_POPULATION and population_size > self.capacity:
            raise ConfigurationError(
                f"Population of {population_size} exceeds archive capacity {self.capacity}",
                parameter="capacity", value=self.capacity,
            )

    @classmethod
    def for_population(cls, population_size: int, capacity: int,
                       kind: Optional[ArchiveKind] = None) -> "EvalArchivePolicy":
        """
        Pick the policy that yields `capacity` points for a population size.

        A population of the archive size uses its final population; a smaller
        one unions the last capacity / N populations.
        """
        if kind is None:
            kind = ArchiveKind.FINAL_POPULATION if population_size >= capacity else ArchiveKind.LAST_K_UNION
        if kind is ArchiveKind.FINAL_POPULATION:
            policy = cls(kind, 1, capacity)
        else:
            if capacity % population_size:
                raise ConfigurationError(
                    f"Capacity {capacity} is not a multiple of population size {population_size}",
                    parameter="capacity", value=capacity,
                )
            policy = cls(kind, capacity // population_size, capacity)
        policy.validate(population_size)
        return policy

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "k": self.k, "capacity": self.capacity}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EvalArchivePolicy":
        try:
            kind = ArchiveKind(data.get("kind", "final_population"))
        except ValueError as e:
            raise ConfigurationError(f"Unknown archive policy kind: {data.get('kind')}") from e
        return cls(kind=kind, k=int(data.get("k", 1)), capacity=int(data.get("capacity", 500)))


@dataclass(frozen=True)
class EvaluationSet:
    """
    Objective vectors assembled for comparison.

    Dominated and duplicated members are retained.
    """

    points: np.ndarray
    """(M, m) raw objective vectors."""

    provenance: np.ndarray
    """(M, 2) int array of (iteration, slot) per point."""

    capacity: int
    """Policy capacity; len(points) <= capacity."""

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def is_full(self) -> bool:
        return len(self) == self.capacity
