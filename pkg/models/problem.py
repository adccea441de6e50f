"""
Benchmark problem models.

ProblemDescriptor is immutable and carries no state; the evaluation
counter belongs to the run that spends the evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np


class ProblemFamily(Enum):
    """Benchmark family."""

    DTLZ = "dtlz"
    DTLZ_INVERTED = "dtlz_inverted"
    UF = "uf"


@dataclass(frozen=True)
class ProblemDescriptor:
    """
    A box-bounded minimization benchmark.

    Built by modules.problems.make_problem, which checks the family/id/m
    combination.
    """

    family: ProblemFamily
    """Benchmark family."""

    id: int
    """Index within the family (DTLZ 1..4, UF 1..10)."""

    m: int
    """Number of objectives."""

    D: int
    """Number of decision variables."""

    lower: Tuple[float, ...]
    """Per-variable lower bounds."""

    upper: Tuple[float, ...]
    """Per-variable upper bounds."""

    @property
    def key(self) -> str:
        """Registry key, e.g. 'dtlz2', 'dtlz1_inv', 'uf8'."""
        if self.family is ProblemFamily.DTLZ_INVERTED:
            return f"dtlz{self.id}_inv"
        return f"{self.family.value}{self.id}"

    @property
    def bounds(self) -> np.ndarray:
        """(D, 2) array of [low, high] rows."""
        return np.column_stack([self.lower, self.upper])

    def to_dict(self) -> Dict[str, Any]:
        return {"key": self.key, "family": self.family.value, "id": self.id, "m": self.m, "D": self.D}


class EvaluationCounter:
    """
    Evaluation budget accounting for one run.

    Every call into a problem's objective function goes through a counter;
    there are no uncounted evaluations.
    """

    def __init__(self, budget: int | None = None):
        self.count = 0
        self.budget = budget

    def increment(self, amount: int = 1) -> None:
        self.count += amount

    @property
    def remaining(self) -> int | None:
        if self.budget is None:
            return None
        return self.budget - self.count
