"""
Run result models.

A RunResult holds enough to recompute every indicator offline: the
population objectives at each checkpoint plus the final decision vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from models.algorithm_config import AlgorithmConfig


@dataclass(frozen=True)
class Checkpoint:
    """Population objectives after a given iteration."""

    iteration: int
    """Iterations completed (0 = initial population)."""

    evals: int
    """Evaluations consumed so far."""

    objectives: np.ndarray
    """(N, m) raw objective matrix, slot order."""


@dataclass
class RunResult:
    """
    Output of one seeded optimization run.

    Invariants:
        - checkpoint evals strictly increasing
        - last checkpoint is the final population, evals <= budget
    """

    problem_key: str
    """Registry key of the optimized problem."""

    seed: int
    """Seed of the run RNG."""

    config: AlgorithmConfig
    """Parameters the run was executed with."""

    checkpoints: List[Checkpoint] = field(default_factory=list)
    """Population snapshots, oldest first."""

    final_x: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    """(N, D) final decision vectors."""

    final_f: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    """(N, m) final objective vectors."""

    @property
    def evals_used(self) -> int:
        return self.checkpoints[-1].evals if self.checkpoints else 0

    @property
    def iterations(self) -> int:
        return self.checkpoints[-1].iteration if self.checkpoints else 0

    @property
    def checkpoint_evals(self) -> np.ndarray:
        return np.array([c.evals for c in self.checkpoints], dtype=np.int64)

    def manifest(self) -> Dict[str, Any]:
        """JSON-ready run manifest (config, seed, problem, final eval count)."""
        return {
            "problem": self.problem_key,
            "seed": self.seed,
            "config": self.config.to_dict(),
            "evals_used": self.evals_used,
            "iterations": self.iterations,
            "checkpoints": len(self.checkpoints),
        }
