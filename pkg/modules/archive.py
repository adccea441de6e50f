"""
Size-matched evaluation sets.

A big population is judged on its final population; a small one on the
union of its last k populations, so both contribute the same number of
points. Dominated and duplicated members are kept.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import List, Sequence

import numpy as np

from core.exceptions import AnalysisError
from logging_config import get_logger
from models.evaluation_set import ArchiveKind, EvalArchivePolicy, EvaluationSet
from models.run_result import Checkpoint, RunResult

logger = get_logger(__name__)


def _assemble(checkpoints: Sequence[Checkpoint], capacity: int) -> EvaluationSet:
    points, provenance = [], []
    for checkpoint in checkpoints:
        size = checkpoint.objectives.shape[0]
        points.append(checkpoint.objectives)
        provenance.append(np.column_stack([np.full(size, checkpoint.iteration), np.arange(size)]))
    return EvaluationSet(
        points=np.vstack(points).astype(float),
        provenance=np.vstack(provenance).astype(np.int64),
        capacity=capacity,
    )


def _trailing(checkpoints: List[Checkpoint], policy: EvalArchivePolicy) -> List[Checkpoint]:
    if policy.kind is ArchiveKind.FINAL_POPULATION:
        return checkpoints[-1:]
    return checkpoints[-policy.k:]


def build_evaluation_set(result: RunResult, policy: EvalArchivePolicy) -> EvaluationSet:
    """
    Comparison set of a finished run.

    Raises:
        ConfigurationError: If the policy would exceed its capacity for this run
        AnalysisError: If the run has no checkpoints, or fewer than k for last_k_union
    """
    policy.validate(result.config.N)
    if not result.checkpoints:
        raise AnalysisError("Run has no checkpoints", {"problem": result.problem_key, "seed": result.seed})
    if policy.kind is ArchiveKind.LAST_K_UNION and len(result.checkpoints) < policy.k:
        raise AnalysisError(
            f"last_k_union needs {policy.k} checkpoints, run has {len(result.checkpoints)}",
            {"problem": result.problem_key, "seed": result.seed},
        )
    return _assemble(_trailing(result.checkpoints, policy), policy.capacity)


def build_anytime_set(result: RunResult, policy: EvalArchivePolicy, upto_evals: int) -> EvaluationSet:
    """
    The policy applied to the checkpoints recorded up to `upto_evals` evaluations.

    Early on a last_k_union set may hold fewer than `capacity` points.

    Raises:
        ConfigurationError: If the policy would exceed its capacity for this run
        AnalysisError: If no checkpoint lies at or before upto_evals
    """
    policy.validate(result.config.N)
    prefix = [c for c in result.checkpoints if c.evals <= upto_evals]
    if not prefix:
        raise AnalysisError(
            f"No checkpoint at or before {upto_evals} evaluations",
            {"problem": result.problem_key, "seed": result.seed},
        )
    return _assemble(_trailing(prefix, policy), policy.capacity)


def write_evaluation_set_csv(evaluation_set: EvaluationSet, path: Path | str) -> Path:
    """Columns f1..fm, iteration, slot."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    m = evaluation_set.points.shape[1]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([f"f{j + 1}" for j in range(m)] + ["iteration", "slot"])
        for point, (iteration, slot) in zip(evaluation_set.points.tolist(), evaluation_set.provenance.tolist()):
            writer.writerow([repr(v) for v in point] + [iteration, slot])
    logger.debug(f"Wrote {len(evaluation_set)} points to {path}")
    return path
