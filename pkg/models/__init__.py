"""
Data models for moead_ps.

This package contains dataclasses for:
- AlgorithmConfig: validated optimizer parameters
- ProblemDescriptor / EvaluationCounter: benchmark identity and budget accounting
- NeighborhoodTable / Subproblem: the decomposition
- Checkpoint / RunResult: seeded run output
- EvalArchivePolicy / EvaluationSet: size-matched comparison sets
- NormalizationFrame / TrajectorySeries / EafGrid / EafDiff: indicator outputs
- TestReport: pairwise statistical comparison
- VariantSpec / ExperimentManifest: experiment definition

Records handed to worker processes (configs, descriptors, manifests) are
frozen.
"""

from .algorithm_config import AlgorithmConfig
from .problem import ProblemFamily, ProblemDescriptor, EvaluationCounter
from .decomposition import NeighborhoodTable, Subproblem
from .run_result import Checkpoint, RunResult
from .evaluation_set import ArchiveKind, EvalArchivePolicy, EvaluationSet
from .indicators import NormalizationFrame, TrajectorySeries, EafGrid, EafDiff
from .comparison import TestReport
from .manifest import VariantSpec, ExperimentManifest, default_variants

__all__ = [
    # Optimizer
    "AlgorithmConfig",
    "ProblemFamily",
    "ProblemDescriptor",
    "EvaluationCounter",
    "NeighborhoodTable",
    "Subproblem",
    "Checkpoint",
    "RunResult",
    # Analysis
    "ArchiveKind",
    "EvalArchivePolicy",
    "EvaluationSet",
    "NormalizationFrame",
    "TrajectorySeries",
    "EafGrid",
    "EafDiff",
    "TestReport",
    # Experiments
    "VariantSpec",
    "ExperimentManifest",
    "default_variants",
]
