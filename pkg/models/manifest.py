"""
Experiment manifest models.

A manifest fully determines an experiment: problems, variants, repetitions,
seeds and analysis settings. The stored copy has every default materialized
so a results directory describes itself.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config import Config
from core.exceptions import ConfigurationError
from models.algorithm_config import AlgorithmConfig
from models.evaluation_set import ArchiveKind, EvalArchivePolicy
from models.problem import ProblemDescriptor

POOLING_MODES = ("problem_means", "runs")


@dataclass(frozen=True)
class VariantSpec:
    """
    A labelled algorithm configuration and its comparison-set policy.

    The objective count in `config` is a template value; the run uses the
    problem's m.
    """

    label: str
    config: AlgorithmConfig
    policy: EvalArchivePolicy

    def config_for(self, problem: ProblemDescriptor) -> AlgorithmConfig:
        """Configuration specialised to a problem's objective count."""
        if problem.m == self.config.m:
            return self.config
        return dataclasses.replace(self.config, m=problem.m)

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "config": self.config.to_dict(), "policy": self.policy.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], budget: int) -> "VariantSpec":
        if "label" not in data or "config" not in data:
            raise ConfigurationError("Variant needs a label and a config", details={"variant": data})
        config_data = dict(data["config"])
        config_data.setdefault("m", 2)
        config_data["budget"] = budget
        config = AlgorithmConfig.from_dict(config_data)
        if "policy" in data:
            policy = EvalArchivePolicy.from_dict(data["policy"])
        else:
            policy = EvalArchivePolicy.for_population(
                config.N, Config.ARCHIVE_CAPACITY, ArchiveKind(config.archive_policy)
            )
        policy.validate(config.N)
        return cls(label=str(data["label"]), config=config, policy=policy)


def default_variants(budget: int = Config.DEFAULT_BUDGET,
                   capacity: int = Config.ARCHIVE_CAPACITY) -> List[VariantSpec]:
    """
    The three compared configurations.

    ps:    N=500 with n=50 partial updates
    big:   N=500, every sub-problem updated
    small: N=50, every sub-problem updated, compared on its last 10 populations
    """
    ps = AlgorithmConfig(N=500, n=50, m=2, budget=budget)
    big = AlgorithmConfig(N=500, n=498, m=2, budget=budget)
    small = AlgorithmConfig(N=50, n=48, m=2, budget=budget, archive_policy="last_k_union")
    return [
        VariantSpec("ps", ps, EvalArchivePolicy.for_population(500, capacity)),
        VariantSpec("big", big, EvalArchivePolicy.for_population(500, capacity)),
        VariantSpec("small", small, EvalArchivePolicy.for_population(50, capacity)),
    ]


@dataclass(frozen=True)
class ExperimentManifest:
    """
    Everything an experiment needs.

    Invariants: variant labels unique; every variant shares the budget.
    """

    problems: Tuple[str, ...]
    """Problem registry keys."""

    variants: Tuple[VariantSpec, ...]
    """Compared configurations."""

    runs: int = Config.DEFAULT_RUNS
    """Repetitions per (problem, variant)."""

    base_seed: int = Config.DEFAULT_BASE_SEED
    """Run r uses seed base_seed + r."""

    budget: int = Config.DEFAULT_BUDGET
    """Evaluation budget of every run."""

    dimension: int = Config.DEFAULT_DIMENSION
    """Decision-space dimension D."""

    stats_checkpoints: Tuple[int, ...] = field(default=())
    """Evaluation counts the statistics battery is run at."""

    pooling: str = "problem_means"
    """Rank-sum samples: one mean per problem, or every run value."""

    alpha: float = Config.SIGNIFICANCE_ALPHA
    """Significance level."""

    output_dir: Optional[str] = None
    """Results directory (not part of the stored manifest)."""

    def __post_init__(self) -> None:
        if not self.stats_checkpoints:
            defaults = tuple(c for c in Config.STATS_CHECKPOINTS if c < self.budget) + (self.budget,)
            object.__setattr__(self, "stats_checkpoints", defaults)
        self.validate()

    def validate(self) -> None:
        labels = [v.label for v in self.variants]
        if not labels:
            raise ConfigurationError("Manifest has no variants")
        if len(set(labels)) != len(labels):
            raise ConfigurationError("Variant labels must be unique", details={"labels": labels})
        if not self.problems:
            raise ConfigurationError("Manifest has no problems")
        if len(set(self.problems)) != len(self.problems):
            raise ConfigurationError("Problem keys must be unique", details={"problems": list(self.problems)})
        if self.runs < 1:
            raise ConfigurationError("At least one run per variant", parameter="runs", value=self.runs)
        for variant in self.variants:
            if variant.config.budget != self.budget:
                raise ConfigurationError(
                    f"Variant {variant.label} budget differs from the manifest budget",
                    parameter="budget", value=variant.config.budget,
                )
        if self.pooling not in POOLING_MODES:
            raise ConfigurationError(f"Unknown pooling mode {self.pooling}",
                                     parameter="pooling", value=self.pooling)
        if any(c <= 0 for c in self.stats_checkpoints):
            raise ConfigurationError("Statistics checkpoints must be positive",
                                     parameter="stats_checkpoints", value=list(self.stats_checkpoints))

    def variant(self, label: str) -> VariantSpec:
        for v in self.variants:
            if v.label == label:
                return v
        raise ConfigurationError(f"Unknown variant {label}", parameter="variant", value=label)

    @property
    def labels(self) -> List[str]:
        return [v.label for v in self.variants]

    def seed_for(self, run_index: int) -> int:
        return self.base_seed + run_index

    def restricted_to(self, labels: Sequence[str]) -> "ExperimentManifest":
        """Copy keeping only the given variants, in manifest order."""
        keep = tuple(v for v in self.variants if v.label in set(labels))
        return dataclasses.replace(self, variants=keep)

    def to_dict(self) -> Dict[str, Any]:
        """Stored form; output_dir is omitted so stored trees carry no paths."""
        return {
            "problems": list(self.problems),
            "variants": [v.to_dict() for v in self.variants],
            "runs": self.runs,
            "base_seed": self.base_seed,
            "budget": self.budget,
            "dimension": self.dimension,
            "stats_checkpoints": list(self.stats_checkpoints),
            "pooling": self.pooling,
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], output_dir: Optional[str] = None) -> "ExperimentManifest":
        """Create from a manifest dictionary; missing variants default to ps, big and small."""
        budget = int(data.get("budget", Config.DEFAULT_BUDGET))
        if "variants" in data:
            variants = tuple(VariantSpec.from_dict(v, budget) for v in data["variants"])
        else:
            variants = tuple(default_variants(budget))
        problems = data.get("problems")
        if not problems:
            raise ConfigurationError("Manifest lists no problems")
        return cls(
            problems=tuple(str(p) for p in problems),
            variants=variants,
            runs=int(data.get("runs", Config.DEFAULT_RUNS)),
            base_seed=int(data.get("base_seed", Config.DEFAULT_BASE_SEED)),
            budget=budget,
            dimension=int(data.get("dimension", Config.DEFAULT_DIMENSION)),
            stats_checkpoints=tuple(int(c) for c in data.get("stats_checkpoints", ())),
            pooling=str(data.get("pooling", "problem_means")),
            alpha=float(data.get("alpha", Config.SIGNIFICANCE_ALPHA)),
            output_dir=output_dir or data.get("output_dir"),
        )
