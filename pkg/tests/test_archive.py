"""
Unit tests for size-matched evaluation sets.
"""

import numpy as np
import pytest

from core.exceptions import AnalysisError, ConfigurationError
from models.algorithm_config import AlgorithmConfig
from models.evaluation_set import ArchiveKind, EvalArchivePolicy
from models.run_result import Checkpoint, RunResult
from modules.archive import build_anytime_set, build_evaluation_set, write_evaluation_set_csv


def _result(N=4, iterations=6, stride_evals=3):
    """Synthetic run whose slot s at iteration t holds (t, s)."""
    config = AlgorithmConfig(N=N, n=2, m=2, budget=1000)
    checkpoints = [
        Checkpoint(t, N + t * stride_evals, np.column_stack([np.full(N, float(t)), np.arange(N, dtype=float)]))
        for t in range(iterations + 1)
    ]
    return RunResult(problem_key="dtlz2", seed=1, config=config, checkpoints=checkpoints,
                     final_x=np.zeros((N, 3)), final_f=checkpoints[-1].objectives)


class TestPolicy:
    """Tests for archive policy selection."""

    def test_big_population_uses_final(self):
        policy = EvalArchivePolicy.for_population(500, 500)
        assert policy.kind is ArchiveKind.FINAL_POPULATION

    def test_small_population_unions_last_k(self):
        policy = EvalArchivePolicy.for_population(50, 500)
        assert policy.kind is ArchiveKind.LAST_K_UNION
        assert policy.k == 10

    def test_capacity_must_be_multiple(self):
        with pytest.raises(ConfigurationError):
            EvalArchivePolicy.for_population(30, 500)

    def test_mismatched_k(self):
        with pytest.raises(ConfigurationError):
            EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 3, 500).validate(50)

    def test_dict_round_trip(self):
        policy = EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 10, 500)
        assert EvalArchivePolicy.from_dict(policy.to_dict()) == policy


class TestBuildEvaluationSet:
    """Tests for final comparison sets."""

    def test_final_population(self):
        result = _result()
        points = build_evaluation_set(result, EvalArchivePolicy(ArchiveKind.FINAL_POPULATION, 1, 4))
        assert len(points) == 4
        assert points.is_full
        assert np.array_equal(points.points, result.final_f)
        assert points.provenance[:, 0].tolist() == [6, 6, 6, 6]

    def test_last_k_union(self):
        points = build_evaluation_set(_result(), EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 3, 12))
        assert len(points) == 12
        assert sorted(set(points.provenance[:, 0].tolist())) == [4, 5, 6]
        assert points.provenance[:4, 1].tolist() == [0, 1, 2, 3]

    def test_duplicates_kept(self):
        result = _result()
        for c in result.checkpoints:
            c.objectives[:] = 1.0
        points = build_evaluation_set(result, EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 2, 8))
        assert len(points) == 8

    def test_too_few_checkpoints(self):
        with pytest.raises(AnalysisError):
            build_evaluation_set(_result(iterations=1), EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 3, 12))

    @pytest.mark.parametrize("policy", [
        EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 3, 8),
        EvalArchivePolicy(ArchiveKind.FINAL_POPULATION, 1, 3),
    ])
    def test_policy_larger_than_capacity(self, policy):
        with pytest.raises(ConfigurationError):
            build_evaluation_set(_result(), policy)
        with pytest.raises(ConfigurationError):
            build_anytime_set(_result(), policy, upto_evals=10)

    def test_no_checkpoints(self):
        result = _result()
        result.checkpoints.clear()
        with pytest.raises(AnalysisError):
            build_evaluation_set(result, EvalArchivePolicy(ArchiveKind.FINAL_POPULATION, 1, 4))


class TestBuildAnytimeSet:
    """Tests for evaluation sets at intermediate budgets."""

    def test_prefix_only(self):
        points = build_anytime_set(_result(), EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 3, 12), upto_evals=10)
        # checkpoints at 4, 7 and 10 evaluations
        assert sorted(set(points.provenance[:, 0].tolist())) == [0, 1, 2]

    def test_short_prefix_is_partial(self):
        points = build_anytime_set(_result(), EvalArchivePolicy(ArchiveKind.LAST_K_UNION, 3, 12), upto_evals=4)
        assert len(points) == 4
        assert not points.is_full

    def test_before_first_checkpoint(self):
        with pytest.raises(AnalysisError):
            build_anytime_set(_result(), EvalArchivePolicy(ArchiveKind.FINAL_POPULATION, 1, 4), upto_evals=3)


class TestWriteEvaluationSet:
    """Tests for the evaluation-set CSV."""

    def test_columns(self, tmp_path):
        points = build_evaluation_set(_result(), EvalArchivePolicy(ArchiveKind.FINAL_POPULATION, 1, 4))
        lines = write_evaluation_set_csv(points, tmp_path / "set.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "f1,f2,iteration,slot"
        assert lines[1] == "6.0,0.0,6,0"
