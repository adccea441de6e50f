"""
Shared fixtures and the --run-slow switch.

Full-budget reproduction checks take minutes and are skipped unless
pytest is invoked with --run-slow.
"""

import numpy as np
import pytest

from config import TestingConfig
from models.algorithm_config import AlgorithmConfig
from models.evaluation_set import EvalArchivePolicy
from models.manifest import ExperimentManifest, VariantSpec
from services.results_store import ResultsStore


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="run full-budget reproduction checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_variants():
    """Three tiny variants mirroring ps / big / small at test scale."""
    budget = TestingConfig.DEFAULT_BUDGET
    capacity = TestingConfig.ARCHIVE_CAPACITY
    ps = AlgorithmConfig(N=40, n=4, m=2, budget=budget, checkpoint_stride=2)
    big = AlgorithmConfig(N=40, n=38, m=2, budget=budget)
    small = AlgorithmConfig(N=8, n=6, m=2, budget=budget, archive_policy="last_k_union")
    return (
        VariantSpec("ps", ps, EvalArchivePolicy.for_population(40, capacity)),
        VariantSpec("big", big, EvalArchivePolicy.for_population(40, capacity)),
        VariantSpec("small", small, EvalArchivePolicy.for_population(8, capacity)),
    )


@pytest.fixture
def small_manifest(tmp_path, small_variants):
    return ExperimentManifest(
        problems=("dtlz2", "uf1", "dtlz1_inv"),
        variants=small_variants,
        runs=TestingConfig.DEFAULT_RUNS,
        base_seed=1,
        budget=TestingConfig.DEFAULT_BUDGET,
        dimension=TestingConfig.DEFAULT_DIMENSION,
        stats_checkpoints=TestingConfig.STATS_CHECKPOINTS,
        output_dir=str(tmp_path / "results"),
    )


@pytest.fixture
def store(small_manifest):
    return ResultsStore(small_manifest.output_dir)
