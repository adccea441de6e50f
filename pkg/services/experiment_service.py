"""
Experiment orchestration: running a manifest, recomputing indicators
offline and running the statistical battery.

Process Model:
    Main process
    └── ProcessPoolExecutor (one task per (problem, variant, run))

Each task builds its own problem descriptor and RNG from a frozen RunTask,
writes only inside its own run directory and returns a small summary.
Runs share nothing, so the pool size never changes the results.

Flow:
    1. execute(manifest)      -> runs/<problem>/<variant>/run_<r>/...
    2. recompute_metrics()    -> metrics/final_quality.csv, anytime/, eaf/, normalization/
    3. run_stats(budgets)     -> metrics/stats_<budget>.csv, metrics/ci.csv
"""

from __future__ import annotations

import dataclasses
import logging
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from core.exceptions import AnalysisError, ConfigurationError
from logging_config import get_logger, get_run_logger, set_thread_name, setup_logging
from models.algorithm_config import AlgorithmConfig
from models.comparison import TestReport
from models.evaluation_set import EvalArchivePolicy, EvaluationSet
from models.indicators import NormalizationFrame, TrajectorySeries
from models.manifest import ExperimentManifest
from models.run_result import RunResult
from modules import engine
from modules.archive import build_evaluation_set, write_evaluation_set_csv
from modules.eaf import eaf_diff, positive_area_fraction, positive_share_of_differing_area, write_eaf_csv
from modules.metrics import (
    anytime_trajectory,
    hypervolume,
    nondominated_proportion,
    normalize_objectives,
    summarize,
    unique_nondominated_proportion,
)
from modules.problems import problem_from_key
from modules.stats import compare_variants, paired_median_ci
from services.results_store import ResultsStore

logger = get_logger(__name__)

STATS_COLUMNS = ["row", "column", "budget", "raw_p", "adjusted_p", "direction", "median_difference"]


# =============================================================================
# WORKER SIDE
# =============================================================================

@dataclass(frozen=True)
class RunTask:
    """Everything a worker needs for one run (picklable)."""

    root: str
    problem: str
    dimension: int
    label: str
    config: AlgorithmConfig
    run_index: int
    seed: int


def _init_worker(log_level: int) -> None:
    setup_logging(log_level=log_level)


def execute_run(task: RunTask) -> Dict[str, Any]:
    """
    Run one task and store its result.

    Returns:
        Summary with problem, variant, run, seed, evals and iterations
    """
    previous_name = threading.current_thread().name
    set_thread_name(f"{task.problem}-{task.label}-r{task.run_index}")
    try:
        run_logger = get_run_logger(task.problem, task.label, task.run_index)
        problem = problem_from_key(task.problem, task.dimension)

        run_logger.info(f"Starting run (seed={task.seed}, N={task.config.N}, n={task.config.n})")
        result = engine.run(task.config, problem, task.seed, run_logger=run_logger)
        ResultsStore(task.root).write_run(result, task.label, task.run_index,
                                          extra={"problem_descriptor": problem.to_dict()})
    finally:
        set_thread_name(previous_name)

    return {
        "problem": task.problem,
        "variant": task.label,
        "run": task.run_index,
        "seed": task.seed,
        "evals": result.evals_used,
        "iterations": result.iterations,
    }


# =============================================================================
# SERVICE
# =============================================================================

@dataclass
class ProblemMetrics:
    """Indicator values of one problem, keyed by variant label."""

    problem: str
    frame: NormalizationFrame
    final_hv: Dict[str, List[float]]
    nndom_unique: Dict[str, List[float]]
    nndom_all: Dict[str, List[float]]
    trajectories: Dict[str, List[TrajectorySeries]]


class ExperimentService:
    """
    Runs manifests against a results store and analyses the stored runs.

    Attributes:
        store: Results directory the service reads and writes
        workers: Process count; 1 runs everything in the calling process
    """

    def __init__(self, store: ResultsStore, workers: int = Config.DEFAULT_WORKERS):
        if workers < 1:
            raise ConfigurationError("At least one worker is required", parameter="workers", value=workers)
        self.store = store
        self.workers = workers

    # =========================================================================
    # EXECUTION
    # =========================================================================

    def execute(self, manifest: ExperimentManifest) -> List[Dict[str, Any]]:
        """
        Run every (problem, variant, run) of the manifest not already stored.

        Raises:
            ConfigurationError: If a problem key is unknown, the directory is
                not writable, or it holds a different experiment
        """
        for key in manifest.problems:
            problem = problem_from_key(key, manifest.dimension)
            for variant in manifest.variants:
                variant.config_for(problem)

        self.store.ensure_writable()
        if self.store.manifest_path.exists():
            stored = self.store.read_json(self.store.manifest_path)
            if stored != manifest.to_dict():
                raise ConfigurationError(
                    f"{self.store.root} already holds a different experiment",
                    parameter="output_dir", value=str(self.store.root),
                )
        else:
            self.store.write_manifest(manifest)

        tasks = [
            RunTask(
                root=str(self.store.root),
                problem=key,
                dimension=manifest.dimension,
                label=label,
                config=manifest.variant(label).config_for(problem_from_key(key, manifest.dimension)),
                run_index=r,
                seed=manifest.seed_for(r),
            )
            for key, label, r in self.store.missing_runs(manifest)
        ]
        total = len(manifest.problems) * len(manifest.variants) * manifest.runs
        logger.info(f"{len(tasks)} of {total} runs to execute with {self.workers} worker(s)")
        if not tasks:
            return []

        if self.workers == 1:
            summaries = [execute_run(task) for task in tasks]
        else:
            level = logging.getLogger("moead_ps").level or logging.INFO
            with ProcessPoolExecutor(max_workers=self.workers, initializer=_init_worker,
                                     initargs=(level,)) as pool:
                summaries = list(pool.map(execute_run, tasks))

        logger.info(f"Finished {len(summaries)} runs")
        return summaries

    # =========================================================================
    # METRICS
    # =========================================================================

    def _load(self, manifest: ExperimentManifest, problem: str) -> Dict[str, List[RunResult]]:
        return {
            label: [self.store.read_run(problem, label, r) for r in range(manifest.runs)]
            for label in manifest.labels
        }

    def _problem_metrics(self, manifest: ExperimentManifest, problem: str,
                         runs: Dict[str, List[RunResult]]) -> Tuple[ProblemMetrics, Dict[str, List[EvaluationSet]]]:
        sets = {
            label: [build_evaluation_set(r, manifest.variant(label).policy) for r in results]
            for label, results in runs.items()
        }
        frame = NormalizationFrame.from_sets(s.points for group in sets.values() for s in group)
        metrics = ProblemMetrics(
            problem=problem,
            frame=frame,
            final_hv={label: [hypervolume(normalize_objectives(s, frame)) for s in group]
                      for label, group in sets.items()},
            nndom_unique={label: [unique_nondominated_proportion(s) for s in group] for label, group in sets.items()},
            nndom_all={label: [nondominated_proportion(s) for s in group] for label, group in sets.items()},
            trajectories={
                label: [anytime_trajectory(r, manifest.variant(label).policy, frame) for r in results]
                for label, results in runs.items()
            },
        )
        return metrics, sets

    def _write_eaf(self, manifest: ExperimentManifest, problem: str, frame: NormalizationFrame,
                   sets: Dict[str, List[EvaluationSet]]) -> List[Dict[str, Any]]:
        rows = []
        eaf_dir = self.store.metrics_dir / "eaf"
        for a, b in combinations(manifest.labels, 2):
            runs_a = [normalize_objectives(s, frame) for s in sets[a]]
            runs_b = [normalize_objectives(s, frame) for s in sets[b]]
            diff = eaf_diff(runs_a, runs_b)
            stem = f"{problem}__{a}__{b}"
            write_eaf_csv(diff.grid, eaf_dir / f"{stem}.csv")
            surfaces = [("best", p) for p in diff.grand_best.tolist()] + \
                       [("worst", p) for p in diff.grand_worst.tolist()]
            self.store.write_csv(eaf_dir / f"{stem}__surfaces.csv", ["surface", "f1", "f2"],
                                 ([name, f1, f2] for name, (f1, f2) in surfaces))
            rows.append({"problem": problem, "a": a, "b": b,
                         "positive_area_fraction": positive_area_fraction(diff),
                         "positive_share_of_differing": positive_share_of_differing_area(diff)})
        return rows

    def analysis_manifest(self, policy_overrides: Optional[Dict[str, EvalArchivePolicy]] = None
                          ) -> ExperimentManifest:
        """
        The stored manifest restricted to variants that have runs on disk.

        A variant with no stored run at all is left out of the analysis; a
        variant with only some of its runs is an error.

        Args:
            policy_overrides: Replacement evaluation-set policy per variant label

        Raises:
            MissingRunsError: If a present variant lacks some of its runs
        """
        manifest = self.store.read_manifest()
        missing = self.store.missing_runs(manifest)
        expected = len(manifest.problems) * manifest.runs
        absent = [label for label in manifest.labels
                  if sum(1 for triple in missing if triple[1] == label) == expected]
        if absent and len(absent) < len(manifest.labels):
            logger.warning(f"No runs stored for {', '.join(absent)}; analysing the remaining variants")
            manifest = manifest.restricted_to([label for label in manifest.labels if label not in absent])
        self.store.require_runs(manifest)

        if policy_overrides:
            unknown = sorted(set(policy_overrides) - set(manifest.labels))
            if unknown:
                raise ConfigurationError(f"Policy override for unknown variant(s) {', '.join(unknown)}",
                                         parameter="variant", value=unknown)
            variants = []
            for variant in manifest.variants:
                policy = policy_overrides.get(variant.label, variant.policy)
                policy.validate(variant.config.N)
                variants.append(dataclasses.replace(variant, policy=policy))
            manifest = dataclasses.replace(manifest, variants=tuple(variants))
        return manifest

    def recompute_metrics(self, policy_overrides: Optional[Dict[str, EvalArchivePolicy]] = None
                          ) -> List[ProblemMetrics]:
        """
        Recompute every indicator from the stored runs; never evaluates.

        Raises:
            MissingRunsError: If the store lacks runs the manifest promises
        """
        manifest = self.analysis_manifest(policy_overrides)
        metrics_dir = self.store.metrics_dir

        all_metrics: List[ProblemMetrics] = []
        hv_rows, quality_rows, eaf_rows = [], [], []
        for problem in manifest.problems:
            logger.info(f"Computing indicators for {problem}")
            runs = self._load(manifest, problem)
            metrics, sets = self._problem_metrics(manifest, problem, runs)
            all_metrics.append(metrics)

            self.store.write_json(metrics_dir / "normalization" / f"{problem}.json", metrics.frame.to_dict())
            for label, group in sets.items():
                for r, evaluation_set in enumerate(group):
                    write_evaluation_set_csv(evaluation_set,
                                             metrics_dir / "sets" / f"{problem}__{label}__run_{r}.csv")

            quality = [problem]
            for label in manifest.labels:
                for r, result in enumerate(runs[label]):
                    hv_rows.append([problem, label, r, result.seed, result.evals_used,
                                    metrics.final_hv[label][r], metrics.nndom_unique[label][r],
                                    metrics.nndom_all[label][r]])
                for values in (metrics.final_hv[label], metrics.nndom_unique[label]):
                    mean, se = summarize(values)
                    quality.append(f"{mean:.4f} ({se:.4f})")

                self.store.write_csv(
                    metrics_dir / "anytime" / f"{problem}__{label}.csv",
                    ["run", "evals", "hv"],
                    ([r, int(e), float(h)] for r, t in enumerate(metrics.trajectories[label])
                     for e, h in zip(t.evals, t.hv)),
                )
            quality_rows.append(quality)

            if runs[manifest.labels[0]][0].config.m == 2:
                eaf_rows.extend(self._write_eaf(manifest, problem, metrics.frame, sets))

        self.store.write_csv(
            metrics_dir / "final_hv_runs.csv",
            ["problem", "variant", "run", "seed", "evals", "hv", "nndom_unique", "nndom_all"],
            hv_rows,
        )
        self.store.write_csv(
            metrics_dir / "final_quality.csv",
            ["problem"] + [f"{label}_{column}" for label in manifest.labels for column in ("hv", "nndom")],
            quality_rows,
        )
        if eaf_rows:
            self.store.write_csv(metrics_dir / "eaf_summary.csv",
                                 ["problem", "a", "b", "positive_area_fraction", "positive_share_of_differing"],
                                 ([r["problem"], r["a"], r["b"], r["positive_area_fraction"], r["positive_share_of_differing"]]
                                  for r in eaf_rows))
        logger.info(f"Indicators written to {metrics_dir}")
        return all_metrics

    # =========================================================================
    # STATISTICS
    # =========================================================================

    def load_trajectories(self, manifest: ExperimentManifest) -> Dict[Tuple[str, str], List[TrajectorySeries]]:
        """Anytime series per (problem, variant); recomputes metrics when absent."""
        anytime_dir = self.store.metrics_dir / "anytime"
        expected = [anytime_dir / f"{problem}__{label}.csv"
                    for problem in manifest.problems for label in manifest.labels]
        if not all(path.exists() for path in expected):
            logger.info("Anytime tables missing, recomputing indicators first")
            self.recompute_metrics()

        trajectories = {}
        for problem in manifest.problems:
            for label in manifest.labels:
                _, rows = self.store.read_csv(anytime_dir / f"{problem}__{label}.csv")
                table = np.array(rows, dtype=float).reshape(len(rows), 3)
                trajectories[(problem, label)] = [
                    TrajectorySeries(evals=table[table[:, 0] == r, 1].astype(np.int64),
                                     hv=table[table[:, 0] == r, 2])
                    for r in range(manifest.runs)
                ]
        return trajectories

    @staticmethod
    def _samples(manifest: ExperimentManifest, trajectories: Dict[Tuple[str, str], List[TrajectorySeries]],
                 budget: int) -> Dict[str, List[float]]:
        samples: Dict[str, List[float]] = {label: [] for label in manifest.labels}
        for problem in manifest.problems:
            for label in manifest.labels:
                values = [t.value_at(budget) for t in trajectories[(problem, label)]]
                if manifest.pooling == "runs":
                    samples[label].extend(values)
                else:
                    samples[label].append(float(np.mean(values)))
        return samples

    def run_stats(self, budgets: Optional[Sequence[int]] = None) -> List[TestReport]:
        """
        Rank-sum battery over every variant pair at each budget.

        Raises:
            AnalysisError: If samples are too small or a budget precedes the
                first checkpoint
        """
        manifest = self.analysis_manifest()
        budgets = list(budgets or manifest.stats_checkpoints)
        trajectories = self.load_trajectories(manifest)
        pairs = list(combinations(manifest.labels, 2))

        reports: List[TestReport] = []
        ci_rows = []
        for budget in budgets:
            samples = self._samples(manifest, trajectories, budget)
            batch = compare_variants(samples, pairs, budget, manifest.alpha)
            reports.extend(batch)
            self.store.write_csv(
                self.store.metrics_dir / f"stats_{budget}.csv",
                ["pair"] + STATS_COLUMNS,
                ([r.label] + [r.to_dict()[key] for key in STATS_COLUMNS] for r in batch),
            )
            for row, column in pairs:
                diffs = np.asarray(samples[column]) - np.asarray(samples[row])
                try:
                    low, high, estimate = paired_median_ci(diffs, manifest.alpha)
                except AnalysisError as e:
                    logger.warning(f"No confidence interval for {row} vs {column} at {budget}: {e.message}")
                    continue
                ci_rows.append([f"{row} vs {column}", row, column, budget, low, high, estimate])

        self.store.write_csv(self.store.metrics_dir / "ci.csv",
                             ["pair", "row", "column", "budget", "low", "high", "estimate"], ci_rows)
        logger.info(f"{len(reports)} comparisons over {len(budgets)} budget(s)")
        return reports

    # =========================================================================
    # PIPELINE
    # =========================================================================

    def run_pipeline(self, manifest: ExperimentManifest) -> Dict[str, Any]:
        """
        Execute the manifest, then compute indicators and the statistics battery.

        Statistics that the experiment is too small for are skipped with a
        warning; the runs and indicator tables are still written.
        """
        summaries = self.execute(manifest)
        metrics = self.recompute_metrics()
        try:
            reports = self.run_stats()
        except AnalysisError as e:
            logger.warning(f"Statistics skipped: {e.message}")
            reports = []
        return {"runs": summaries, "metrics": metrics, "reports": reports}
