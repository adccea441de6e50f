"""
moead_ps command line.

Subcommands:
    run <manifest.json> [--workers K] [--out DIR]   execute, then metrics and stats
    metrics <store> [--last-k LABEL=K ...]           recompute indicators offline
    stats <store> [--at EVALS,...]                   rank-sum battery and confidence intervals
    plot <store> --kind {anytime,eaf_diff,ci}        SVG figures
    benchmark-suite [--subset dtlz|uf|all] ...           the three default variants on the benchmark suite
    problems                                         list problem keys
    weights N M [--seed S] [--out FILE]              dump a weight set

Exit codes:
    0 success, 2 configuration error, 3 analysis error

Runs are dispatched over a process pool when --workers > 1. The
multiprocessing entry point is guarded below so frozen builds on Windows
do not re-execute the CLI in every child.
"""

from __future__ import annotations

import functools
import json
import logging
import multiprocessing
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import click

from config import Config
from core.exceptions import AnalysisError, ConfigurationError, MoeadPsError, UnsupportedError
from logging_config import get_logger, setup_logging
from models.evaluation_set import ArchiveKind, EvalArchivePolicy
from models.manifest import ExperimentManifest, default_variants
from modules.problems import list_problem_keys, problem_from_key
from modules.weights import generate_weights, write_weights_csv
from services.experiment_service import ExperimentService
from services.results_store import ResultsStore, csv_text

logger = get_logger(__name__)

EXIT_CONFIGURATION = 2
EXIT_ANALYSIS = 3

SUITE_SUBSETS: Dict[str, Tuple[str, ...]] = {
    "dtlz": tuple(k for k in list_problem_keys() if k.startswith("dtlz")),
    "uf": tuple(k for k in list_problem_keys() if k.startswith("uf")),
    "all": tuple(list_problem_keys()),
}


def handle_errors(command: Callable) -> Callable:
    """Map library errors to exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ConfigurationError as e:
            logger.debug("Configuration error", exc_info=True)
            click.echo(f"Configuration error: {e}", err=True)
            sys.exit(EXIT_CONFIGURATION)
        except (AnalysisError, UnsupportedError) as e:
            logger.debug("Analysis error", exc_info=True)
            click.echo(f"Analysis error: {e}", err=True)
            sys.exit(EXIT_ANALYSIS)
        except MoeadPsError as e:
            logger.error(f"Internal error: {e}")
            raise

    return wrapper


def _load_manifest(path: Path, out: Optional[Path]) -> ExperimentManifest:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Cannot read manifest {path}: {e}", parameter="manifest", value=str(path)) from e
    if not isinstance(data, dict):
        raise ConfigurationError("Manifest must be a JSON object", parameter="manifest", value=str(path))
    output_dir = str(out) if out else data.get("output_dir") or Config.OUTPUT_ROOT
    return ExperimentManifest.from_dict(data, output_dir=output_dir)


def _report_pipeline(outcome: dict, store: ResultsStore) -> None:
    click.echo(f"{len(outcome['runs'])} run(s) executed; results in {store.root}")
    for report in outcome["reports"]:
        click.echo(f"  {report.budget:>7}  {report.label:<16} p={report.raw_p:.4g}  "
                   f"adj={report.adjusted_p:.4g}  {report.direction}")


# =============================================================================
# COMMAND GROUP
# =============================================================================

@click.group()
@click.option("--log-level", default=Config.LOG_LEVEL, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
def cli(log_level: str) -> None:
    """MOEA/D-DE with partial updates: experiments and analysis."""
    setup_logging(
        log_level=getattr(logging, log_level.upper()),
        log_dir=Path(Config.LOG_DIR),
        enable_file_logging=Config.ENABLE_FILE_LOGGING,
    )


@cli.command()
@click.argument("manifest_path", metavar="MANIFEST", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--workers", default=Config.DEFAULT_WORKERS, show_default=True, type=click.IntRange(min=1))
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), help="Results directory")
@handle_errors
def run(manifest_path: Path, workers: int, out: Optional[Path]) -> None:
    """Execute a manifest, then compute indicators and statistics."""
    manifest = _load_manifest(manifest_path, out)
    store = ResultsStore(manifest.output_dir)
    outcome = ExperimentService(store, workers).run_pipeline(manifest)
    _report_pipeline(outcome, store)


@cli.command()
@click.argument("store_dir", metavar="STORE", type=click.Path(file_okay=False, path_type=Path))
@click.option("--last-k", "last_k", multiple=True, metavar="LABEL=K",
              help="Judge a variant on the union of its last K populations")
@handle_errors
def metrics(store_dir: Path, last_k: Tuple[str, ...]) -> None:
    """Recompute indicator tables from stored runs."""
    store = ResultsStore(store_dir)
    overrides = {}
    if last_k:
        manifest = store.read_manifest()
        for item in last_k:
            label, _, k = item.partition("=")
            if not k.isdigit() or int(k) < 1:
                raise ConfigurationError(f"Expected LABEL=K, got {item}", parameter="last_k", value=item)
            N = manifest.variant(label).config.N
            overrides[label] = EvalArchivePolicy(ArchiveKind.LAST_K_UNION, int(k), int(k) * N)
    results = ExperimentService(store).recompute_metrics(overrides or None)
    click.echo(f"Indicators for {len(results)} problem(s) written to {store.metrics_dir}")


@cli.command()
@click.argument("store_dir", metavar="STORE", type=click.Path(file_okay=False, path_type=Path))
@click.option("--at", "at", default=None, metavar="EVALS,...", help="Comma-separated evaluation counts")
@handle_errors
def stats(store_dir: Path, at: Optional[str]) -> None:
    """Rank-sum tests with Hommel adjustment at each budget."""
    budgets = None
    if at:
        try:
            budgets = [int(v) for v in at.split(",") if v.strip()]
        except ValueError as e:
            raise ConfigurationError(f"Invalid --at list {at}", parameter="at", value=at) from e
    store = ResultsStore(store_dir)
    for report in ExperimentService(store).run_stats(budgets):
        click.echo(f"{report.budget:>7}  {report.label:<16} p={report.raw_p:.4g}  "
                   f"adj={report.adjusted_p:.4g}  {report.direction}")


@cli.command()
@click.argument("store_dir", metavar="STORE", type=click.Path(file_okay=False, path_type=Path))
@click.option("--kind", required=True, help="anytime, eaf_diff or ci")
@handle_errors
def plot(store_dir: Path, kind: str) -> None:
    """Render SVG figures from the metric tables."""
    from services.plot_service import render_plots

    written = render_plots(ResultsStore(store_dir), kind)
    click.echo(f"{len(written)} plot(s) written")


@cli.command("benchmark-suite")
@click.option("--subset", type=click.Choice(sorted(SUITE_SUBSETS)), default="all", show_default=True)
@click.option("--runs", default=Config.DEFAULT_RUNS, show_default=True, type=click.IntRange(min=1))
@click.option("--budget", default=Config.DEFAULT_BUDGET, show_default=True, type=click.IntRange(min=1))
@click.option("--base-seed", default=Config.DEFAULT_BASE_SEED, show_default=True, type=int)
@click.option("--workers", default=Config.DEFAULT_WORKERS, show_default=True, type=click.IntRange(min=1))
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), help="Results directory")
@handle_errors
def benchmark_suite(subset: str, runs: int, budget: int, base_seed: int, workers: int, out: Optional[Path]) -> None:
    """Compare ps, big and small on the benchmark suite."""
    output_dir = out or Path(Config.OUTPUT_ROOT) / f"suite-{subset}"
    manifest = ExperimentManifest(
        problems=SUITE_SUBSETS[subset],
        variants=tuple(default_variants(budget)),
        runs=runs,
        base_seed=base_seed,
        budget=budget,
        output_dir=str(output_dir),
    )
    store = ResultsStore(output_dir)
    outcome = ExperimentService(store, workers).run_pipeline(manifest)
    _report_pipeline(outcome, store)


@cli.command()
@handle_errors
def problems() -> None:
    """List the problem registry."""
    for key in list_problem_keys():
        problem = problem_from_key(key)
        click.echo(f"{key:<10} m={problem.m}  D={problem.D}")


@cli.command()
@click.argument("N", type=click.IntRange(min=1))
@click.argument("M", type=click.IntRange(min=2))
@click.option("--seed", default=Config.WEIGHT_SEED, show_default=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="CSV file (stdout if omitted)")
@handle_errors
def weights(n: int, m: int, seed: int, out: Optional[Path]) -> None:
    """Print or save N simplex weight vectors for M objectives."""
    vectors = generate_weights(n, m, seed)
    if out:
        write_weights_csv(vectors, out)
        click.echo(f"{n} weights written to {out}")
    else:
        click.echo(csv_text([f"w{j + 1}" for j in range(m)], vectors.tolist()), nl=False)


if __name__ == "__main__":
    if sys.platform == "win32":
        multiprocessing.freeze_support()
    cli()
