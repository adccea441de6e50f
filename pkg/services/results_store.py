"""
On-disk results directory.

Layout:
    <root>/manifest.json
    <root>/runs/<problem>/<variant>/run_<r>/run.json
    <root>/runs/<problem>/<variant>/run_<r>/checkpoints.csv.gz
    <root>/runs/<problem>/<variant>/run_<r>/final_population.csv
    <root>/metrics/...
    <root>/plots/...

Every file is written to a temporary sibling and moved into place, so a
crashed worker never leaves a half-written file behind. Floats are written
with repr() and JSON with sorted keys; the same manifest always yields a
byte-identical tree.

Thread Safety:
    Workers only write inside their own run directory; the store holds
    no mutable state beyond its root path.
"""

from __future__ import annotations

import csv
import gzip
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import AnalysisError, ConfigurationError, MissingRunsError
from logging_config import get_logger
from models.algorithm_config import AlgorithmConfig
from models.manifest import ExperimentManifest
from models.run_result import Checkpoint, RunResult

logger = get_logger(__name__)

MANIFEST_FILE = "manifest.json"
RUN_FILE = "run.json"
CHECKPOINT_FILE = "checkpoints.csv.gz"
FINAL_POPULATION_FILE = "final_population.csv"


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows as CSV text with repr() floats and \\n line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


class ResultsStore:
    """
    Reader and writer of one results directory.

    Attributes:
        root: Results directory
    """

    def __init__(self, root: Path | str):
        self.root = Path(root)

    # =========================================================================
    # PATHS
    # =========================================================================

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST_FILE

    @property
    def metrics_dir(self) -> Path:
        return self.root / "metrics"

    @property
    def plots_dir(self) -> Path:
        return self.root / "plots"

    def run_dir(self, problem: str, label: str, run_index: int) -> Path:
        return self.root / "runs" / problem / label / f"run_{run_index}"

    # =========================================================================
    # ATOMIC IO
    # =========================================================================

    def ensure_writable(self) -> None:
        """
        Create the root directory and check it accepts files.

        Raises:
            ConfigurationError: If the directory cannot be written
        """
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            with tempfile.NamedTemporaryFile(dir=self.root, prefix=".write-check-"):
                pass
        except OSError as e:
            raise ConfigurationError(f"Output directory {self.root} is not writable: {e}",
                                     parameter="output_dir", value=str(self.root)) from e

    def write_bytes(self, path: Path, data: bytes) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    def write_text(self, path: Path, text: str) -> Path:
        return self.write_bytes(path, text.encode("utf-8"))

    def write_json(self, path: Path, data: Any) -> Path:
        return self.write_text(path, json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n")

    def write_csv(self, path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]],
                  compress: bool = False) -> Path:
        text = csv_text(header, rows)
        if compress:
            return self.write_bytes(path, gzip.compress(text.encode("utf-8"), mtime=0))
        return self.write_text(path, text)

    @staticmethod
    def read_json(path: Path) -> Any:
        with open(path, encoding="utf-8") as f:
            return json.load(f)

    @staticmethod
    def read_csv(path: Path) -> Tuple[List[str], List[List[str]]]:
        opener = gzip.open if path.suffix == ".gz" else open
        with opener(path, "rt", newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, [])
            return header, [row for row in reader]

    # =========================================================================
    # MANIFEST
    # =========================================================================

    def write_manifest(self, manifest: ExperimentManifest) -> Path:
        return self.write_json(self.manifest_path, manifest.to_dict())

    def read_manifest(self) -> ExperimentManifest:
        """
        Raises:
            AnalysisError: If the directory holds no manifest
        """
        if not self.manifest_path.exists():
            raise AnalysisError(f"No {MANIFEST_FILE} in {self.root}", {"root": str(self.root)})
        return ExperimentManifest.from_dict(self.read_json(self.manifest_path), output_dir=str(self.root))

    # =========================================================================
    # RUNS
    # =========================================================================

    def has_run(self, problem: str, label: str, run_index: int) -> bool:
        directory = self.run_dir(problem, label, run_index)
        return all((directory / name).exists() for name in (RUN_FILE, CHECKPOINT_FILE, FINAL_POPULATION_FILE))

    def missing_runs(self, manifest: ExperimentManifest) -> List[Tuple[str, str, int]]:
        return [
            (problem, label, r)
            for problem in manifest.problems
            for label in manifest.labels
            for r in range(manifest.runs)
            if not self.has_run(problem, label, r)
        ]

    def write_run(self, result: RunResult, label: str, run_index: int,
                  extra: Optional[Dict[str, Any]] = None) -> Path:
        """
        Persist a RunResult.

        The run manifest is written last, so its presence marks a complete run.
        """
        directory = self.run_dir(result.problem_key, label, run_index)
        m = result.config.m
        N = result.config.N

        header = ["iteration", "evals"] + [f"s{slot}_f{j + 1}" for slot in range(N) for j in range(m)]
        rows = ([c.iteration, c.evals] + c.objectives.ravel().tolist() for c in result.checkpoints)
        self.write_csv(directory / CHECKPOINT_FILE, header, rows, compress=True)

        D = result.final_x.shape[1]
        header = [f"x{j + 1}" for j in range(D)] + [f"f{j + 1}" for j in range(m)]
        rows = (x + f for x, f in zip(result.final_x.tolist(), result.final_f.tolist()))
        self.write_csv(directory / FINAL_POPULATION_FILE, header, rows)

        record = result.manifest()
        record.update({"variant": label, "run_index": run_index, **(extra or {})})
        return self.write_json(directory / RUN_FILE, record)

    def read_run(self, problem: str, label: str, run_index: int) -> RunResult:
        """
        Load a stored run.

        Raises:
            MissingRunsError: If any of the run's files is absent
        """
        if not self.has_run(problem, label, run_index):
            raise MissingRunsError([(problem, label, run_index)])
        directory = self.run_dir(problem, label, run_index)

        record = self.read_json(directory / RUN_FILE)
        config = AlgorithmConfig.from_dict(record["config"])

        _, rows = self.read_csv(directory / CHECKPOINT_FILE)
        checkpoints = [
            Checkpoint(
                iteration=int(row[0]),
                evals=int(row[1]),
                objectives=np.array(row[2:], dtype=float).reshape(config.N, config.m),
            )
            for row in rows
        ]

        header, rows = self.read_csv(directory / FINAL_POPULATION_FILE)
        table = np.array(rows, dtype=float).reshape(len(rows), len(header))
        return RunResult(
            problem_key=record["problem"],
            seed=int(record["seed"]),
            config=config,
            checkpoints=checkpoints,
            final_x=table[:, : table.shape[1] - config.m],
            final_f=table[:, table.shape[1] - config.m:],
        )

    def require_runs(self, manifest: ExperimentManifest) -> None:
        """
        Raises:
            MissingRunsError: Listing every absent (problem, variant, run)
        """
        missing = self.missing_runs(manifest)
        if missing:
            raise MissingRunsError(missing)
