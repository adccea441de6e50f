"""
Services layer for moead_ps.

This package contains the orchestration services:
- ResultsStore: results directory layout and atomic file IO
- ExperimentService: manifest execution over a process pool, offline
  indicator recomputation and the statistics battery

Process Model:
    Main process (CLI)
    └── ProcessPoolExecutor workers (one task per problem/variant/run)

Workers receive frozen RunTask records and write only inside their own run
directory. Plotting lives in services.plot_service and is imported lazily
by the CLI.
"""

from .results_store import ResultsStore
from .experiment_service import ExperimentService, RunTask, execute_run

__all__ = [
    "ResultsStore",
    "ExperimentService",
    "RunTask",
    "execute_run",
]
