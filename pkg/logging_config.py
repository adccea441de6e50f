"""
Centralized logging configuration for moead_ps.

Experiments dispatch runs over a worker pool, so every log record carries
the worker (thread and process) that produced it.

Features:
    - Automatic worker name in all log messages
    - Console output (always enabled)
    - Rotating file logs (optional)
    - Separate error log for ERROR/CRITICAL messages
    - Helper functions for getting loggers with consistent naming

Log Format:
    2026-03-02 10:15:30 [INFO    ] [MainProcess/MainThread] moead_ps.services.experiment_service - 54 runs scheduled
    2026-03-02 10:15:31 [INFO    ] [SpawnProcess-1/MainThread] moead_ps.run.uf3.ps.r03 - Run finished

Usage:
    # At CLI startup
    from logging_config import setup_logging, get_logger

    setup_logging(log_level=logging.INFO, enable_file_logging=False)

    # In modules
    logger = get_logger(__name__)

    # For one optimization run
    run_logger = get_run_logger("uf3", "ps", 3)

Log files are never written inside a results directory, so result trees
stay byte-identical between repeated runs.
"""

import logging
import multiprocessing
import sys
import threading
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

APP_NAME = "moead_ps"


# =============================================================================
# WORKER CONTEXT FILTER
# =============================================================================

class WorkerContextFilter(logging.Filter):
    """
    Logging filter that adds worker context to all log records.

    Adds `worker` ("<process>/<thread>") so messages from pool workers can
    be told apart.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        process_name = multiprocessing.current_process().name
        thread_name = threading.current_thread().name
        record.worker = f"{process_name}/{thread_name}"
        return True


# =============================================================================
# HANDLERS
# =============================================================================

LOG_FORMAT = "%(asctime)s [%(levelname)-8s] [%(worker)s] %(name)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
MAX_LOG_BYTES = 10 * 1024 * 1024
LOG_BACKUPS = 5


def _rotating(path: Path) -> RotatingFileHandler:
    return RotatingFileHandler(filename=path, maxBytes=MAX_LOG_BYTES, backupCount=LOG_BACKUPS, encoding="utf-8")


def _configured(handler: logging.Handler, level: int, formatter: logging.Formatter,
                worker_filter: logging.Filter) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(formatter)
    handler.addFilter(worker_filter)
    return handler


# =============================================================================
# LOGGING SETUP
# =============================================================================

def setup_logging(
    app_name: str = APP_NAME,
    log_level: int = logging.INFO,
    log_dir: Optional[Path] = None,
    enable_file_logging: bool = False,
) -> logging.Logger:
    """
    Configure library logging with worker context.

    This sets up:
    1. Console handler (always enabled, stderr so CLI stdout stays clean)
    2. Rotating file handler (optional)
    3. Error file handler (optional) - ERROR/CRITICAL only
    4. Worker context filter

    Args:
        app_name: Name of the root logger (default: "moead_ps")
        log_level: Minimum log level (default: INFO)
        log_dir: Directory for log files (default: ./logs next to this file)
        enable_file_logging: Whether to write to log files (default: False)

    Returns:
        Configured root logger instance
    """
    logger = logging.getLogger(app_name)
    logger.setLevel(log_level)
    logger.propagate = False

    # Allows re-configuration (the CLI calls this once per invocation)
    logger.handlers.clear()

    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)
    worker_filter = WorkerContextFilter()

    handlers = [_configured(logging.StreamHandler(sys.stderr), log_level, formatter, worker_filter)]
    if enable_file_logging:
        log_dir = Path(log_dir) if log_dir is not None else Path(__file__).parent / "logs"
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers += [
            _configured(_rotating(log_dir / f"{app_name}.log"), log_level, formatter, worker_filter),
            _configured(_rotating(log_dir / f"{app_name}_error.log"), logging.ERROR, formatter, worker_filter),
        ]
    for handler in handlers:
        logger.addHandler(handler)

    if enable_file_logging:
        logger.info(f"File logging enabled in {log_dir}")
    logger.debug(f"Logging configured at level {logging.getLevelName(log_level)}")
    return logger


# =============================================================================
# LOGGER FACTORY FUNCTIONS
# =============================================================================

def get_logger(name: str) -> logging.Logger:
    """
    Get a child logger under the library namespace.

    Args:
        name: Module name (typically __name__)

    Returns:
        Logger instance, e.g. "moead_ps.modules.engine"
    """
    if not name.startswith(APP_NAME):
        name = f"{APP_NAME}.{name}"
    return logging.getLogger(name)


def get_run_logger(problem_key: str, label: str, run_index: int) -> logging.Logger:
    """
    Get a logger for one optimization run.

    Args:
        problem_key: Registry key of the problem (e.g. "uf3")
        label: Variant label (e.g. "ps")
        run_index: Repetition index

    Returns:
        Logger named "moead_ps.run.<problem>.<label>.r<NN>"
    """
    return logging.getLogger(f"{APP_NAME}.run.{problem_key}.{label}.r{run_index:02d}")


def set_thread_name(name: str) -> None:
    """
    Set the name of the current thread.

    This name appears in log messages in the [worker] field.

    Args:
        name: Thread name to display in logs
    """
    threading.current_thread().name = name
