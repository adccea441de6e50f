"""
Configuration for moead_ps.

Defaults for the optimizer come from the experimental settings the library
reproduces; everything environment-driven is read once at import time.
Nothing read here is ever written into a results directory.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load .env early so environment variables are visible to the Config class
load_dotenv()

# Base directory (where this file lives)
BASE_DIR = Path(__file__).resolve().parent


class Config:
    """Default configuration for experiments and the CLI."""

    # Output and runtime settings
    OUTPUT_ROOT = os.environ.get("MOEADPS_OUTPUT_ROOT", str(BASE_DIR / "results"))
    LOG_LEVEL = os.environ.get("MOEADPS_LOG_LEVEL", "INFO")
    ENABLE_FILE_LOGGING = os.environ.get("MOEADPS_FILE_LOGGING", "0") == "1"
    LOG_DIR = os.environ.get("MOEADPS_LOG_DIR", str(BASE_DIR / "logs"))
    DEFAULT_WORKERS = int(os.environ.get("MOEADPS_WORKERS", "1"))
    DEFAULT_BASE_SEED = int(os.environ.get("MOEADPS_BASE_SEED", "1"))

    # ==========================================================================
    # Algorithm defaults
    # ==========================================================================
    # MOEA/D-DE settings shared by every variant. Population size N and the
    # partial-update count n are per-variant and live in the manifest.
    #
    # NEIGHBORHOOD_FRACTION: T = ceil(fraction * N)
    # ==========================================================================
    DE_SCALE_FACTOR = 0.25
    MUTATION_ETA = 20.0
    MUTATION_PROBABILITY = 0.01
    MAX_REPLACEMENTS = 2
    NEIGHBORHOOD_PROBABILITY = 0.9
    NEIGHBORHOOD_FRACTION = 0.2
    DEFAULT_DIMENSION = 40
    DEFAULT_BUDGET = 100000
    DEFAULT_RUNS = 10
    DEFAULT_CHECKPOINT_STRIDE = 1
    WEIGHT_SEED = 0

    # Analysis defaults
    ARCHIVE_CAPACITY = 500
    STATS_CHECKPOINTS = (5000, 15000, 100000)
    SIGNIFICANCE_ALPHA = 0.05
    EAF_MAX_BREAKS = 2000


class TestingConfig(Config):
    """Small-scale settings for fast test runs."""
    DEFAULT_BUDGET = 2000
    DEFAULT_RUNS = 2
    DEFAULT_DIMENSION = 6
    ARCHIVE_CAPACITY = 40
    STATS_CHECKPOINTS = (200, 600, 2000)
