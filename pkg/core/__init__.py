"""
Core module for moead_ps.

Contains fundamental infrastructure components:
- exceptions: Custom exception hierarchy
"""

from .exceptions import (
    MoeadPsError,
    ConfigurationError,
    EvaluationError,
    AnalysisError,
    MissingRunsError,
    UnsupportedError,
    InvariantViolation,
)

__all__ = [
    "MoeadPsError",
    "ConfigurationError",
    "EvaluationError",
    "AnalysisError",
    "MissingRunsError",
    "UnsupportedError",
    "InvariantViolation",
]
