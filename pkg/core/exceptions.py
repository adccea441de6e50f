"""
Custom exceptions for moead_ps.

Exception Hierarchy:
    MoeadPsError (base)
    ├── ConfigurationError      - Invalid parameters, manifests or problem keys (CLI exit 2)
    ├── EvaluationError         - Objective evaluation refused its input
    ├── AnalysisError           - Offline analysis cannot proceed (CLI exit 3)
    │   └── MissingRunsError    - Results store lacks expected run files
    ├── UnsupportedError        - Operation not defined for this objective count / family
    └── InvariantViolation      - Internal invariant broken (a bug, not a user error)

Usage:
    Configuration errors are raised before any evaluation is spent.
    Analysis errors never trigger new evaluations; they report what is missing.
"""

from typing import Any, Dict, Iterable, Optional, Tuple


class MoeadPsError(Exception):
    """
    Base exception for all moead_ps errors.

    All custom exceptions inherit from this class, allowing callers to catch
    every library error with a single except clause.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        """
        Initialize the exception.

        Args:
            message: Human-readable error message
            details: Optional dictionary with additional context for debugging
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


# =============================================================================
# CONFIGURATION ERRORS - raised before a run starts
# =============================================================================

class ConfigurationError(MoeadPsError):
    """
    A parameter, manifest or problem key is invalid.

    Typical causes:
    - n outside [1, N] or T outside [m, N]
    - Budget smaller than the population size
    - Unknown problem key in a manifest
    - Output directory cannot be written
    """

    def __init__(self, message: str, parameter: Optional[str] = None, value: Any = None,
                 details: Optional[Dict[str, Any]] = None):
        error_details = dict(details or {})
        if parameter is not None:
            error_details["parameter"] = parameter
            error_details["value"] = value
        super().__init__(message, error_details)
        self.parameter = parameter
        self.value = value


class EvaluationError(MoeadPsError):
    """
    An objective function refused its input.

    Raised for decision vectors with non-finite components or the wrong
    length. No evaluation is counted when this is raised.
    """

    def __init__(self, problem_key: str, reason: str):
        message = f"Cannot evaluate {problem_key}: {reason}"
        super().__init__(message, {"problem": problem_key})
        self.problem_key = problem_key
        self.reason = reason


# =============================================================================
# ANALYSIS ERRORS - offline recomputation cannot proceed
# =============================================================================

class AnalysisError(MoeadPsError):
    """
    Offline analysis cannot be completed with the data at hand.

    Typical causes:
    - Too few checkpoints for a last-k archive policy
    - Empty evaluation set
    - Sample too small for a statistical test
    """


class MissingRunsError(AnalysisError):
    """
    The results store lacks run files that the manifest promises.

    The absent (problem, variant, run) triples are listed in details so the
    user can re-run just those.
    """

    def __init__(self, missing: Iterable[Tuple[str, str, int]]):
        missing = sorted(missing)
        preview = ", ".join(f"{p}/{v}/run_{r}" for p, v, r in missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        message = f"Missing {len(missing)} run(s): {preview}{more}"
        super().__init__(message, {
            "missing": [list(triple) for triple in missing],
            "resolution": "Re-run the manifest or restrict the analysis to the present variants",
        })
        self.missing = missing


# =============================================================================
# CAPABILITY AND INTERNAL ERRORS
# =============================================================================

class UnsupportedError(MoeadPsError):
    """
    Operation is not defined for the given input shape.

    Examples: hypervolume for m > 3, EAF for m != 2, analytic fronts for UF.
    """

    def __init__(self, operation: str, reason: str):
        super().__init__(f"{operation} unsupported: {reason}", {"operation": operation})
        self.operation = operation


class InvariantViolation(MoeadPsError):
    """
    An internal invariant does not hold.

    This indicates a bug or inputs that did not come from the library's own
    constructors (e.g. a weight set without its boundary vectors).
    """
