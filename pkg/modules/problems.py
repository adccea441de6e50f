"""
Benchmark problems: DTLZ1-4, inverted DTLZ1-4 and UF1-10.

All problems are minimization without internal scaling. Objective
functions are vectorized over the rows of a decision matrix and are pure;
evaluations are counted by the caller's EvaluationCounter.

Registry keys: dtlz1..dtlz4, dtlz1_inv..dtlz4_inv, uf1..uf10.
"""

from __future__ import annotations

import re
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config import Config
from core.exceptions import ConfigurationError, EvaluationError, UnsupportedError
from models.problem import EvaluationCounter, ProblemDescriptor, ProblemFamily

ObjectiveFunction = Callable[[np.ndarray, int], np.ndarray]

_KEY_PATTERN = re.compile(r"^(?:(dtlz)(\d+)(_inv)?|(uf)(\d+))$")

UF_THREE_OBJECTIVE = (8, 9, 10)


# =============================================================================
# DTLZ
# =============================================================================

def _g_multimodal(xm: np.ndarray) -> np.ndarray:
    k = xm.shape[1]
    return 100.0 * (k + np.sum((xm - 0.5) ** 2 - np.cos(20.0 * np.pi * (xm - 0.5)), axis=1))


def _g_sphere(xm: np.ndarray) -> np.ndarray:
    return np.sum((xm - 0.5) ** 2, axis=1)


def _linear_shape(xp: np.ndarray, m: int) -> np.ndarray:
    """f_i = 0.5 * prod(x_1..x_{m-1-i}) * (1 - x_{m-i}), objective 1 first."""
    rows = xp.shape[0]
    f = np.ones((rows, m))
    for i in range(m):
        f[:, i] = np.prod(xp[:, : m - 1 - i], axis=1)
        if i > 0:
            f[:, i] *= 1.0 - xp[:, m - 1 - i]
    return 0.5 * f


def _spherical_shape(xp: np.ndarray, m: int) -> np.ndarray:
    rows = xp.shape[0]
    f = np.ones((rows, m))
    for i in range(m):
        f[:, i] = np.prod(np.cos(0.5 * np.pi * xp[:, : m - 1 - i]), axis=1)
        if i > 0:
            f[:, i] *= np.sin(0.5 * np.pi * xp[:, m - 1 - i])
    return f


def _dtlz(problem_id: int, X: np.ndarray, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """Objectives and g of DTLZ1-4."""
    xp, xm = X[:, : m - 1], X[:, m - 1:]
    if problem_id == 1:
        g = _g_multimodal(xm)
        return _linear_shape(xp, m) * (1.0 + g)[:, None], g
    if problem_id == 2:
        g = _g_sphere(xm)
    elif problem_id == 3:
        g = _g_multimodal(xm)
    else:
        g = _g_sphere(xm)
        xp = xp ** 100.0
    return _spherical_shape(xp, m) * (1.0 + g)[:, None], g


def _dtlz_objectives(problem_id: int) -> ObjectiveFunction:
    def objectives(X: np.ndarray, m: int) -> np.ndarray:
        return _dtlz(problem_id, X, m)[0]
    return objectives


def _inverted_dtlz_objectives(problem_id: int) -> ObjectiveFunction:
    # f_new = c(1 + g) - f, c = 0.5 for the linear front and 1 otherwise
    scale = 0.5 if problem_id == 1 else 1.0

    def objectives(X: np.ndarray, m: int) -> np.ndarray:
        f, g = _dtlz(problem_id, X, m)
        return scale * (1.0 + g)[:, None] - f
    return objectives


# =============================================================================
# UF (CEC 2009 unconstrained)
# =============================================================================

def _index_sets_2(D: int) -> Tuple[np.ndarray, np.ndarray]:
    """0-based columns of J1 (odd j >= 3) and J2 (even j >= 2), j 1-based."""
    j = np.arange(2, D + 1)
    return j[j % 2 == 1] - 1, j[j % 2 == 0] - 1


def _index_sets_3(D: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """0-based columns of J1 (j-1 % 3 == 0), J2 (j-2 % 3 == 0), J3 (j % 3 == 0), j >= 3."""
    j = np.arange(3, D + 1)
    return j[(j - 1) % 3 == 0] - 1, j[(j - 2) % 3 == 0] - 1, j[j % 3 == 0] - 1


def _sine_residual(X: np.ndarray) -> np.ndarray:
    """y_j = x_j - sin(6 pi x_1 + j pi / D)."""
    D = X.shape[1]
    j = np.arange(1, D + 1)
    return X - np.sin(6.0 * np.pi * X[:, [0]] + j * np.pi / D)


def _product_term(Y: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """2/|J| * (4 sum y^2 - 2 prod cos(20 y pi / sqrt(j)) + 2)."""
    y = Y[:, cols]
    j = cols + 1
    total = 4.0 * np.sum(y ** 2, axis=1) - 2.0 * np.prod(np.cos(20.0 * y * np.pi / np.sqrt(j)), axis=1) + 2.0
    return 2.0 * total / len(cols)


def _mean_sq(Y: np.ndarray, cols: np.ndarray) -> np.ndarray:
    return 2.0 * np.mean(Y[:, cols] ** 2, axis=1)


def _uf1(X: np.ndarray, m: int) -> np.ndarray:
    J1, J2 = _index_sets_2(X.shape[1])
    Y = _sine_residual(X)
    x1 = X[:, 0]
    return np.column_stack([x1 + _mean_sq(Y, J1), 1.0 - np.sqrt(x1) + _mean_sq(Y, J2)])


def _uf2(X: np.ndarray, m: int) -> np.ndarray:
    D = X.shape[1]
    J1, J2 = _index_sets_2(D)
    x1 = X[:, [0]]
    j = np.arange(1, D + 1)
    amplitude = 0.3 * x1 ** 2 * np.cos(24.0 * np.pi * x1 + 4.0 * j * np.pi / D) + 0.6 * x1
    angle = 6.0 * np.pi * x1 + j * np.pi / D
    Y = np.where(j % 2 == 1, X - amplitude * np.cos(angle), X - amplitude * np.sin(angle))
    return np.column_stack([x1[:, 0] + _mean_sq(Y, J1), 1.0 - np.sqrt(x1[:, 0]) + _mean_sq(Y, J2)])


def _uf3(X: np.ndarray, m: int) -> np.ndarray:
    D = X.shape[1]
    J1, J2 = _index_sets_2(D)
    j = np.arange(1, D + 1)
    exponent = 0.5 * (1.0 + 3.0 * (j - 2) / (D - 2))
    Y = X - X[:, [0]] ** exponent
    x1 = X[:, 0]
    return np.column_stack([x1 + _product_term(Y, J1), 1.0 - np.sqrt(x1) + _product_term(Y, J2)])


def _uf4(X: np.ndarray, m: int) -> np.ndarray:
    J1, J2 = _index_sets_2(X.shape[1])
    Y = _sine_residual(X)
    H = np.abs(Y) / (1.0 + np.exp(2.0 * np.abs(Y)))
    x1 = X[:, 0]
    return np.column_stack([
        x1 + 2.0 * np.mean(H[:, J1], axis=1),
        1.0 - x1 ** 2 + 2.0 * np.mean(H[:, J2], axis=1),
    ])


def _uf5(X: np.ndarray, m: int) -> np.ndarray:
    n_segments, eps = 10, 0.1
    J1, J2 = _index_sets_2(X.shape[1])
    Y = _sine_residual(X)
    H = 2.0 * Y ** 2 - np.cos(4.0 * np.pi * Y) + 1.0
    x1 = X[:, 0]
    ripple = (1.0 / (2.0 * n_segments) + eps) * np.abs(np.sin(2.0 * n_segments * np.pi * x1))
    return np.column_stack([
        x1 + ripple + 2.0 * np.mean(H[:, J1], axis=1),
        1.0 - x1 + ripple + 2.0 * np.mean(H[:, J2], axis=1),
    ])


def _uf6(X: np.ndarray, m: int) -> np.ndarray:
    n_segments, eps = 2, 0.1
    J1, J2 = _index_sets_2(X.shape[1])
    Y = _sine_residual(X)
    x1 = X[:, 0]
    ripple = np.maximum(0.0, 2.0 * (1.0 / (2.0 * n_segments) + eps) * np.sin(2.0 * n_segments * np.pi * x1))
    return np.column_stack([
        x1 + ripple + _product_term(Y, J1),
        1.0 - x1 + ripple + _product_term(Y, J2),
    ])


def _uf7(X: np.ndarray, m: int) -> np.ndarray:
    J1, J2 = _index_sets_2(X.shape[1])
    Y = _sine_residual(X)
    root = X[:, 0] ** 0.2
    return np.column_stack([root + _mean_sq(Y, J1), 1.0 - root + _mean_sq(Y, J2)])


def _two_angle_residual(X: np.ndarray) -> np.ndarray:
    """y_j = x_j - 2 x_2 sin(2 pi x_1 + j pi / D)."""
    D = X.shape[1]
    j = np.arange(1, D + 1)
    return X - 2.0 * X[:, [1]] * np.sin(2.0 * np.pi * X[:, [0]] + j * np.pi / D)


def _uf8(X: np.ndarray, m: int) -> np.ndarray:
    J1, J2, J3 = _index_sets_3(X.shape[1])
    Y = _two_angle_residual(X)
    a, b = 0.5 * np.pi * X[:, 0], 0.5 * np.pi * X[:, 1]
    return np.column_stack([
        np.cos(a) * np.cos(b) + _mean_sq(Y, J1),
        np.cos(a) * np.sin(b) + _mean_sq(Y, J2),
        np.sin(a) + _mean_sq(Y, J3),
    ])


def _uf9(X: np.ndarray, m: int) -> np.ndarray:
    eps = 0.1
    J1, J2, J3 = _index_sets_3(X.shape[1])
    Y = _two_angle_residual(X)
    x1, x2 = X[:, 0], X[:, 1]
    gap = np.maximum(0.0, (1.0 + eps) * (1.0 - 4.0 * (2.0 * x1 - 1.0) ** 2))
    return np.column_stack([
        0.5 * (gap + 2.0 * x1) * x2 + _mean_sq(Y, J1),
        0.5 * (gap - 2.0 * x1 + 2.0) * x2 + _mean_sq(Y, J2),
        1.0 - x2 + _mean_sq(Y, J3),
    ])


def _uf10(X: np.ndarray, m: int) -> np.ndarray:
    J1, J2, J3 = _index_sets_3(X.shape[1])
    Y = _two_angle_residual(X)
    H = 4.0 * Y ** 2 - np.cos(8.0 * np.pi * Y) + 1.0
    a, b = 0.5 * np.pi * X[:, 0], 0.5 * np.pi * X[:, 1]
    return np.column_stack([
        np.cos(a) * np.cos(b) + 2.0 * np.mean(H[:, J1], axis=1),
        np.cos(a) * np.sin(b) + 2.0 * np.mean(H[:, J2], axis=1),
        np.sin(a) + 2.0 * np.mean(H[:, J3], axis=1),
    ])


# =============================================================================
# REGISTRY
# =============================================================================

_OBJECTIVES: Dict[Tuple[ProblemFamily, int], ObjectiveFunction] = {
    **{(ProblemFamily.DTLZ, i): _dtlz_objectives(i) for i in range(1, 5)},
    **{(ProblemFamily.DTLZ_INVERTED, i): _inverted_dtlz_objectives(i) for i in range(1, 5)},
    (ProblemFamily.UF, 1): _uf1,
    (ProblemFamily.UF, 2): _uf2,
    (ProblemFamily.UF, 3): _uf3,
    (ProblemFamily.UF, 4): _uf4,
    (ProblemFamily.UF, 5): _uf5,
    (ProblemFamily.UF, 6): _uf6,
    (ProblemFamily.UF, 7): _uf7,
    (ProblemFamily.UF, 8): _uf8,
    (ProblemFamily.UF, 9): _uf9,
    (ProblemFamily.UF, 10): _uf10,
}


def _uf_bounds(problem_id: int, D: int) -> Tuple[List[float], List[float]]:
    if problem_id == 3:
        return [0.0] * D, [1.0] * D
    if problem_id == 4:
        return [0.0] + [-2.0] * (D - 1), [1.0] + [2.0] * (D - 1)
    if problem_id in UF_THREE_OBJECTIVE:
        return [0.0, 0.0] + [-2.0] * (D - 2), [1.0, 1.0] + [2.0] * (D - 2)
    return [0.0] + [-1.0] * (D - 1), [1.0] * D


def make_problem(family: ProblemFamily | str, problem_id: int, m: int,
                 D: int = Config.DEFAULT_DIMENSION) -> ProblemDescriptor:
    """
    Build a problem descriptor.

    Valid combinations: DTLZ and inverted DTLZ 1..4 with m=2; UF1..7 with
    m=2 and UF8..10 with m=3.

    Raises:
        ConfigurationError: For any other combination or a too-small D
    """
    try:
        family = ProblemFamily(family) if isinstance(family, str) else family
    except ValueError as e:
        raise ConfigurationError(f"Unknown problem family {family}", parameter="family", value=family) from e

    details = {"family": family.value, "id": problem_id, "m": m, "D": D}
    if family is ProblemFamily.UF:
        if not 1 <= problem_id <= 10:
            raise ConfigurationError(f"UF{problem_id} does not exist", details=details)
        expected_m = 3 if problem_id in UF_THREE_OBJECTIVE else 2
        min_D = 5 if expected_m == 3 else 3
    else:
        if not 1 <= problem_id <= 4:
            raise ConfigurationError(f"DTLZ{problem_id} is not in the suite", details=details)
        expected_m, min_D = 2, 2
    if m != expected_m:
        raise ConfigurationError(
            f"{family.value}{problem_id} has {expected_m} objectives, not {m}", details=details)
    if D < min_D:
        raise ConfigurationError(f"Dimension {D} too small (minimum {min_D})", parameter="D", value=D)

    if family is ProblemFamily.UF:
        lower, upper = _uf_bounds(problem_id, D)
    else:
        lower, upper = [0.0] * D, [1.0] * D
    return ProblemDescriptor(family=family, id=problem_id, m=m, D=D,
                             lower=tuple(lower), upper=tuple(upper))


def problem_from_key(key: str, D: int = Config.DEFAULT_DIMENSION) -> ProblemDescriptor:
    """
    Resolve a registry key such as 'uf3' or 'dtlz1_inv'.

    Raises:
        ConfigurationError: If the key is not in the registry
    """
    match = _KEY_PATTERN.match(key.strip().lower())
    if not match:
        raise ConfigurationError(f"Unknown problem key '{key}'", parameter="problem", value=key,
                                 details={"known": list_problem_keys()})
    if match.group(1):
        family = ProblemFamily.DTLZ_INVERTED if match.group(3) else ProblemFamily.DTLZ
        problem_id, m = int(match.group(2)), 2
    else:
        family = ProblemFamily.UF
        problem_id = int(match.group(5))
        m = 3 if problem_id in UF_THREE_OBJECTIVE else 2
    return make_problem(family, problem_id, m, D)


def list_problem_keys() -> List[str]:
    """The 18 registry keys in suite order."""
    return ([f"dtlz{i}" for i in range(1, 5)]
            + [f"dtlz{i}_inv" for i in range(1, 5)]
            + [f"uf{i}" for i in range(1, 11)])


def evaluate_batch(problem: ProblemDescriptor, X: np.ndarray,
                   counter: Optional[EvaluationCounter] = None) -> np.ndarray:
    """
    Evaluate the rows of a decision matrix.

    Args:
        problem: Problem descriptor
        X: (rows, D) decision matrix
        counter: Incremented by exactly the number of rows

    Returns:
        (rows, m) raw objective matrix

    Raises:
        EvaluationError: If X has the wrong width or a non-finite entry
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != problem.D:
        raise EvaluationError(problem.key, f"expected {problem.D} variables, got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise EvaluationError(problem.key, "decision vector has non-finite components")

    F = _OBJECTIVES[(problem.family, problem.id)](X, problem.m)
    if counter is not None:
        counter.increment(X.shape[0])
    return F


def evaluate(problem: ProblemDescriptor, x: np.ndarray,
             counter: Optional[EvaluationCounter] = None) -> np.ndarray:
    """Evaluate one decision vector; counts exactly one evaluation."""
    return evaluate_batch(problem, np.asarray(x, dtype=float)[None, :], counter)[0]


def true_front_sample(problem: ProblemDescriptor, k: int) -> np.ndarray:
    """
    k points of the analytic Pareto front of a 2-objective (inverted) DTLZ problem.

    Raises:
        UnsupportedError: For UF problems or m != 2
        ConfigurationError: If k < 2
    """
    if problem.family is ProblemFamily.UF:
        raise UnsupportedError("true_front_sample", "UF fronts are not analytic in this library")
    if problem.m != 2:
        raise UnsupportedError("true_front_sample", "only two-objective fronts are sampled")
    if k < 2:
        raise ConfigurationError("Front sample needs at least 2 points", parameter="k", value=k)

    t = np.linspace(0.0, 1.0, k)
    if problem.id == 1:
        front = np.column_stack([0.5 * t, 0.5 * (1.0 - t)])
    else:
        theta = 0.5 * np.pi * t
        front = np.column_stack([np.sin(theta), np.cos(theta)])
        front[0] = (0.0, 1.0)
        front[-1] = (1.0, 0.0)

    if problem.family is ProblemFamily.DTLZ_INVERTED:
        front = (0.5 if problem.id == 1 else 1.0) - front
    return front
