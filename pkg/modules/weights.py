"""
Weight vectors and neighborhoods of the decomposition.

Weights are scrambled Sobol points in the (m-1)-cube mapped onto the unit
simplex with the sorted-uniform transform, after which the m generated
points nearest to the canonical basis vectors are replaced by those vectors.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist
from scipy.stats import qmc

from core.exceptions import ConfigurationError, InvariantViolation
from models.decomposition import NeighborhoodTable


def _sobol_points(count: int, dim: int, seed: int) -> np.ndarray:
    """First `count` points of a scrambled Sobol sequence (power-of-two draw, sliced)."""
    sampler = qmc.Sobol(d=dim, scramble=True, seed=np.random.default_rng(seed))
    power = max(0, math.ceil(math.log2(count)))
    return sampler.random_base2(m=power)[:count]


def _to_simplex(cube: np.ndarray) -> np.ndarray:
    """Sorted-uniform map from the (m-1)-cube to the m-simplex."""
    n = cube.shape[0]
    edges = np.hstack([np.zeros((n, 1)), np.sort(cube, axis=1), np.ones((n, 1))])
    return np.diff(edges, axis=1)


def generate_weights(N: int, m: int, seed: int = 0) -> np.ndarray:
    """
    Generate N simplex weight vectors including the m basis vectors.

    Args:
        N: Number of vectors (population size)
        m: Number of objectives
        seed: Scrambling seed; the output is a pure function of (N, m, seed)

    Returns:
        (N, m) array whose rows sum to 1

    Raises:
        ConfigurationError: If N < m or m < 2
    """
    if m < 2:
        raise ConfigurationError("At least two objectives are required", parameter="m", value=m)
    if N < m:
        raise ConfigurationError(
            f"{N} weights cannot host boundary vectors for {m} objectives",
            parameter="N", value=N,
        )

    weights = _to_simplex(_sobol_points(N, m - 1, seed))

    # Replace the nearest free point for each axis, axis order
    taken = np.zeros(N, dtype=bool)
    for axis, basis in enumerate(np.eye(m)):
        distances = np.linalg.norm(weights - basis, axis=1)
        distances[taken] = np.inf
        nearest = int(np.argmin(distances))
        weights[nearest] = basis
        taken[nearest] = True

    return weights


def boundary_indices(weights: np.ndarray) -> tuple[int, ...]:
    """
    Locate the canonical basis vectors, objective 1 first.

    Raises:
        InvariantViolation: If a basis vector is missing
    """
    weights = np.asarray(weights, dtype=float)
    m = weights.shape[1]
    found = []
    for axis, basis in enumerate(np.eye(m)):
        hits = np.flatnonzero(np.all(weights == basis, axis=1))
        if hits.size == 0:
            raise InvariantViolation(
                f"Weight set has no boundary vector for objective {axis + 1}",
                {"m": m, "N": weights.shape[0]},
            )
        found.append(int(hits[0]))
    return tuple(found)


def build_neighborhoods(weights: np.ndarray, T: int) -> NeighborhoodTable:
    """
    T nearest weight vectors of every weight vector.

    Sorting is stable on Euclidean distance, so ties go to the lower index;
    each vector is placed first in its own list.

    Raises:
        ConfigurationError: If T is outside [1, N]
    """
    weights = np.asarray(weights, dtype=float)
    N = weights.shape[0]
    if not 1 <= T <= N:
        raise ConfigurationError(f"Neighborhood size must lie in [1, {N}]", parameter="T", value=T)

    distances = cdist(weights, weights)
    np.fill_diagonal(distances, -1.0)
    order = np.argsort(distances, axis=1, kind="stable")[:, :T]

    return NeighborhoodTable(neighbors=order.astype(np.int64), boundary=boundary_indices(weights))


def write_weights_csv(weights: np.ndarray, path: Path | str) -> Path:
    """Write one row per weight vector, columns w1..wm."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    weights = np.asarray(weights, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([f"w{j + 1}" for j in range(weights.shape[1])])
        writer.writerows(weights.tolist())
    return path

