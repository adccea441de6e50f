"""
Variation operators: DE recombination, bounded polynomial mutation and
truncation repair.

Every random draw comes from the run's numpy Generator, in a fixed order,
so a run is reproducible from its seed.
"""

from __future__ import annotations

import numpy as np

from models.algorithm_config import AlgorithmConfig


def repair_truncate(x: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """Clamp every component to its [low, high] interval."""
    return np.clip(x, bounds[:, 0], bounds[:, 1])


def polynomial_mutation(x: np.ndarray, eta_m: float, p_m: float, bounds: np.ndarray,
                        rng: np.random.Generator) -> np.ndarray:
    """
    Bounded polynomial mutation.

    Draws a mutation mask and a uniform vector of length D on every call,
    whatever p_m is.

    Args:
        x: Decision vector
        eta_m: Distribution index
        p_m: Per-variable mutation probability
        bounds: (D, 2) array of [low, high]
        rng: Run random generator

    Returns:
        Mutated copy of x, within bounds
    """
    x = np.asarray(x, dtype=float)
    low, high = bounds[:, 0], bounds[:, 1]
    mask = rng.random(x.shape[0]) < p_m
    u = rng.random(x.shape[0])

    width = high - low
    mask &= width > 0
    if not mask.any():
        return repair_truncate(x.copy(), bounds)

    span = np.where(width > 0, width, 1.0)
    exponent = eta_m + 1.0
    below = np.clip((x - low) / span, 0.0, 1.0)
    above = np.clip((high - x) / span, 0.0, 1.0)

    lower_half = u < 0.5
    with np.errstate(invalid="ignore"):
        b_low = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - below) ** exponent
        b_high = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - above) ** exponent
        delta = np.where(lower_half,
                         b_low ** (1.0 / exponent) - 1.0,
                         1.0 - b_high ** (1.0 / exponent))

    y = np.where(mask, x + delta * width, x)
    return repair_truncate(y, bounds)


def _donors(pool: np.ndarray, i: int, count: int, population_size: int,
            rng: np.random.Generator) -> np.ndarray:
    """Distinct pool members other than i; the whole population backs a small pool."""
    if len(pool) < 3:
        pool = np.arange(population_size)
    candidates = pool[pool != i]
    if len(candidates) < count:
        candidates = pool
    return rng.choice(candidates, size=count, replace=len(candidates) < count)


def de_variation(X: np.ndarray, i: int, pool: np.ndarray, config: AlgorithmConfig,
                 bounds: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Produce one candidate for sub-problem i.

    current_to_rand: y = x_i + F (x_r1 - x_r2)
    rand:            y = x_r1 + F (x_r2 - x_r3)

    The DE vector then goes through polynomial mutation and truncation.

    Args:
        X: (N, D) population snapshot taken at the start of the iteration
        i: Sub-problem index
        pool: Mating pool indices
        config: Algorithm parameters (F, eta_m, p_m, de_variant)
        bounds: (D, 2) variable bounds
        rng: Run random generator

    Returns:
        Candidate decision vector within bounds
    """
    pool = np.asarray(pool)
    if config.de_variant == "rand":
        r1, r2, r3 = _donors(pool, i, 3, X.shape[0], rng)
        y = X[r1] + config.F * (X[r2] - X[r3])
    else:
        r1, r2 = _donors(pool, i, 2, X.shape[0], rng)
        y = X[i] + config.F * (X[r1] - X[r2])

    return polynomial_mutation(y, config.eta_m, config.p_m, bounds, rng)
