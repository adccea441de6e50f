"""
Generational MOEA/D-DE with partial updates.

Each iteration samples a priority per sub-problem, varies the n
highest-priority non-boundary sub-problems plus the m boundary ones, and
then lets every offspring compete for up to nr incumbents of its pool.
With n >= N - m every sub-problem is varied, which is plain generational
MOEA/D-DE.

Per iteration the RNG is consumed in this order:
    1. priorities             rng.random(N)
    2. per selected i (asc.)  pool draw, donor choice, mutation mask, mutation uniforms
    3. per offspring (asc.)   rng.permutation(pool) for the replacement order
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Protocol, Sequence, Tuple

import numpy as np

from core.exceptions import ConfigurationError
from logging_config import get_logger
from models.algorithm_config import AlgorithmConfig
from models.decomposition import NeighborhoodTable, Subproblem
from models.problem import EvaluationCounter, ProblemDescriptor
from models.run_result import Checkpoint, RunResult
from modules.problems import evaluate_batch
from modules.variation import de_variation
from modules.weights import build_neighborhoods, generate_weights

logger = get_logger(__name__)

WEIGHT_FLOOR = 1e-6


# =============================================================================
# STATE
# =============================================================================

@dataclass
class EngineState:
    """
    Mutable state of one run.

    Invariants:
        - ideal <= every row of F and worst >= every row of F, componentwise
        - counter.count <= budget
    """

    weights: np.ndarray
    neighborhoods: NeighborhoodTable
    X: np.ndarray
    """(N, D) incumbent decision vectors."""
    F: np.ndarray
    """(N, m) incumbent objective vectors."""
    ideal: np.ndarray
    worst: np.ndarray
    counter: EvaluationCounter
    rng: np.random.Generator
    bounds: np.ndarray
    priorities: np.ndarray = field(default_factory=lambda: np.empty(0))
    iteration: int = 0

    @property
    def size(self) -> int:
        return int(self.X.shape[0])

    @property
    def evals_used(self) -> int:
        return self.counter.count

    def subproblem(self, i: int) -> Subproblem:
        """Read-only view of sub-problem i."""
        return Subproblem(
            index=i,
            weight=self.weights[i],
            neighbor_ids=self.neighborhoods.of(i),
            incumbent_x=self.X[i],
            incumbent_f=self.F[i],
        )


class Offspring(NamedTuple):
    """A candidate and the pool it was mated from."""

    source: int
    x: np.ndarray
    f: np.ndarray
    pool: np.ndarray


# =============================================================================
# PRIORITIES AND SELECTION
# =============================================================================

class PriorityFunction(Protocol):
    """Assigns one priority per sub-problem; higher is selected first."""

    def __call__(self, state: EngineState) -> np.ndarray: ...


class UniformPriority:
    """Independent uniform [0, 1) draws from the run RNG."""

    def __call__(self, state: EngineState) -> np.ndarray:
        return state.rng.random(state.size)


def sample_priorities(state: EngineState, priority: Optional[PriorityFunction] = None) -> np.ndarray:
    """Resample the priority vector and store it on the state."""
    state.priorities = (priority or UniformPriority())(state)
    return state.priorities


@dataclass
class SelectionStats:
    """Element comparisons made by select_subproblems."""

    comparisons: int = 0


def _nth_largest(values: np.ndarray, n: int, stats: Optional[SelectionStats]) -> float:
    """Three-way quickselect with median-of-three pivots; 1 <= n <= values.size."""
    work = values
    while True:
        pivot = sorted((work[0], work[work.size // 2], work[-1]))[1]
        greater = work > pivot
        less = work < pivot
        if stats is not None:
            stats.comparisons += 2 * work.size + 3
        above = int(np.count_nonzero(greater))
        at_or_above = work.size - int(np.count_nonzero(less))
        if n <= above:
            work = work[greater]
        elif n <= at_or_above:
            return float(pivot)
        else:
            n -= at_or_above
            work = work[less]


def select_subproblems(priorities: np.ndarray, n: int, boundary_ids: Sequence[int],
                       stats: Optional[SelectionStats] = None) -> np.ndarray:
    """
    The n highest-priority non-boundary indices plus every boundary index.

    Ties go to the lower index. Expected linear time: a quickselect finds
    the n-th largest priority and one more pass splits off the ties.

    Args:
        priorities: One value per sub-problem
        n: Number of non-boundary sub-problems to pick
        boundary_ids: Always selected
        stats: Accumulates the element comparisons made, when given

    Returns:
        Sorted index array of size min(n, N - m) + m
    """
    priorities = np.asarray(priorities, dtype=float)
    free = np.ones(priorities.shape[0], dtype=bool)
    free[list(boundary_ids)] = False
    candidates = np.flatnonzero(free)

    if n >= candidates.size:
        chosen = candidates
    elif n <= 0:
        chosen = candidates[:0]
    else:
        values = priorities[candidates]
        threshold = _nth_largest(values, n, stats)
        above = candidates[values > threshold]
        tied = candidates[values == threshold]
        if stats is not None:
            stats.comparisons += 2 * values.size
        chosen = np.concatenate([above, tied[: n - above.size]])

    return np.sort(np.concatenate([chosen, np.asarray(boundary_ids, dtype=chosen.dtype)]))


def make_mating_pool(state: EngineState, i: int, delta_p: float) -> np.ndarray:
    """Neighborhood of i with probability delta_p, otherwise the whole population."""
    if state.rng.random() < delta_p:
        return state.subproblem(i).neighbor_ids
    return np.arange(state.size)


# =============================================================================
# SCALING AND SCALARIZATION
# =============================================================================

def scaling_frame(*objective_sets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Componentwise min and max over the given objective matrices."""
    stacked = np.vstack([np.atleast_2d(s) for s in objective_sets])
    return stacked.min(axis=0), stacked.max(axis=0)


def scale_objectives(objectives: np.ndarray, lo: Optional[np.ndarray] = None,
                     hi: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Linear scaling to [0, 1] per objective.

    The frame defaults to the min and max of `objectives` itself. A
    degenerate component (hi == lo) maps to 0.
    """
    objectives = np.asarray(objectives, dtype=float)
    if lo is None or hi is None:
        lo, hi = scaling_frame(objectives)
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (objectives - lo) / safe, 0.0)


def scalarize(f_scaled: np.ndarray, w: np.ndarray, z: Optional[np.ndarray] = None) -> np.ndarray | float:
    """
    Weighted Tchebycheff: max_j max(w_j, 1e-6) * (f_j - z_j).

    Works row-wise on matrices; z defaults to the origin of the scaled space.
    """
    f_scaled = np.asarray(f_scaled, dtype=float)
    if z is None:
        z = np.zeros(f_scaled.shape[-1])
    values = np.max(np.maximum(w, WEIGHT_FLOOR) * (f_scaled - z), axis=-1)
    return float(values) if np.ndim(values) == 0 else values


# =============================================================================
# REPLACEMENT
# =============================================================================

def replacement(state: EngineState, offspring: Sequence[Offspring], nr: int) -> int:
    """
    Let every offspring replace up to nr incumbents of its pool.

    Offspring are processed in ascending source index, each over a fresh
    random ordering of its pool; the scaling frame covers the incumbents and
    all offspring of the iteration. The ideal and worst points absorb every
    offspring, replaced or not.

    Returns:
        Total number of replacements
    """
    if not offspring:
        return 0

    offspring_f = np.vstack([o.f for o in offspring])
    lo, hi = scaling_frame(state.F, offspring_f)
    replaced = 0

    for child in sorted(offspring, key=lambda o: o.source):
        order = state.rng.permutation(child.pool)
        w = state.weights[order]
        g_child = scalarize(scale_objectives(child.f[None, :], lo, hi), w)
        g_incumbent = scalarize(scale_objectives(state.F[order], lo, hi), w)
        winners = order[np.flatnonzero(g_child < g_incumbent)[:nr]]
        if winners.size:
            state.X[winners] = child.x
            state.F[winners] = child.f
            replaced += int(winners.size)

    state.ideal = np.minimum(state.ideal, offspring_f.min(axis=0))
    state.worst = np.maximum(state.worst, offspring_f.max(axis=0))
    return replaced


# =============================================================================
# RUN
# =============================================================================

def initialize(config: AlgorithmConfig, problem: ProblemDescriptor, seed: int) -> EngineState:
    """
    Build the decomposition and a uniformly random, evaluated population.

    Raises:
        ConfigurationError: If the budget cannot cover the initial population
    """
    if config.m != problem.m:
        raise ConfigurationError(
            f"Config has {config.m} objectives but {problem.key} has {problem.m}",
            parameter="m", value=config.m,
        )
    if config.budget < config.N:
        raise ConfigurationError(
            f"Budget {config.budget} cannot evaluate an initial population of {config.N}",
            parameter="budget", value=config.budget,
        )

    weights = generate_weights(config.N, config.m, config.weight_seed)
    neighborhoods = build_neighborhoods(weights, config.T)
    rng = np.random.default_rng(seed)
    bounds = problem.bounds
    counter = EvaluationCounter(config.budget)

    X = bounds[:, 0] + rng.random((config.N, problem.D)) * (bounds[:, 1] - bounds[:, 0])
    F = evaluate_batch(problem, X, counter)

    return EngineState(
        weights=weights, neighborhoods=neighborhoods, X=X, F=F,
        ideal=F.min(axis=0), worst=F.max(axis=0),
        counter=counter, rng=rng, bounds=bounds,
    )


def step(state: EngineState, config: AlgorithmConfig, problem: ProblemDescriptor,
         priority: Optional[PriorityFunction] = None) -> int:
    """
    One generational iteration; returns the number of replacements.

    Every candidate is generated from the population as it stood at the
    start of the iteration.
    """
    priorities = sample_priorities(state, priority)
    selected = select_subproblems(priorities, config.selected_count, state.neighborhoods.boundary)

    snapshot = state.X.copy()
    pools, children = [], []
    for i in selected:
        pool = make_mating_pool(state, int(i), config.delta_p)
        pools.append(pool)
        children.append(de_variation(snapshot, int(i), pool, config, state.bounds, state.rng))

    Y = np.vstack(children)
    FY = evaluate_batch(problem, Y, state.counter)
    offspring = [Offspring(int(i), Y[k], FY[k], pools[k]) for k, i in enumerate(selected)]

    state.iteration += 1
    return replacement(state, offspring, config.nr)


def run(config: AlgorithmConfig, problem: ProblemDescriptor, seed: int,
        priority: Optional[PriorityFunction] = None,
        run_logger: Optional[logging.Logger] = None) -> RunResult:
    """
    Execute one seeded optimization run.

    The run stops before any iteration that would exceed the budget, so
    evals_used = N + k * working_size after k iterations.

    Args:
        config: Algorithm parameters
        problem: Problem to optimize
        seed: Seed of the run RNG
        priority: Priority function (uniform random when omitted)
        run_logger: Logger for progress messages

    Returns:
        RunResult with checkpoints at iteration 0, every checkpoint_stride
        iterations and at termination
    """
    log = run_logger or logger
    state = initialize(config, problem, seed)
    result = RunResult(problem_key=problem.key, seed=seed, config=config)
    result.checkpoints.append(Checkpoint(0, state.evals_used, state.F.copy()))

    per_iteration = config.working_size
    log.debug(f"Initialized N={config.N} working_size={per_iteration} budget={config.budget}")

    while state.evals_used + per_iteration <= config.budget:
        step(state, config, problem, priority)
        if state.iteration % config.checkpoint_stride == 0:
            result.checkpoints.append(Checkpoint(state.iteration, state.evals_used, state.F.copy()))

    if result.checkpoints[-1].iteration != state.iteration:
        result.checkpoints.append(Checkpoint(state.iteration, state.evals_used, state.F.copy()))

    result.final_x = state.X.copy()
    result.final_f = state.F.copy()
    log.info(f"Run finished after {state.iteration} iterations, {state.evals_used} evaluations")
    return result
