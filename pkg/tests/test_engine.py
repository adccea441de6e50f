"""
Unit tests for the MOEA/D-DE engine: selection, scaling, replacement and
budget accounting.
"""

import numpy as np
import pytest

from core.exceptions import ConfigurationError
from models.algorithm_config import AlgorithmConfig
from modules.engine import (
    Offspring,
    SelectionStats,
    initialize,
    make_mating_pool,
    replacement,
    run,
    sample_priorities,
    scale_objectives,
    scalarize,
    scaling_frame,
    select_subproblems,
    step,
)
from modules.problems import evaluate_batch, problem_from_key
from modules.weights import build_neighborhoods, generate_weights


@pytest.fixture
def problem():
    return problem_from_key("dtlz2", D=6)


@pytest.fixture
def config():
    return AlgorithmConfig(N=10, n=3, m=2, budget=100, checkpoint_stride=4)


class LowIndexFirst:
    """Priority that always prefers the lowest sub-problem indices."""

    def __call__(self, state):
        return -np.arange(state.size, dtype=float)


class TestSelectSubproblems:
    """Tests for priority-based selection."""

    def test_highest_priority_plus_boundary(self):
        assert select_subproblems(np.array([0.9, 0.1, 0.5, 0.2]), 1, (3,)).tolist() == [0, 3]

    def test_boundary_never_counted_against_n(self):
        chosen = select_subproblems(np.array([0.1, 0.9, 0.8, 0.7, 0.2]), 2, (1, 4))
        assert chosen.tolist() == [1, 2, 3, 4]

    def test_ties_go_to_lower_index(self):
        chosen = select_subproblems(np.full(6, 0.5), 2, (0, 5))
        assert chosen.tolist() == [0, 1, 2, 5]

    def test_large_n_selects_everything(self):
        chosen = select_subproblems(np.random.default_rng(0).random(8), 50, (0, 7))
        assert chosen.tolist() == list(range(8))

    def test_matches_full_sort(self, rng):
        priorities = rng.random(200)
        boundary = (3, 150)
        chosen = set(select_subproblems(priorities, 20, boundary).tolist())
        free = [i for i in np.argsort(-priorities, kind="stable") if i not in boundary][:20]
        assert chosen == set(free) | set(boundary)

    def test_working_set_size_over_resamples(self, rng):
        weights = generate_weights(500, 2)
        boundary = build_neighborhoods(weights, 100).boundary
        sizes = {select_subproblems(rng.random(500), 50, boundary).size for _ in range(1000)}
        assert sizes == {52}

    @pytest.mark.parametrize("N", [500, 5000])
    def test_comparisons_grow_linearly(self, rng, N):
        for _ in range(200):
            stats = SelectionStats()
            select_subproblems(rng.random(N), N // 10, (0, N - 1), stats)
            assert 0 < stats.comparisons <= 20 * N

    def test_comparisons_on_sorted_and_constant_priorities(self):
        for priorities in (np.arange(1000.0), np.arange(1000.0)[::-1], np.full(1000, 0.5)):
            stats = SelectionStats()
            select_subproblems(priorities, 100, (0, 999), stats)
            assert stats.comparisons <= 20 * 1000

    def test_no_stats_by_default(self):
        assert select_subproblems(np.array([0.3, 0.2, 0.9]), 1, ()).tolist() == [2]


class TestScaling:
    """Tests for objective scaling and Tchebycheff scalarization."""

    def test_scale_to_unit_box(self):
        objectives = np.array([[1.0, 10.0], [3.0, 20.0], [2.0, 15.0]])
        assert np.allclose(scale_objectives(objectives), [[0, 0], [1, 1], [0.5, 0.5]])

    def test_degenerate_component_maps_to_zero(self):
        scaled = scale_objectives(np.array([[1.0, 4.0], [3.0, 4.0]]))
        assert scaled[:, 1].tolist() == [0.0, 0.0]

    def test_explicit_frame(self):
        lo, hi = scaling_frame(np.array([[0.0, 0.0]]), np.array([[2.0, 4.0]]))
        assert scale_objectives(np.array([1.0, 1.0]), lo, hi).tolist() == [0.5, 0.25]

    def test_scalarize_values(self):
        assert scalarize(np.array([0.4, 0.6]), np.array([0.5, 0.5])) == pytest.approx(0.3)
        assert scalarize(np.array([0.2, 0.0]), np.array([1.0, 0.0])) == pytest.approx(0.2)

    def test_weight_floor_applies_to_zero_weights(self):
        assert scalarize(np.array([0.0, 1.0]), np.array([1.0, 0.0])) == pytest.approx(1e-6)

    def test_row_wise(self):
        values = scalarize(np.array([[0.4, 0.6], [0.1, 0.1]]), np.array([[0.5, 0.5], [1.0, 0.0]]))
        assert np.allclose(values, [0.3, 0.1])


class TestMatingPool:
    """Tests for mating pool choice."""

    def test_always_neighborhood(self, config, problem):
        state = initialize(config, problem, seed=1)
        for i in range(config.N):
            assert make_mating_pool(state, i, 1.0).tolist() == state.neighborhoods.of(i).tolist()

    def test_always_population(self, config, problem):
        state = initialize(config, problem, seed=1)
        assert make_mating_pool(state, 4, 0.0).tolist() == list(range(config.N))

    def test_neighborhood_frequency(self, config, problem):
        state = initialize(config, problem, seed=3)
        trials = 10_000
        hits = sum(make_mating_pool(state, 4, 0.9).size == config.T for _ in range(trials))
        assert hits / trials == pytest.approx(0.9, abs=0.02)


class TestReplacement:
    """Tests for neighborhood replacement."""

    def _state(self, config, problem):
        state = initialize(config, problem, seed=2)
        state.F[:] = 1.0
        state.ideal = state.F.min(axis=0)
        state.worst = state.F.max(axis=0)
        return state

    def test_replaces_at_most_nr(self, config, problem):
        state = self._state(config, problem)
        child = Offspring(0, np.full(problem.D, 0.25), np.array([0.0, 0.0]), np.arange(config.N))
        assert replacement(state, [child], nr=2) == 2
        assert np.count_nonzero(np.all(state.F == 0.0, axis=1)) == 2
        assert np.count_nonzero(np.all(state.X == 0.25, axis=1)) == 2
        assert state.ideal.tolist() == [0.0, 0.0]

    def test_worse_child_replaces_nothing(self, config, problem):
        state = self._state(config, problem)
        child = Offspring(0, np.full(problem.D, 0.25), np.array([2.0, 2.0]), np.arange(config.N))
        assert replacement(state, [child], nr=2) == 0
        assert np.all(state.F == 1.0)
        assert state.worst.tolist() == [2.0, 2.0]

    def test_only_pool_members_replaced(self, config, problem):
        state = self._state(config, problem)
        child = Offspring(0, np.full(problem.D, 0.25), np.array([0.0, 0.0]), np.array([3, 4, 5]))
        replacement(state, [child], nr=10)
        changed = np.flatnonzero(np.all(state.F == 0.0, axis=1)).tolist()
        assert changed == [3, 4, 5]

    def test_no_offspring(self, config, problem):
        assert replacement(self._state(config, problem), [], nr=2) == 0

    def test_six_subproblem_trace(self, problem):
        config = AlgorithmConfig(N=6, n=2, m=2, budget=100)
        state = initialize(config, problem, seed=0)
        state.weights = np.column_stack([np.linspace(0.0, 1.0, 6), np.linspace(1.0, 0.0, 6)])
        state.F = np.array([[0.0, 1.0], [0.2, 0.9], [0.5, 0.5], [0.25, 0.25], [0.9, 0.2], [1.0, 0.0]])
        state.X = np.repeat(np.arange(6.0)[:, None] / 10, problem.D, axis=1)
        state.ideal, state.worst = np.zeros(2), np.ones(2)
        state.rng = np.random.default_rng(7)

        # child (0.3, 0.3) beats incumbents 1, 2 and 4 but not 3 (0.18 vs 0.15)
        pool = np.array([1, 2, 3, 4])
        child = Offspring(2, np.full(problem.D, 0.77), np.array([0.3, 0.3]), pool)
        order = np.random.default_rng(7).permutation(pool)
        expected = [int(j) for j in order if j != 3][:2]

        assert replacement(state, [child], nr=2) == 2
        replaced = np.flatnonzero(np.all(state.X == 0.77, axis=1)).tolist()
        assert replaced == sorted(expected)
        assert state.F[expected].tolist() == [[0.3, 0.3], [0.3, 0.3]]
        assert state.F[3].tolist() == [0.25, 0.25]
        assert state.ideal.tolist() == [0.0, 0.0] and state.worst.tolist() == [1.0, 1.0]


class TestRun:
    """Tests for complete runs."""

    def test_budget_accounting(self, config, problem):
        result = run(config, problem, seed=1)
        k = result.iterations
        assert result.evals_used == config.N + k * config.working_size
        assert result.evals_used <= config.budget
        assert result.evals_used + config.working_size > config.budget

    def test_stops_before_overshoot(self, problem):
        config = AlgorithmConfig(N=10, n=3, m=2, budget=103)
        assert run(config, problem, seed=1).evals_used == 100

    def test_budget_of_initial_population_only(self, problem):
        config = AlgorithmConfig(N=10, n=3, m=2, budget=12)
        result = run(config, problem, seed=1)
        assert result.iterations == 0
        assert result.evals_used == 10
        assert len(result.checkpoints) == 1

    def test_checkpoint_schedule(self, config, problem):
        result = run(config, problem, seed=1)
        iterations = [c.iteration for c in result.checkpoints]
        assert iterations == [0, 4, 8, 12, 16, 18]
        assert np.all(np.diff(result.checkpoint_evals) > 0)
        assert np.array_equal(result.checkpoints[-1].objectives, result.final_f)

    def test_deterministic_in_seed(self, config, problem):
        a = run(config, problem, seed=5)
        b = run(config, problem, seed=5)
        c = run(config, problem, seed=6)
        assert np.array_equal(a.final_x, b.final_x)
        assert all(np.array_equal(x.objectives, y.objectives) for x, y in zip(a.checkpoints, b.checkpoints))
        assert not np.array_equal(a.final_x, c.final_x)

    def test_full_update_consumes_population(self, problem):
        config = AlgorithmConfig(N=10, n=10, m=2, budget=50)
        assert config.is_full_update
        result = run(config, problem, seed=1)
        assert [c.evals for c in result.checkpoints] == [10, 20, 30, 40, 50]

    def test_final_population_is_evaluated(self, config, problem):
        result = run(config, problem, seed=3)
        assert np.allclose(evaluate_batch(problem, result.final_x), result.final_f)

    def test_improves_on_initial_population(self, problem):
        config = AlgorithmConfig(N=20, n=5, m=2, budget=3000)
        result = run(config, problem, seed=1)
        assert result.final_f.sum(axis=1).mean() < result.checkpoints[0].objectives.sum(axis=1).mean()

    def test_custom_priority(self, problem):
        config = AlgorithmConfig(N=10, n=2, m=2, budget=14)
        state = initialize(config, problem, seed=1)
        step(state, config, problem, LowIndexFirst())
        assert state.iteration == 1
        assert state.evals_used == 14
        assert state.priorities.tolist() == (-np.arange(10.0)).tolist()

    def test_three_objectives(self):
        problem = problem_from_key("uf8", D=6)
        config = AlgorithmConfig(N=15, n=4, m=3, budget=200)
        result = run(config, problem, seed=1)
        assert result.final_f.shape == (15, 3)
        assert result.evals_used == 15 + 26 * 7

    def test_ideal_never_increases(self, config, problem):
        state = initialize(config, problem, seed=2)
        previous = state.ideal.copy()
        for _ in range(10):
            step(state, config, problem)
            assert np.all(state.ideal <= previous)
            assert np.all(state.ideal <= state.F.min(axis=0))
            assert np.all(state.worst >= state.F.max(axis=0))
            previous = state.ideal.copy()

    def test_uniform_priorities(self, problem):
        config = AlgorithmConfig(N=1000, n=10, m=2, budget=1000)
        state = initialize(config, problem, seed=1)
        draws = np.concatenate([sample_priorities(state) for _ in range(100)])
        assert np.all((draws >= 0) & (draws < 1))
        assert abs(draws.mean() - 0.5) < 0.01


class TestInitialize:
    """Tests for run setup errors."""

    def test_objective_mismatch(self, problem):
        with pytest.raises(ConfigurationError):
            initialize(AlgorithmConfig(N=10, n=3, m=3), problem, seed=1)

    def test_budget_below_population(self, problem):
        with pytest.raises(ConfigurationError):
            initialize(AlgorithmConfig(N=10, n=3, m=2, budget=9), problem, seed=1)

    def test_population_within_bounds(self):
        problem = problem_from_key("uf4", D=6)
        state = initialize(AlgorithmConfig(N=10, n=3, m=2, budget=100), problem, seed=1)
        assert np.all(state.X >= problem.bounds[:, 0]) and np.all(state.X <= problem.bounds[:, 1])
        assert state.evals_used == 10

    def test_subproblem_view(self, config, problem):
        state = initialize(config, problem, seed=1)
        view = state.subproblem(4)
        assert view.index == 4
        assert np.array_equal(view.weight, state.weights[4])
        assert np.array_equal(view.neighbor_ids, state.neighborhoods.of(4))
        assert np.array_equal(view.incumbent_f, state.F[4])
