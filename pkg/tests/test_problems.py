"""
Unit tests for the benchmark problems.

UF values are cross-checked against an independent loop transcription
(tests/uf_oracle.py).
"""

import numpy as np
import pytest

from core.exceptions import ConfigurationError, EvaluationError, UnsupportedError
from models.problem import EvaluationCounter, ProblemFamily
from modules.problems import (
    evaluate,
    evaluate_batch,
    list_problem_keys,
    make_problem,
    problem_from_key,
    true_front_sample,
)
from tests.uf_oracle import ORACLES


def _uniform(problem, rows, rng):
    bounds = problem.bounds
    return bounds[:, 0] + rng.random((rows, problem.D)) * (bounds[:, 1] - bounds[:, 0])


def _on_front(problem, t):
    """Decision vectors with position t and every distance variable at 0.5."""
    X = np.full((len(t), problem.D), 0.5)
    X[:, 0] = t
    return X


class TestRegistry:
    """Tests for keys and problem construction."""

    def test_eighteen_keys(self):
        keys = list_problem_keys()
        assert len(keys) == 18
        assert keys[0] == "dtlz1" and keys[4] == "dtlz1_inv" and keys[-1] == "uf10"

    @pytest.mark.parametrize("key", list_problem_keys())
    def test_key_round_trip(self, key):
        assert problem_from_key(key).key == key

    def test_key_is_case_insensitive(self):
        problem = problem_from_key(" DTLZ2_INV ")
        assert problem.family is ProblemFamily.DTLZ_INVERTED
        assert problem.id == 2

    def test_three_objective_uf(self):
        assert problem_from_key("uf9").m == 3
        assert problem_from_key("uf7").m == 2

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError):
            problem_from_key("zdt1")

    @pytest.mark.parametrize("family,problem_id,m,D", [
        ("uf", 8, 2, 10),
        ("uf", 1, 3, 10),
        ("uf", 11, 2, 10),
        ("dtlz", 5, 2, 10),
        ("dtlz", 0, 2, 10),
        ("zdt", 1, 2, 10),
        ("uf", 8, 3, 4),
        ("uf", 2, 2, 2),
        ("dtlz", 2, 2, 1),
    ])
    def test_invalid_combinations(self, family, problem_id, m, D):
        with pytest.raises(ConfigurationError):
            make_problem(family, problem_id, m, D)

    def test_bounds(self):
        assert make_problem("uf", 3, 2, 5).lower == (0.0,) * 5
        assert make_problem("uf", 4, 2, 4).lower == (0.0, -2.0, -2.0, -2.0)
        assert make_problem("uf", 1, 2, 4).upper == (1.0,) * 4
        assert make_problem("uf", 8, 3, 5).lower == (0.0, 0.0, -2.0, -2.0, -2.0)
        assert make_problem("dtlz", 1, 2, 3).upper == (1.0, 1.0, 1.0)


class TestDtlz:
    """Tests for DTLZ and inverted DTLZ objectives."""

    def test_dtlz1_optimum_sums_to_half(self):
        problem = problem_from_key("dtlz1", D=8)
        F = evaluate_batch(problem, _on_front(problem, np.linspace(0, 1, 11)))
        assert np.allclose(F.sum(axis=1), 0.5)

    @pytest.mark.parametrize("key", ["dtlz2", "dtlz3", "dtlz4"])
    def test_spherical_optimum(self, key):
        problem = problem_from_key(key, D=8)
        F = evaluate_batch(problem, _on_front(problem, np.linspace(0, 1, 11)))
        assert np.allclose((F ** 2).sum(axis=1), 1.0)

    def test_dtlz2_known_value(self):
        problem = problem_from_key("dtlz2", D=3)
        f = evaluate(problem, np.array([0.5, 0.5, 0.5]))
        assert np.allclose(f, [np.cos(np.pi / 4), np.sin(np.pi / 4)])

    def test_dtlz4_biases_position(self):
        dtlz2 = problem_from_key("dtlz2", D=4)
        dtlz4 = problem_from_key("dtlz4", D=4)
        x = np.array([0.9, 0.3, 0.7, 0.1])
        y = x.copy()
        y[0] = 0.9 ** 100
        assert np.allclose(evaluate(dtlz4, x), evaluate(dtlz2, y))

    def test_dominated_away_from_optimum(self):
        problem = problem_from_key("dtlz2", D=4)
        f_opt = evaluate(problem, np.array([0.3, 0.5, 0.5, 0.5]))
        f_off = evaluate(problem, np.array([0.3, 0.9, 0.1, 0.5]))
        assert np.all(f_off > f_opt)

    @pytest.mark.parametrize("problem_id,scale", [(1, 0.5), (2, 1.0), (3, 1.0), (4, 1.0)])
    def test_inverted_form(self, rng, problem_id, scale):
        plain = make_problem("dtlz", problem_id, 2, 6)
        inverted = make_problem("dtlz_inverted", problem_id, 2, 6)
        X = _uniform(plain, 20, rng)
        F = evaluate_batch(plain, X)
        G = evaluate_batch(inverted, X)
        xm = X[:, 1:]
        if problem_id in (1, 3):
            g = 100.0 * (xm.shape[1] + np.sum((xm - 0.5) ** 2 - np.cos(20 * np.pi * (xm - 0.5)), axis=1))
        else:
            g = np.sum((xm - 0.5) ** 2, axis=1)
        assert np.allclose(G, scale * (1.0 + g)[:, None] - F)

    def test_inverted_linear_front(self):
        problem = problem_from_key("dtlz1_inv", D=6)
        F = evaluate_batch(problem, _on_front(problem, np.linspace(0, 1, 5)))
        assert np.allclose(F.sum(axis=1), 0.5)
        assert np.all(F >= -1e-12)


class TestUf:
    """Tests for the CEC 2009 problems."""

    @pytest.mark.parametrize("problem_id", range(1, 11))
    @pytest.mark.parametrize("D", [10, 30])
    def test_matches_oracle(self, rng, problem_id, D):
        problem = problem_from_key(f"uf{problem_id}", D=D)
        X = _uniform(problem, 25, rng)
        X[:, 0] = np.clip(X[:, 0], 0.01, 1.0)
        F = evaluate_batch(problem, X)
        expected = np.array([ORACLES[problem_id](row.tolist()) for row in X])
        assert F.shape == (25, problem.m)
        assert np.allclose(F, expected, rtol=1e-10, atol=1e-12)

    def test_uf1_pareto_set(self):
        problem = problem_from_key("uf1", D=10)
        x1 = np.linspace(0, 1, 9)
        j = np.arange(1, 11)
        X = np.sin(6 * np.pi * x1[:, None] + j * np.pi / 10)
        X[:, 0] = x1
        F = evaluate_batch(problem, X)
        assert np.allclose(F[:, 0], x1)
        assert np.allclose(F[:, 1], 1.0 - np.sqrt(x1))


class TestEvaluationAccounting:
    """Tests for counted evaluation."""

    def test_counter_increments_by_rows(self, rng):
        problem = problem_from_key("uf1", D=6)
        counter = EvaluationCounter(100)
        evaluate_batch(problem, _uniform(problem, 7, rng), counter)
        evaluate(problem, _uniform(problem, 1, rng)[0], counter)
        assert counter.count == 8
        assert counter.remaining == 92

    def test_wrong_width_not_counted(self):
        problem = problem_from_key("dtlz2", D=6)
        counter = EvaluationCounter()
        with pytest.raises(EvaluationError):
            evaluate_batch(problem, np.zeros((3, 5)), counter)
        assert counter.count == 0

    def test_non_finite_rejected(self):
        problem = problem_from_key("dtlz2", D=3)
        counter = EvaluationCounter()
        with pytest.raises(EvaluationError):
            evaluate(problem, np.array([0.5, np.nan, 0.5]), counter)
        assert counter.count == 0


class TestTrueFrontSample:
    """Tests for analytic front samples."""

    def test_linear_front(self):
        front = true_front_sample(problem_from_key("dtlz1"), 3)
        assert np.allclose(front, [[0.0, 0.5], [0.25, 0.25], [0.5, 0.0]])

    def test_spherical_front_endpoints_exact(self):
        front = true_front_sample(problem_from_key("dtlz2"), 3)
        assert front[0].tolist() == [0.0, 1.0]
        assert front[-1].tolist() == [1.0, 0.0]
        assert np.allclose(front[1], [np.sqrt(0.5), np.sqrt(0.5)])

    def test_inverted_fronts(self):
        assert np.allclose(true_front_sample(problem_from_key("dtlz1_inv"), 3),
                           [[0.5, 0.0], [0.25, 0.25], [0.0, 0.5]])
        front = true_front_sample(problem_from_key("dtlz3_inv"), 5)
        assert np.allclose(((1.0 - front) ** 2).sum(axis=1), 1.0)

    def test_uf_unsupported(self):
        with pytest.raises(UnsupportedError):
            true_front_sample(problem_from_key("uf1"), 10)

    def test_needs_two_points(self):
        with pytest.raises(ConfigurationError):
            true_front_sample(problem_from_key("dtlz2"), 1)
