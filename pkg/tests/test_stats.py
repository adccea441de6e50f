"""
Unit tests for the statistical comparison battery.
"""

from itertools import combinations

import numpy as np
import pytest
from scipy.stats import mannwhitneyu

from core.exceptions import AnalysisError
from models.comparison import SYMBOL_COLUMN_BETTER, SYMBOL_NOT_SIGNIFICANT, SYMBOL_ROW_BETTER
from modules.stats import compare_variants, hommel_adjust, paired_median_ci, wilcoxon_rank_sum


def _midranks(values):
    ordered = sorted(range(len(values)), key=lambda k: values[k])
    ranks = [0.0] * len(values)
    start = 0
    while start < len(ordered):
        end = start
        while end + 1 < len(ordered) and values[ordered[end + 1]] == values[ordered[start]]:
            end += 1
        for k in ordered[start:end + 1]:
            ranks[k] = (start + end) / 2 + 1
        start = end + 1
    return ranks


def _enumerated_p(a, b):
    """Two-sided rank-sum p-value by listing every assignment of pooled ranks to a."""
    ranks = _midranks(list(a) + list(b))
    observed = sum(ranks[: len(a)])
    sums = [sum(ranks[k] for k in split) for split in combinations(range(len(ranks)), len(a))]
    lower = sum(s <= observed + 1e-9 for s in sums) / len(sums)
    upper = sum(s >= observed - 1e-9 for s in sums) / len(sums)
    return min(1.0, 2 * min(lower, upper))


SMALL_SIZES = [(na, nb) for na in range(3, 10) for nb in range(3, 13 - na)]


class TestWilcoxonRankSum:
    """Tests for the two-sided rank-sum p-value."""

    def test_exact_separated_samples(self):
        assert wilcoxon_rank_sum([1, 2, 3, 4], [5, 6, 7, 8]) == pytest.approx(2 / 70)

    def test_exact_with_ties(self):
        assert wilcoxon_rank_sum([1, 2, 2, 3], [4, 5, 5, 6]) == pytest.approx(2 / 70)

    def test_ties_across_samples(self):
        p = wilcoxon_rank_sum([1, 2, 3, 3], [3, 3, 4, 5])
        assert 0.0 < p < 1.0

    def test_symmetric(self, rng):
        a, b = rng.random(6), rng.random(7) + 0.3
        assert wilcoxon_rank_sum(a, b) == pytest.approx(wilcoxon_rank_sum(b, a))

    def test_identical_samples(self):
        assert wilcoxon_rank_sum([0.5] * 5, [0.5] * 5) == 1.0

    def test_asymptotic_branch(self, rng):
        a, b = rng.random(15), rng.random(15) + 0.2
        expected = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True).pvalue
        assert wilcoxon_rank_sum(a, b) == pytest.approx(expected)

    def test_too_small(self):
        with pytest.raises(AnalysisError):
            wilcoxon_rank_sum([1, 2], [3, 4, 5])

    @pytest.mark.parametrize("na,nb", SMALL_SIZES)
    def test_matches_enumeration(self, na, nb):
        rng = np.random.default_rng(na * 100 + nb)
        for shift in (0.0, 0.3, 1.0):
            a, b = rng.random(na), rng.random(nb) + shift
            assert wilcoxon_rank_sum(a, b) == pytest.approx(_enumerated_p(a, b), abs=1e-12)

    @pytest.mark.parametrize("na,nb", SMALL_SIZES)
    def test_matches_enumeration_with_ties(self, na, nb):
        rng = np.random.default_rng(na * 100 + nb)
        a, b = rng.integers(0, 4, na).astype(float), rng.integers(1, 5, nb).astype(float)
        assert wilcoxon_rank_sum(a, b) == pytest.approx(_enumerated_p(a, b), abs=1e-12)

    def test_normal_approximation_close_at_ten_each(self, rng, monkeypatch):
        for shift in np.linspace(0.0, 0.6, 25):
            a, b = rng.random(10), rng.random(10) + shift
            exact = wilcoxon_rank_sum(a, b)
            monkeypatch.setattr("modules.stats.EXACT_LIMIT", 0)
            approximate = wilcoxon_rank_sum(a, b)
            monkeypatch.undo()
            assert abs(approximate - exact) <= 0.01


class TestHommelAdjust:
    """Tests for the Hommel adjustment."""

    def test_three_p_values(self):
        assert np.allclose(hommel_adjust([0.01, 0.02, 0.04]), [0.03, 0.04, 0.04])

    def test_input_order_kept(self):
        assert np.allclose(hommel_adjust([0.04, 0.01, 0.02]), [0.04, 0.03, 0.04])

    def test_never_below_raw(self, rng):
        p = rng.random(8)
        assert np.all(hommel_adjust(p) >= p)
        assert np.all(hommel_adjust(p) <= 1.0)

    def test_single_and_empty(self):
        assert hommel_adjust([0.2]).tolist() == [0.2]
        assert hommel_adjust([]).size == 0

    def test_out_of_range(self):
        with pytest.raises(AnalysisError):
            hommel_adjust([0.2, 1.5])


class TestPairedMedianCi:
    """Tests for the median-difference confidence interval."""

    def test_known_interval(self):
        low, high, estimate = paired_median_ci(np.arange(1.0, 11.0), alpha=0.05)
        assert (low, high, estimate) == (3.0, 8.0, 5.5)

    def test_zero_differences(self):
        assert paired_median_ci([0.0] * 8) == (0.0, 0.0, 0.0)

    def test_mirrored(self, rng):
        d = rng.normal(0.1, 0.2, size=12)
        low, high, estimate = paired_median_ci(d)
        m_low, m_high, m_estimate = paired_median_ci(-d)
        assert (m_low, m_high, m_estimate) == pytest.approx((-high, -low, -estimate))

    def test_interval_contains_estimate(self, rng):
        low, high, estimate = paired_median_ci(rng.normal(size=20))
        assert low <= estimate <= high

    def test_too_few(self):
        with pytest.raises(AnalysisError):
            paired_median_ci([0.1] * 5)

    def test_twenty_differences_against_walsh_averages(self, rng):
        d = rng.normal(0.2, 1.0, size=20).tolist()
        walsh = sorted((d[i] + d[j]) / 2 for i in range(20) for j in range(i, 20))
        assert len(walsh) == 210
        # tabled two-sided 5% critical value of the signed-rank statistic for 20 pairs is 52
        low, high, estimate = paired_median_ci(d, alpha=0.05)
        assert low == walsh[52]
        assert high == walsh[210 - 53]
        assert estimate == pytest.approx((walsh[104] + walsh[105]) / 2)


class TestCompareVariants:
    """Tests for the pairwise battery."""

    @pytest.fixture
    def samples(self):
        base = np.linspace(0.5, 0.7, 10)
        return {
            "ps": base + 0.3,
            "big": base,
            "small": base + 0.01,
        }

    def test_directions(self, samples):
        reports = compare_variants(samples, [("ps", "big"), ("ps", "small"), ("big", "small")], budget=1000)
        directions = {r.label: r.direction for r in reports}
        assert directions["ps vs big"] == SYMBOL_ROW_BETTER
        assert directions["ps vs small"] == SYMBOL_ROW_BETTER
        assert directions["big vs small"] == SYMBOL_NOT_SIGNIFICANT

    def test_column_better(self, samples):
        report, = compare_variants(samples, [("big", "ps")], budget=1000)
        assert report.direction == SYMBOL_COLUMN_BETTER
        assert report.median_difference == pytest.approx(0.3)
        assert report.significant

    def test_adjusted_not_below_raw(self, samples):
        for report in compare_variants(samples, [("ps", "big"), ("big", "small")], budget=5):
            assert report.adjusted_p >= report.raw_p
            assert report.budget == 5

    def test_missing_label(self, samples):
        with pytest.raises(AnalysisError):
            compare_variants(samples, [("ps", "tiny")], budget=1)
