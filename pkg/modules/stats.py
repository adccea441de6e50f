"""
Statistical comparison of algorithm variants.

Wilcoxon rank-sum tests (exact for small samples, normal approximation
otherwise), Hommel adjustment across the pairs compared at one budget,
and Hodges-Lehmann confidence intervals for the median of paired
differences.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.stats import mannwhitneyu, rankdata
from statsmodels.stats.multitest import multipletests

from config import Config
from core.exceptions import AnalysisError
from logging_config import get_logger
from models.comparison import (
    SYMBOL_COLUMN_BETTER,
    SYMBOL_NOT_SIGNIFICANT,
    SYMBOL_ROW_BETTER,
    TestReport,
)

logger = get_logger(__name__)

EXACT_LIMIT = 20
MIN_SAMPLE = 3
MIN_PAIRS = 6


# =============================================================================
# RANK-SUM TEST
# =============================================================================

def _exact_tied_p(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sided p by enumerating every split of the pooled midranks."""
    pooled = np.concatenate([a, b])
    doubled = np.rint(2 * rankdata(pooled)).astype(np.int64)
    observed = int(doubled[: a.size].sum())

    splits = np.array(list(combinations(range(pooled.size), a.size)), dtype=np.int64)
    sums = doubled[splits].sum(axis=1)
    lower = np.count_nonzero(sums <= observed) / sums.size
    upper = np.count_nonzero(sums >= observed) / sums.size
    return min(1.0, 2.0 * min(lower, upper))


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> float:
    """
    Two-sided Wilcoxon rank-sum (Mann-Whitney) p-value.

    Combined sizes up to 20 use the exact null distribution, enumerated
    over midranks when there are ties; larger samples use the normal
    approximation with tie and continuity corrections.

    Raises:
        AnalysisError: If either sample has fewer than 3 values
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < MIN_SAMPLE or b.size < MIN_SAMPLE:
        raise AnalysisError(
            f"Rank-sum test needs at least {MIN_SAMPLE} values per sample",
            {"sizes": [int(a.size), int(b.size)]},
        )

    pooled = np.concatenate([a, b])
    if np.all(pooled == pooled[0]):
        return 1.0

    if pooled.size <= EXACT_LIMIT:
        if np.unique(pooled).size < pooled.size:
            return _exact_tied_p(a, b)
        result = mannwhitneyu(a, b, alternative="two-sided", method="exact")
    else:
        result = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
    return float(min(1.0, result.pvalue))


# =============================================================================
# MULTIPLE COMPARISONS
# =============================================================================

def hommel_adjust(p_values: Sequence[float]) -> np.ndarray:
    """
    Hommel step-up adjusted p-values, in input order.

    Raises:
        AnalysisError: If a p-value lies outside [0, 1]
    """
    p = np.asarray(p_values, dtype=float)
    if p.size == 0:
        return p
    if np.any((p < 0) | (p > 1)):
        raise AnalysisError("p-values must lie in [0, 1]", {"p_values": p.tolist()})
    if p.size == 1:
        return p.copy()
    _, adjusted, _, _ = multipletests(p, method="hommel")
    return np.clip(np.maximum(adjusted, p), 0.0, 1.0)


# =============================================================================
# PAIRED-DIFFERENCE CONFIDENCE INTERVAL
# =============================================================================

def _signed_rank_distribution(n: int) -> np.ndarray:
    """P(W+ = w) for w = 0 .. n(n+1)/2 under the null."""
    probs = np.ones(1)
    for k in range(1, n + 1):
        grown = np.zeros(probs.size + k)
        grown[: probs.size] += probs
        grown[k:] += probs
        probs = 0.5 * grown
    return probs


def _signed_rank_quantile(p: float, n: int) -> int:
    cdf = np.cumsum(_signed_rank_distribution(n))
    return int(np.searchsorted(cdf, p * (1.0 - 64 * np.finfo(float).eps)))


def paired_median_ci(diffs: Sequence[float],
                     alpha: float = Config.SIGNIFICANCE_ALPHA) -> Tuple[float, float, float]:
    """
    Confidence interval for the median of paired differences.

    The estimate is the Hodges-Lehmann pseudo-median (median of the Walsh
    averages); the interval inverts the signed-rank test at level 1 - alpha.

    Returns:
        (low, high, estimate)

    Raises:
        AnalysisError: If fewer than 6 differences are given
    """
    d = np.asarray(diffs, dtype=float)
    n = d.size
    if n < MIN_PAIRS:
        raise AnalysisError(f"Confidence interval needs at least {MIN_PAIRS} paired differences",
                            {"pairs": int(n)})

    i, j = np.triu_indices(n)
    walsh = np.sort((d[i] + d[j]) / 2.0)
    total = walsh.size

    lower_rank = max(_signed_rank_quantile(alpha / 2.0, n), 1)
    upper_rank = total - lower_rank
    return float(walsh[lower_rank - 1]), float(walsh[upper_rank]), float(np.median(walsh))


# =============================================================================
# VARIANT COMPARISON
# =============================================================================

def _direction(adjusted_p: float, median_difference: float, alpha: float) -> str:
    if adjusted_p >= alpha or median_difference == 0:
        return SYMBOL_NOT_SIGNIFICANT
    return SYMBOL_COLUMN_BETTER if median_difference > 0 else SYMBOL_ROW_BETTER


def compare_variants(samples: Dict[str, Sequence[float]], pairs: Sequence[Tuple[str, str]],
                     budget: int, alpha: float = Config.SIGNIFICANCE_ALPHA) -> List[TestReport]:
    """
    Rank-sum test every (row, column) pair and Hommel-adjust across them.

    Samples are larger-is-better indicator values. Equal-length samples
    are treated as paired (aligned by problem or run) and the direction
    follows the median of column - row differences; otherwise the
    difference of the sample medians is used.

    Raises:
        AnalysisError: If a label has no sample
    """
    missing = sorted({label for pair in pairs for label in pair} - set(samples))
    if missing:
        raise AnalysisError("No samples for compared variants", {"missing": missing})

    raw, medians = [], []
    for row, column in pairs:
        a = np.asarray(samples[row], dtype=float)
        b = np.asarray(samples[column], dtype=float)
        raw.append(wilcoxon_rank_sum(a, b))
        if a.size == b.size:
            medians.append(float(np.median(b - a)))
        else:
            medians.append(float(np.median(b) - np.median(a)))

    adjusted = hommel_adjust(raw)
    reports = [
        TestReport(
            row=row, column=column, budget=budget,
            raw_p=float(p), adjusted_p=float(q),
            direction=_direction(float(q), med, alpha),
            median_difference=med, alpha=alpha,
        )
        for (row, column), p, q, med in zip(pairs, raw, adjusted, medians)
    ]
    for report in reports:
        logger.debug(f"{report.label} @ {budget}: p={report.raw_p:.4g} adj={report.adjusted_p:.4g} {report.direction}")
    return reports
