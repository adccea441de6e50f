"""
Statistical comparison models.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Any, Dict

SYMBOL_COLUMN_BETTER = "↑"
SYMBOL_ROW_BETTER = "←"
SYMBOL_NOT_SIGNIFICANT = "≈"


@dataclass(frozen=True)
class TestReport:
    """
    One pairwise rank-sum comparison.

    The pair is laid out as in a comparison table: `row` against `column`.
    """

    __test__ = False  # not a pytest test class

    row: str
    """Row variant label."""

    column: str
    """Column variant label."""

    budget: int
    """Evaluation count the samples were taken at."""

    raw_p: float
    """Two-sided rank-sum p-value."""

    adjusted_p: float
    """Hommel-adjusted p-value across the pairs of the same budget."""

    direction: str
    """↑ column superior, ← row superior, ≈ not significant."""

    median_difference: float = 0.0
    """Median of paired (column - row) differences."""

    alpha: float = 0.05
    """Significance level."""

    @property
    def label(self) -> str:
        return f"{self.row} vs {self.column}"

    @property
    def significant(self) -> bool:
        return self.adjusted_p < self.alpha

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
