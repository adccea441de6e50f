"""
Algorithm configuration model.

One validated, immutable record with every optimizer parameter. Frozen so
it can be handed to worker processes and used as part of a run's identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional

from config import Config
from core.exceptions import ConfigurationError

DE_VARIANTS = ("current_to_rand", "rand")
ARCHIVE_POLICY_KEYS = ("final_population", "last_k_union")


def default_neighborhood_size(N: int, m: int) -> int:
    """T = ceil(fraction * N), never below m and never above N."""
    return min(N, max(m, math.ceil(Config.NEIGHBORHOOD_FRACTION * N)))


@dataclass(frozen=True)
class AlgorithmConfig:
    """
    MOEA/D-DE parameters plus the partial-update count.

    Setting n >= N - m selects every sub-problem each iteration, which is
    plain generational MOEA/D-DE.
    """

    N: int
    """Population size (number of sub-problems)."""

    n: int
    """Partial-update count: non-boundary sub-problems varied per iteration."""

    m: int
    """Number of objectives."""

    F: float = Config.DE_SCALE_FACTOR
    """DE scale factor."""

    eta_m: float = Config.MUTATION_ETA
    """Polynomial mutation distribution index."""

    p_m: float = Config.MUTATION_PROBABILITY
    """Per-variable mutation probability."""

    nr: int = Config.MAX_REPLACEMENTS
    """Maximum replacements per offspring."""

    delta_p: float = Config.NEIGHBORHOOD_PROBABILITY
    """Probability of mating within the neighborhood."""

    T: Optional[int] = None
    """Neighborhood size; resolved to ceil(0.2 * N) when omitted."""

    budget: int = Config.DEFAULT_BUDGET
    """Maximum number of objective evaluations."""

    archive_policy: str = "final_population"
    """Evaluation-archive policy key (final_population or last_k_union)."""

    checkpoint_stride: int = Config.DEFAULT_CHECKPOINT_STRIDE
    """Iterations between population snapshots."""

    de_variant: str = "current_to_rand"
    """DE base vector: the sub-problem's incumbent or a random pool donor."""

    weight_seed: int = Config.WEIGHT_SEED
    """Seed of the Sobol decomposition, shared by every run of a variant."""

    def __post_init__(self) -> None:
        if self.T is None:
            object.__setattr__(self, "T", default_neighborhood_size(self.N, self.m))
        self.validate()

    def validate(self) -> None:
        """Raise ConfigurationError on the first violated invariant."""
        checks = [
            ("m", self.m in (2, 3), "objective count must be 2 or 3"),
            ("N", self.N >= self.m, "population cannot host the boundary vectors"),
            ("n", 1 <= self.n <= self.N, "partial-update count must lie in [1, N]"),
            ("F", self.F > 0, "DE scale factor must be positive"),
            ("eta_m", self.eta_m >= 0, "distribution index must be non-negative"),
            ("p_m", 0.0 <= self.p_m <= 1.0, "mutation probability must lie in [0, 1]"),
            ("delta_p", 0.0 <= self.delta_p <= 1.0, "neighborhood probability must lie in [0, 1]"),
            ("nr", self.nr >= 1, "at least one replacement per offspring"),
            ("T", self.m <= self.T <= self.N, "neighborhood size must lie in [m, N]"),
            ("budget", self.budget >= 1, "budget must be positive"),
            ("checkpoint_stride", self.checkpoint_stride >= 1, "stride must be at least 1"),
            ("de_variant", self.de_variant in DE_VARIANTS, f"expected one of {DE_VARIANTS}"),
            ("archive_policy", self.archive_policy in ARCHIVE_POLICY_KEYS,
             f"expected one of {ARCHIVE_POLICY_KEYS}"),
        ]
        for parameter, ok, reason in checks:
            if not ok:
                raise ConfigurationError(
                    f"Invalid {parameter}: {reason}",
                    parameter=parameter,
                    value=getattr(self, parameter),
                )

    @property
    def selected_count(self) -> int:
        """Non-boundary sub-problems varied per iteration."""
        return min(self.n, self.N - self.m)

    @property
    def working_size(self) -> int:
        """Evaluations consumed per iteration (selected plus boundary)."""
        return self.selected_count + self.m

    @property
    def is_full_update(self) -> bool:
        """True when every sub-problem is varied each iteration."""
        return self.working_size == self.N

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-ready dictionary with every default materialized."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AlgorithmConfig":
        """Create from dictionary; absent keys take the library defaults."""
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(
                f"Unknown algorithm parameters: {', '.join(unknown)}",
                details={"known": sorted(known)},
            )
        for required in ("N", "n", "m"):
            if required not in data:
                raise ConfigurationError(f"Missing algorithm parameter {required}", parameter=required)
        return cls(**data)
