"""Numerical kernels of moead_ps."""

__all__ = [
    "archive",
    "eaf",
    "engine",
    "metrics",
    "problems",
    "stats",
    "variation",
    "weights",
]
