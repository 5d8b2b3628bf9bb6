"""Exact counts of labeled graphs by diameter and eccentricity."""

from diamcensus.kernel import (
    DomainError,
    binomial,
    falling_factorial,
    multinomial,
    pow2_choose2,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "binomial",
    "falling_factorial",
    "multinomial",
    "pow2_choose2",
]
