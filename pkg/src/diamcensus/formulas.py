"""Closed-form counts for the two typical diameter-d families.

``h1`` counts block-plus-path graphs (upper bound, long-range regime),
``h2`` counts snake-like graphs (near-path regime).  Both are returned as
exact integers; the halvings are checked to be exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from diamcensus.kernel import (
    DomainError,
    binomial,
    choose2,
    exact_half,
    falling_factorial,
    to_decimal,
)

UNKNOWN_CONSTANT = "unknown-constant"


@dataclass(frozen=True)
class BoundPair:
    """Two-sided bound whose lower side may carry an unknown constant."""

    upper: int
    lower_factor: Union[Fraction, str] = UNKNOWN_CONSTANT
    lower_form: Optional[str] = None

    def __post_init__(self):
        if self.upper < 0:
            raise ValueError("upper bound must be nonnegative")
        if isinstance(self.lower_factor, Fraction) and self.lower_factor * self.upper > self.upper:
            raise ValueError("lower bound exceeds upper bound")


def _check_h1_range(n: int, d: int) -> None:
    if not 3 <= d < n:
        raise DomainError(f"need 3 <= d < n, got n={n}, d={d}")


def h1(n: int, d: int) -> int:
    """((d-2)/2) n_(d-1) 3^(n-d+1) 2^C(n-d+1, 2)."""
    _check_h1_range(n, d)
    s = n - d + 1
    return exact_half((d - 2) * falling_factorial(n, d - 1) * 3**s * (1 << choose2(s)))


def _check_h2_window(n: int, d: int) -> None:
    # strict 2n/3 < d < n, in integers
    if not (3 * d > 2 * n and d < n):
        raise DomainError(f"need 2n/3 < d < n, got n={n}, d={d}")


def h2(n: int, d: int) -> int:
    """(1/2) n_(d+1) d^(n-d-1) 3^(n-d-1)."""
    _check_h2_window(n, d)
    s = n - d - 1
    return exact_half(falling_factorial(n, d + 1) * d**s * 3**s)


def block_upper_bound(s: int) -> int:
    """3^s 2^C(s,2): strict upper bound on the block class on s+2 vertices."""
    if s < 2:
        raise DomainError(f"block class needs s >= 2, got {s}")
    return 3**s * (1 << choose2(s))


def block_bounds(s: int) -> BoundPair:
    return BoundPair(
        upper=block_upper_bound(s),
        lower_form=f"2^C({s},2) * 3^{s} * (1 - c3 * 0.9^{s})",
    )


def _snake_excess(n: int, d: int) -> int:
    s = n - d - 1
    if s < 0 or 2 * d - 3 - n < 0:
        raise DomainError(f"snake family needs n-d-1 >= 0 and 2d-3-n >= 0, got n={n}, d={d}")
    return s


def snake_procedure_count(n: int, d: int) -> int:
    """n_(d+1) (2d-3-n)_(n-d-1) 3^(n-d-1): outputs of the snake construction.

    Graphs with two valid snake layerings are produced twice.
    """
    s = _snake_excess(n, d)
    slots = 2 * d - 3 - n
    if s > slots:
        # the falling factorial passes through 0 before any negative factor
        return 0
    return falling_factorial(n, d + 1) * falling_factorial(slots, s) * 3**s


def snake_partition_count(n: int, d: int) -> int:
    """Number of ordered snake partitions (V_0, ..., V_d) of [n]."""
    s = _snake_excess(n, d)
    pairs = 1
    for k in range(s):
        pairs *= binomial(n - 2 * k, 2)
    singles = falling_factorial(n - 2 * s, n - 2 * s)
    # s non-adjacent double positions among V_3 .. V_{d-3}
    placements = binomial(d - 5 - s + 1, s) if d - 4 - s >= 0 else 0
    return pairs * singles * placements


@dataclass(frozen=True)
class ErrorRatio:
    n: int
    d: int
    s: int
    value: Fraction

    def decimal(self, digits: int = 12) -> str:
        return to_decimal(self.value, digits)


def _check_error_range(n: int, d: int) -> int:
    if not 3 <= d < n:
        raise DomainError(f"need 3 <= d < n, got n={n}, d={d}")
    return n - d - 1


def error_ratio_thm1(n: int, d: int) -> ErrorRatio:
    """d^2 s^4 (11/12)^s, the relative error scale in the block-plus-path regime."""
    s = _check_error_range(n, d)
    return ErrorRatio(n, d, s, Fraction(d * d * s**4) * Fraction(11, 12) ** s)


def error_ratio_thm2(n: int, d: int) -> ErrorRatio:
    """s^2 (64/3)^s / d, the relative error scale in the snake regime."""
    s = _check_error_range(n, d)
    return ErrorRatio(n, d, s, Fraction(s * s, d) * Fraction(64, 3) ** s)
