"""Arbitrary-precision combinatorial primitives.

Counts are plain Python ``int`` (unbounded) and ratios are
:class:`fractions.Fraction` (always in lowest terms).  Nothing here touches
floating point; :func:`to_decimal` exists only for rendering reports.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction]

DEFAULT_DIGITS = 12


class DomainError(ValueError):
    """Argument outside the range where a quantity is defined."""


class ResourceError(RuntimeError):
    """Request exceeds a configured enumeration cap."""


def falling_factorial(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1); the empty product for k == 0.

    Factors may reach 0 (k == n+1) but never go negative.
    """
    if n < 0 or k < 0:
        raise DomainError(f"falling_factorial needs n, k >= 0, got ({n}, {k})")
    if k > n + 1:
        raise DomainError(f"falling_factorial({n}, {k}) has a negative factor")
    if k == n + 1:
        return 0
    return math.perm(n, k)


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise DomainError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(n: int, parts: Iterable[int]) -> int:
    """n! / (a! b! ... z!) for nonnegative parts summing to n."""
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise DomainError(f"negative part in {parts}")
    if sum(parts) != n:
        raise DomainError(f"parts {parts} do not sum to {n}")
    result = 1
    remaining = n
    for p in parts:
        result *= math.comb(remaining, p)
        remaining -= p
    return result


def choose2(n: int) -> int:
    return n * (n - 1) // 2


def pow2_choose2(n: int) -> int:
    """2 ** C(n, 2), the number of labeled graphs on n vertices."""
    if n < 0:
        raise DomainError(f"pow2_choose2 needs n >= 0, got {n}")
    return 1 << choose2(n)


def exact_half(value: int) -> int:
    """Divide by two, refusing to lose a remainder."""
    q, r = divmod(value, 2)
    if r:
        raise ArithmeticError(f"{value} is odd; expected exact division by 2")
    return q


def to_decimal(value: Rational, digits: int = DEFAULT_DIGITS) -> str:
    """Render an exact rational with ``digits`` significant digits."""
    value = Fraction(value)
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    q = ctx.divide(decimal.Decimal(value.numerator), decimal.Decimal(value.denominator))
    return format(q, "")


def ratio_str(value: Rational) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
