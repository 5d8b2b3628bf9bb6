"""Exact checks of the quadratic-form bounds behind the upper-bound proofs.

For nonnegative x_1..x_d with s = sum x_i and m the largest sum of three
consecutive entries,

    f(x) = sum x_i^2 / 2 + sum x_i x_{i+1}
    f(x) <= m^2/2 + (s-m)^2/2      and      f(x) <= 3ms/4.

Everything is evaluated in exact rationals.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple

from diamcensus.census import LayerProfile, profiles
from diamcensus.kernel import DomainError, Rational, choose2


@dataclass(frozen=True)
class XVector:
    entries: Tuple[Fraction, ...]

    def __init__(self, entries: Sequence[Rational]):
        values = tuple(Fraction(v) for v in entries)
        if any(v < 0 for v in values):
            raise DomainError(f"entries must be nonnegative: {values}")
        object.__setattr__(self, "entries", values)

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def s(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    @property
    def argmax(self) -> int:
        """Smallest 1-based center k attaining m."""
        x = self.entries
        if self.d < 3:
            raise DomainError("m needs d >= 3")
        sums = [x[k - 1] + x[k] + x[k + 1] for k in range(1, self.d - 1)]
        return sums.index(max(sums)) + 2

    @property
    def m(self) -> Fraction:
        k = self.argmax - 1
        x = self.entries
        return x[k - 1] + x[k] + x[k + 1]


def f_quadratic(x: XVector) -> Fraction:
    e = x.entries
    return sum((v * v for v in e), Fraction(0)) / 2 + sum(
        (a * b for a, b in zip(e, e[1:])), Fraction(0)
    )


@dataclass(frozen=True)
class Lemma1Report:
    m: Fraction
    s: Fraction
    f: Fraction
    bound_big: Fraction
    bound_small: Fraction

    @property
    def holds_big(self) -> bool:
        return self.f <= self.bound_big

    @property
    def holds_small(self) -> bool:
        return self.f <= self.bound_small

    @property
    def holds(self) -> bool:
        return self.holds_big and self.holds_small


def check_lemma1(x: XVector) -> Lemma1Report:
    if x.d < 3:
        raise DomainError(f"lemma needs d >= 3, got d={x.d}")
    m, s = x.m, x.s
    return Lemma1Report(
        m=m,
        s=s,
        f=f_quadratic(x),
        bound_big=(m * m + (s - m) ** 2) / 2,
        bound_small=Fraction(3, 4) * m * s,
    )


def equality_gap(x: XVector) -> Fraction:
    """(x_{k-2} - x_{k+1})(x_{k-1} - x_{k+2}) at the maximizing center k.

    The big bound is tight exactly when f + this gap equals it; indices
    outside 1..d read as 0.
    """
    k = x.argmax
    e = (Fraction(0), Fraction(0)) + x.entries + (Fraction(0), Fraction(0))

    def at(i: int) -> Fraction:
        return e[i + 1]

    return (at(k - 2) - at(k + 1)) * (at(k - 1) - at(k + 2))


def grid_vectors(d: int = 4, top: int = 3) -> Iterator[XVector]:
    for entries in itertools.product(range(top + 1), repeat=d):
        yield XVector(entries)


def _scaled_violation(nums: Sequence[int]) -> Optional[str]:
    """Check both bounds for x = nums / q using integers scaled by q (or q^2).

    The common denominator cancels from both sides, so the test is exact on
    the integer numerators.
    """
    f2 = sum(a * a for a in nums) + 2 * sum(a * b for a, b in zip(nums, nums[1:]))  # 2 f q^2
    s = sum(nums)
    m = max(nums[i - 1] + nums[i] + nums[i + 1] for i in range(1, len(nums) - 1))
    if f2 > m * m + (s - m) ** 2:
        return "big"
    if 2 * f2 > 3 * m * s:
        return "small"
    return None


@dataclass(frozen=True)
class SweepResult:
    checked: int
    violations: int
    first_counterexample: Optional[XVector] = None


def grid_sweep(d: int = 4, top: int = 3) -> SweepResult:
    checked = violations = 0
    first = None
    for x in grid_vectors(d, top):
        checked += 1
        if not check_lemma1(x).holds:
            violations += 1
            first = first or x
    return SweepResult(checked, violations, first)


def random_sweep(
    trials: int,
    seed: int,
    max_d: int = 20,
    max_value: int = 10,
    max_numerator: int = 10_000,
    max_denominator: int = 1_000,
) -> SweepResult:
    """Seeded random rational vectors with 3 <= d <= max_d and entries in [0, max_value].

    Each vector shares a denominator q; numerators stay <= max_numerator.
    """
    rng = random.Random(seed)
    violations = 0
    first = None
    for _ in range(trials):
        d = rng.randint(3, max_d)
        q = rng.randint(1, max_denominator)
        top = min(max_value * q, max_numerator)
        nums = [rng.randint(0, top) for _ in range(d)]
        if _scaled_violation(nums) is not None:
            violations += 1
            if first is None:
                first = XVector([Fraction(a, q) for a in nums])
    return SweepResult(trials, violations, first)


@dataclass(frozen=True)
class GfReport:
    profile: LayerProfile
    lhs: int
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def check_gf_identity(profile: LayerProfile) -> GfReport:
    """sum C(n_i,2) + sum (n_i n_{i+1} - 1) == f(x) + 5s/2 - x_1 - x_d, x_i = n_i - 1."""
    sizes = profile.sizes
    lhs = sum(choose2(k) for k in sizes) + sum(a * b - 1 for a, b in zip(sizes, sizes[1:]))
    x = XVector(profile.excess)
    rhs = f_quadratic(x) + Fraction(5, 2) * x.s - x.entries[0] - x.entries[-1]
    return GfReport(profile, lhs, rhs)


def gf_sweep(max_n: int = 12) -> Tuple[int, Optional[GfReport]]:
    """Check the identity on every profile with n <= max_n."""
    checked = 0
    for n in range(2, max_n + 1):
        for d in range(1, n):
            for p in profiles(n, d):
                checked += 1
                report = check_gf_identity(p)
                if not report.holds:
                    return checked, report
    return checked, None
