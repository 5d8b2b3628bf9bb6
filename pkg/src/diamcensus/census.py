"""Exact layer-partition sums over BFS-layer profiles.

A profile (n_1, ..., n_d) lists the sizes of the distance layers around a
source vertex x0.  Summing the labeled count of every profile gives the
number of (x0, G) pairs with ecc(x0) == d, which is at least twice the
number of diameter-d graphs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from diamcensus.kernel import DomainError, binomial, choose2, falling_factorial, multinomial

THM1_LABELS = ("C1", "C2", "C31", "C32", "C33", "C41", "C42", "C43", "degenerate")
THM2_LABELS = ("T-small", "T-full-endheavy", "T-full-adjacent", "H2-shaped")
SCHEMES = ("thm1", "thm2")


@dataclass(frozen=True)
class LayerProfile:
    sizes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        if not self.sizes:
            raise DomainError("a layer profile needs at least one layer")
        if any(k < 1 for k in self.sizes):
            raise DomainError(f"layer sizes must be positive: {self.sizes}")

    @property
    def d(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return 1 + sum(self.sizes)

    @property
    def excess(self) -> Tuple[int, ...]:
        return tuple(k - 1 for k in self.sizes)

    def __getitem__(self, i: int) -> int:
        """1-based layer size; n_0 = 1 and sizes past the ends read as 1."""
        if 1 <= i <= self.d:
            return self.sizes[i - 1]
        return 1


@dataclass(frozen=True)
class CaseLabel:
    scheme: str
    label: str


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered compositions of ``total`` into ``parts`` positive integers."""
    if parts < 1 or total < parts:
        return
    for cuts in combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[k + 1] - bounds[k] for k in range(parts))


def profiles(n: int, d: int) -> Iterator[LayerProfile]:
    for sizes in compositions(n - 1, d):
        yield LayerProfile(sizes)


def layer_class_count(profile: LayerProfile) -> int:
    """Graphs on a fixed labeled partition with N_i the i-th neighborhood of x0."""
    sizes = profile.sizes
    exponent = sum(choose2(k) for k in sizes)
    count = 1 << exponent
    for a, b in zip(sizes, sizes[1:]):
        count *= ((1 << a) - 1) ** b
    return count


def exact_term(profile: LayerProfile) -> int:
    """Labeled count of (x0, G) pairs realising this profile."""
    return multinomial(profile.n, (1,) + profile.sizes) * layer_class_count(profile)


def rearranged_term(profile: LayerProfile) -> int:
    """n_(d+1) * multinomial(n-d-1; n_i - 1) * 2^(sum C(n_i,2) + sum (n_i n_{i+1} - 1)).

    Always >= :func:`exact_term`.
    """
    n, d, sizes = profile.n, profile.d, profile.sizes
    exponent = sum(choose2(k) for k in sizes) + sum(a * b - 1 for a, b in zip(sizes, sizes[1:]))
    return falling_factorial(n, d + 1) * multinomial(n - d - 1, profile.excess) * (1 << exponent)


def _check_pair_range(n: int, d: int) -> None:
    if n < 2 or not 1 <= d <= n - 1:
        raise DomainError(f"need n >= 2 and 1 <= d <= n-1, got n={n}, d={d}")


def layer_dp(
    n: int,
    d: int,
    step: Optional[Callable[[Hashable, int], Hashable]] = None,
    start: Hashable = None,
) -> Dict[Hashable, int]:
    """Sum exact terms over all d-layer profiles, grouped by a running tag.

    State is (vertices left, previous layer size, tag).  Placing a layer of
    size k after one of size p picks its labels (C(left, k)), its internal
    edges (2^C(k,2)) and a nonempty back-neighborhood per vertex
    ((2^p - 1)^k).  ``step(tag, k)`` folds the new size into the tag.
    """
    _check_pair_range(n, d)
    states: Dict[Tuple[int, int, Hashable], int] = {(n - 1, 1, start): n}
    for placed in range(d):
        reserve = d - placed - 1
        nxt: Dict[Tuple[int, int, Hashable], int] = defaultdict(int)
        for (left, p, tag), w in states.items():
            back = (1 << p) - 1
            for k in range(1, left - reserve + 1):
                key = (left - k, k, step(tag, k) if step else None)
                nxt[key] += w * binomial(left, k) * (1 << choose2(k)) * back**k
        states = nxt
    out: Dict[Hashable, int] = defaultdict(int)
    for (left, _, tag), w in states.items():
        if left == 0:
            out[tag] += w
    return dict(out)


def eccentric_pair_count(n: int, d: int) -> int:
    """Number of (x0, G) on [n] with ecc_G(x0) == d, by dynamic programming."""
    return layer_dp(n, d).get(None, 0)


def eccentric_pair_count_direct(n: int, d: int) -> int:
    """Same quantity by explicit summation over every profile."""
    _check_pair_range(n, d)
    return sum(exact_term(p) for p in profiles(n, d))


@dataclass(frozen=True)
class MasterCheck:
    n: int
    d: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs


def master_upper_bound_check(n: int, d: int, exact_diameter_count: int) -> MasterCheck:
    """Compare 2 |G(n, diam = d)| against the eccentric pair sum."""
    return MasterCheck(n, d, 2 * exact_diameter_count, eccentric_pair_count(n, d))


# -- case classification ---------------------------------------------------


def window_max(profile: LayerProfile) -> int:
    """m = max over 1 < i < d of (n_{i-1} + n_i + n_{i+1} - 3)."""
    x = (0,) + profile.excess
    d = profile.d
    if d < 3:
        raise DomainError("window maximum needs d >= 3")
    return max(x[i - 1] + x[i] + x[i + 1] for i in range(2, d))


def _classify_thm1(profile: LayerProfile) -> str:
    d = profile.d
    if d < 3:
        raise DomainError(f"thm1 scheme needs d >= 3, got d={d}")
    x = (0,) + profile.excess + (0,)  # x[1..d], zero padding at both ends
    s = sum(x)
    if s == 0:
        return "degenerate"
    windows = {i: x[i - 1] + x[i] + x[i + 1] for i in range(2, d)}
    m = max(windows.values())
    if 5 * m < 3 * s:
        return "C1"
    if m < s - 1:
        return "C2"
    centers = [i for i, w in windows.items() if w == m]
    if m == s - 1:
        splits = []
        for i in centers:
            outside = [j for j in range(1, d + 1) if x[j] and j not in (i - 1, i, i + 1)]
            if len(outside) == 1 and x[outside[0]] == 1:
                splits.append((i, outside[0]))
        if any(t not in (i - 2, i + 2) for i, t in splits):
            return "C31"
        if any(t == i - 2 and x[i + 1] >= 1 for i, t in splits):
            return "C32"
        if any(t == i + 2 and x[i - 1] >= 2 for i, t in splits):
            return "C33"
    else:
        if any(x[i - 1] >= 1 and x[i + 1] >= 1 for i in centers):
            return "C41"
        if all(x[j] == 0 for j in range(1, d - 1)):
            return "C42"
        if any(x[i - 1] + x[i] == s for i in range(2, d)):
            return "C43"
    raise AssertionError(f"profile {profile.sizes} matches no case")


def _classify_thm2(profile: LayerProfile) -> str:
    d = profile.d
    x = profile.excess
    s = sum(x)
    t = sum(1 for v in x if v)
    if t < s:
        return "T-small"
    ends = [profile[i] for i in (1, 2, d - 2, d - 1, d) if 1 <= i <= d]
    if max(ends) == 2:
        return "T-full-endheavy"
    if profile[d] == 1 and any(a == b == 2 for a, b in zip(profile.sizes, profile.sizes[1:])):
        return "T-full-adjacent"
    return "H2-shaped"


def classify_profile(profile: LayerProfile, scheme: str) -> CaseLabel:
    if scheme == "thm1":
        return CaseLabel(scheme, _classify_thm1(profile))
    if scheme == "thm2":
        return CaseLabel(scheme, _classify_thm2(profile))
    raise DomainError(f"unknown scheme {scheme!r}")


def case_labels(scheme: str) -> Tuple[str, ...]:
    if scheme == "thm1":
        return THM1_LABELS
    if scheme == "thm2":
        return THM2_LABELS
    raise DomainError(f"unknown scheme {scheme!r}")


def case_decomposition(n: int, d: int, scheme: str) -> Dict[str, int]:
    """Partial sums of the eccentric pair sum, one per case label."""
    _check_pair_range(n, d)
    if scheme == "thm1" and d < 3:
        raise DomainError(f"thm1 scheme needs d >= 3, got d={d}")
    out = dict.fromkeys(case_labels(scheme), 0)
    for p in profiles(n, d):
        out[classify_profile(p, scheme).label] += exact_term(p)
    return out


# -- grouped DPs used to cross-check the decomposition ----------------------


def _window_step(tag, k):
    a, b, mx = tag
    x = k - 1
    if a is not None:
        mx = max(mx, a + b + x)
    return (b, x, mx)


def window_max_sums(n: int, d: int) -> Dict[int, int]:
    """Eccentric pair sum grouped by the window maximum m (d >= 3)."""
    if d < 3:
        raise DomainError("window maximum needs d >= 3")
    grouped = layer_dp(n, d, _window_step, (None, None, -1))
    out: Dict[int, int] = defaultdict(int)
    for (_, _, mx), w in grouped.items():
        out[mx] += w
    return dict(out)


def nonsingleton_sums(n: int, d: int) -> Dict[int, int]:
    """Eccentric pair sum grouped by t, the number of layers of size > 1."""
    return layer_dp(n, d, lambda t, k: t + (k > 1), 0)


def grouped_decomposition_dp(n: int, d: int, scheme: str) -> Dict[str, int]:
    """Coarse case totals computed by DP, independent of profile enumeration.

    thm1 groups: C1, C2, C3 (= C31+C32+C33), C4 (= C41+C42+C43), degenerate.
    thm2 groups: T-small, T-full (the remaining three labels).
    """
    s = n - d - 1
    if scheme == "thm1":
        out = dict.fromkeys(("C1", "C2", "C3", "C4", "degenerate"), 0)
        for m, w in window_max_sums(n, d).items():
            if s == 0:
                out["degenerate"] += w
            elif 5 * m < 3 * s:
                out["C1"] += w
            elif m < s - 1:
                out["C2"] += w
            elif m == s - 1:
                out["C3"] += w
            else:
                out["C4"] += w
        return out
    if scheme == "thm2":
        out = {"T-small": 0, "T-full": 0}
        for t, w in nonsingleton_sums(n, d).items():
            out["T-small" if t < s else "T-full"] += w
        return out
    raise DomainError(f"unknown scheme {scheme!r}")


def coarse_groups(decomposition: Dict[str, int], scheme: str) -> Dict[str, int]:
    """Collapse per-label sums onto the groups of :func:`grouped_decomposition_dp`."""
    if scheme == "thm1":
        g = decomposition
        return {
            "C1": g["C1"],
            "C2": g["C2"],
            "C3": g["C31"] + g["C32"] + g["C33"],
            "C4": g["C41"] + g["C42"] + g["C43"],
            "degenerate": g["degenerate"],
        }
    g = decomposition
    return {
        "T-small": g["T-small"],
        "T-full": g["T-full-endheavy"] + g["T-full-adjacent"] + g["H2-shaped"],
    }
