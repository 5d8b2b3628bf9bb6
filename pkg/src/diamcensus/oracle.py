"""Brute-force census of all labeled graphs on a few vertices.

Graphs are enumerated by integer code (see :mod:`diamcensus.graph`) in
fixed-size shards.  Within a shard every graph is processed at once as a
numpy vector: one array of neighbor bitmasks per vertex, and a BFS per
source whose frontier expansion ORs the rows of frontier vertices.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from diamcensus.graph import UNBOUNDED, LabeledGraph, canonical_pairs, diameter, eccentricity
from diamcensus.kernel import DomainError, ResourceError, choose2, pow2_choose2

__all__ = [
    "UNBOUNDED",
    "CensusTable",
    "block_class_count",
    "diameter",
    "diameter_census",
    "eccentric_pair_census",
    "eccentricity",
    "oracle_cap",
]

DEFAULT_CAP = 8
CAP_ENV = "DIAMCENSUS_ORACLE_CAP"
SHARD_BITS = 20

Key = Union[int, float]


def oracle_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{CAP_ENV} must be positive")
    return cap


def _check_cap(n: int, cap: Optional[int]) -> None:
    cap = oracle_cap() if cap is None else cap
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if n > cap:
        raise ResourceError(f"n={n} exceeds the oracle cap {cap} (set {CAP_ENV} to raise it)")


@dataclass
class CensusTable:
    """Counts keyed by 0..n-1 and UNBOUNDED."""

    n: int
    counts: Dict[Key, int] = field(default_factory=dict)

    def __getitem__(self, key: Key) -> int:
        return self.counts.get(key, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def items(self) -> List[Tuple[Key, int]]:
        return sorted(self.counts.items())

    def to_text(self) -> str:
        """Golden file format: 'd count' per line, sorted, UNBOUNDED last."""
        lines = []
        for key, value in self.items():
            label = "UNBOUNDED" if key == UNBOUNDED else str(key)
            lines.append(f"{label} {value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, n: int, text: str) -> "CensusTable":
        counts: Dict[Key, int] = {}
        for line in text.strip().splitlines():
            label, value = line.split()
            counts[UNBOUNDED if label == "UNBOUNDED" else int(label)] = int(value)
        return cls(n, counts)


def _rows_for_codes(n: int, codes: np.ndarray) -> List[np.ndarray]:
    rows = [np.zeros(codes.shape, dtype=np.uint16) for _ in range(n)]
    for j, (u, v) in enumerate(canonical_pairs(n)):
        bit = ((codes >> np.uint64(j)) & np.uint64(1)).astype(np.uint16)
        rows[u] |= bit << np.uint16(v)
        rows[v] |= bit << np.uint16(u)
    return rows


def _balls(n: int, rows: List[np.ndarray], source: int, radius: int) -> List[np.ndarray]:
    """Bitmask of vertices within distance 0..radius of ``source``, per graph."""
    seen = np.full(rows[0].shape, 1 << source, dtype=np.uint16)
    frontier = seen.copy()
    balls = [seen.copy()]
    for _ in range(radius):
        reach = np.zeros_like(seen)
        for v in range(n):
            hit = (frontier >> np.uint16(v)) & np.uint16(1)
            if hit.any():
                reach |= rows[v] * hit
        frontier = reach & ~seen
        seen = seen | frontier
        balls.append(seen.copy())
        if not frontier.any():
            balls.extend(seen.copy() for _ in range(radius - len(balls) + 1))
            break
    return balls


def _eccentricities(n: int, rows: List[np.ndarray], source: int) -> np.ndarray:
    """Eccentricity of ``source`` per graph; -1 where the graph is disconnected."""
    full = np.uint16((1 << n) - 1)
    seen = np.full(rows[0].shape, 1 << source, dtype=np.uint16)
    frontier = seen.copy()
    ecc = np.zeros(rows[0].shape, dtype=np.int8)
    for step in range(1, n):
        reach = np.zeros_like(seen)
        for v in range(n):
            hit = (frontier >> np.uint16(v)) & np.uint16(1)
            reach |= rows[v] * hit
        frontier = reach & ~seen
        grew = frontier != 0
        if not grew.any():
            break
        ecc[grew] = step
        seen |= frontier
    ecc[seen != full] = -1
    return ecc


def _census_shard(n: int, lo: int, hi: int) -> Tuple[np.ndarray, np.ndarray]:
    """Diameter histogram and eccentric-pair histogram for codes [lo, hi).

    Index n of each histogram holds the UNBOUNDED bucket.
    """
    codes = np.arange(lo, hi, dtype=np.uint64)
    if n == 1:
        diam = np.zeros(codes.shape, dtype=np.int64)
        return np.bincount(diam, minlength=n + 1), np.bincount(diam, minlength=n + 1)
    rows = _rows_for_codes(n, codes)
    diam = np.full(codes.shape, -1, dtype=np.int8)
    pairs = np.zeros(n + 1, dtype=np.int64)
    for source in range(n):
        ecc = _eccentricities(n, rows, source)
        diam = np.maximum(diam, ecc)
        ecc_idx = np.where(ecc < 0, n, ecc).astype(np.int64)
        pairs += np.bincount(ecc_idx, minlength=n + 1)
    # a disconnected graph has ecc -1 at every source, so max stays -1
    diam_idx = np.where(diam < 0, n, diam).astype(np.int64)
    return np.bincount(diam_idx, minlength=n + 1), pairs


def _shards(total: int, shard_count: Optional[int]) -> List[Tuple[int, int]]:
    if shard_count is None:
        step = 1 << SHARD_BITS
    else:
        step = max(1, -(-total // shard_count))
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _histograms_to_table(n: int, hist: np.ndarray) -> CensusTable:
    counts: Dict[Key, int] = {}
    for k in range(n + 1):
        if hist[k]:
            counts[UNBOUNDED if k == n else k] = int(hist[k])
    return CensusTable(n, counts)


def _run_census(n: int, workers: int = 1, shard_count: Optional[int] = None):
    total = pow2_choose2(n)
    shards = _shards(total, shard_count)
    diam = np.zeros(n + 1, dtype=np.int64)
    pairs = np.zeros(n + 1, dtype=np.int64)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_census_shard, [n] * len(shards), *zip(*shards)))
    else:
        results = (_census_shard(n, lo, hi) for lo, hi in shards)
    for dh, ph in results:
        diam += dh
        pairs += ph
    return _histograms_to_table(n, diam), _histograms_to_table(n, pairs)


@lru_cache(maxsize=None)
def _cached_census(n: int):
    return _run_census(n)


def diameter_census(
    n: int, *, workers: int = 1, shard_count: Optional[int] = None, cap: Optional[int] = None
) -> CensusTable:
    """Number of labeled graphs on [n] per diameter (UNBOUNDED = disconnected)."""
    _check_cap(n, cap)
    if workers == 1 and shard_count is None:
        table = _cached_census(n)[0]
        return CensusTable(n, dict(table.counts))
    return _run_census(n, workers, shard_count)[0]


def eccentric_pair_census(
    n: int, *, workers: int = 1, shard_count: Optional[int] = None, cap: Optional[int] = None
) -> CensusTable:
    """Number of (x0, G) pairs per eccentricity of x0 in G."""
    _check_cap(n, cap)
    if workers == 1 and shard_count is None:
        table = _cached_census(n)[1]
        return CensusTable(n, dict(table.counts))
    return _run_census(n, workers, shard_count)[1]


def block_predicate(G: LabeledGraph, a: int, b: int) -> bool:
    """Every pair within distance 2 except (a, b), which sits at distance exactly 3."""
    from diamcensus.graph import distance_matrix

    dist = distance_matrix(G)
    a, b = a - 1, b - 1
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if {u, v} == {a, b}:
                if dist[u][v] != 3:
                    return False
            elif dist[u][v] > 2:
                return False
    return True


def _block_shard(s: int, lo: int, hi: int) -> int:
    n = s + 2
    a, b = s, s + 1
    full = (1 << n) - 1
    codes = np.arange(lo, hi, dtype=np.uint64)
    rows = _rows_for_codes(n, codes)
    ok = np.ones(codes.shape, dtype=bool)
    for source in range(n):
        balls = _balls(n, rows, source, 3)
        ball2 = balls[2]
        if source == a:
            ok &= (ball2 == full & ~(1 << b)) & (balls[3] == full)
        elif source == b:
            ok &= (ball2 == full & ~(1 << a)) & (balls[3] == full)
        else:
            ok &= ball2 == full
    return int(ok.sum())


@lru_cache(maxsize=None)
def _cached_block(s: int) -> int:
    total = pow2_choose2(s + 2)
    return sum(_block_shard(s, lo, hi) for lo, hi in _shards(total, None))


def block_class_count(s: int, *, cap: Optional[int] = None) -> int:
    """Exact size of the block class on S + {a, b}, |S| = s, by enumeration.

    S is {1..s}, a = s+1, b = s+2.
    """
    if s < 2:
        raise DomainError(f"block class needs s >= 2, got {s}")
    if s > 6:
        raise ResourceError(f"block enumeration capped at s=6, got {s}")
    _check_cap(s + 2, cap)
    return _cached_block(s)


def write_golden(table: CensusTable, path: Union[str, Path]) -> None:
    Path(path).write_text(table.to_text())


def read_golden(n: int, path: Union[str, Path]) -> CensusTable:
    return CensusTable.from_text(n, Path(path).read_text())
