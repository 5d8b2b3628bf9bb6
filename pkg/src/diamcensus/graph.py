"""Labeled simple graphs on {1..n} stored as adjacency bit rows.

Internally vertex ``k`` (1-based label) lives at bit ``k - 1``.  The integer
``code`` of a graph has bit ``j`` set iff the j-th pair in canonical order
(1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n) is an edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Sequence, Tuple

UNBOUNDED = math.inf


@lru_cache(maxsize=None)
def canonical_pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    """0-based pairs (u, v), u < v, in code-bit order."""
    return tuple((u, v) for u in range(n) for v in range(u + 1, n))


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    rows: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or len(self.rows) != self.n:
            raise ValueError("rows must have one entry per vertex and n >= 1")
        for u, row in enumerate(self.rows):
            if row >> u & 1:
                raise ValueError(f"self-loop at vertex {u + 1}")
            if row >> self.n:
                raise ValueError(f"vertex {u + 1} has a neighbor beyond n")
            r = row
            while r:
                low = r & -r
                v = low.bit_length() - 1
                if not self.rows[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency between {u + 1} and {v + 1}")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "LabeledGraph":
        """Build from 1-based edges."""
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            rows[u - 1] |= 1 << (v - 1)
            rows[v - 1] |= 1 << (u - 1)
        return cls(n, tuple(rows))

    @classmethod
    def from_code(cls, n: int, code: int) -> "LabeledGraph":
        rows = [0] * n
        for j, (u, v) in enumerate(canonical_pairs(n)):
            if code >> j & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @property
    def code(self) -> int:
        code = 0
        for j, (u, v) in enumerate(canonical_pairs(self.n)):
            if self.rows[u] >> v & 1:
                code |= 1 << j
        return code

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u - 1] >> (v - 1) & 1)

    def edges(self) -> List[Tuple[int, int]]:
        """1-based edges (u, v), u < v, sorted lexicographically."""
        return [(u + 1, v + 1) for u, v in canonical_pairs(self.n) if self.rows[u] >> v & 1]

    def neighbors(self, u: int) -> List[int]:
        return [v + 1 for v in iter_bits(self.rows[u - 1])]

    def to_text(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LabeledGraph":
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        n = int(lines[0][0])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
        for u, v in edges:
            if u >= v:
                raise ValueError(f"edge line '{u} {v}' must have u < v")
        if edges != sorted(edges):
            raise ValueError("edge lines must be sorted")
        return cls.from_edges(n, edges)

    def induced(self, vertices: Sequence[int]) -> "LabeledGraph":
        """Subgraph on ``vertices`` (1-based), relabeled 1..k in the given order."""
        index = {v - 1: k for k, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            row = 0
            for w in iter_bits(self.rows[v - 1]):
                if w in index:
                    row |= 1 << index[w]
            rows.append(row)
        return LabeledGraph(len(vertices), tuple(rows))


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bfs_layers(rows: Sequence[int], source: int) -> List[int]:
    """Distance layers from 0-based ``source`` as bitmasks; stops when exhausted."""
    seen = frontier = 1 << source
    layers = [frontier]
    while True:
        reach = 0
        for v in iter_bits(frontier):
            reach |= rows[v]
        frontier = reach & ~seen
        if not frontier:
            return layers
        seen |= frontier
        layers.append(frontier)


def eccentricity(G: LabeledGraph, v: int) -> float:
    """Eccentricity of 1-based ``v``; UNBOUNDED if G is disconnected."""
    layers = bfs_layers(G.rows, v - 1)
    if sum(bin(layer).count("1") for layer in layers) < G.n:
        return UNBOUNDED
    return len(layers) - 1


def diameter(G: LabeledGraph) -> float:
    """Largest shortest-path distance; UNBOUNDED iff disconnected, 0 iff n == 1."""
    best = 0
    for v in range(1, G.n + 1):
        e = eccentricity(G, v)
        if e == UNBOUNDED:
            return UNBOUNDED
        best = max(best, e)
    return best


def distance_matrix(G: LabeledGraph) -> List[List[float]]:
    """All-pairs distances (0-based indices), UNBOUNDED for unreachable pairs."""
    out = []
    for u in range(G.n):
        row = [UNBOUNDED] * G.n
        for dist, layer in enumerate(bfs_layers(G.rows, u)):
            for v in iter_bits(layer):
                row[v] = dist
        out.append(row)
    return out
