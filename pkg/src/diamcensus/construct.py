"""Builders, samplers and membership tests for the two typical families.

Block-plus-path (H1): a path v_0..v_{i-1}, a block on S + {v_{i-1}, v_{i+2}}
in which only v_{i-1}, v_{i+2} are at distance 3, and a path v_{i+2}..v_d.

Snake (H2): an ordered partition V_0..V_d of [n] into singletons and pairs,
every vertex joined to something in the previous part, arbitrary edges
inside the pairs.

Randomness comes from numpy's counter-based Philox generator so sample
streams are reproducible from a single integer seed.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from diamcensus import formulas
from diamcensus.graph import LabeledGraph, bfs_layers, diameter, distance_matrix, iter_bits
from diamcensus.kernel import DomainError

log = logging.getLogger(__name__)

RNG_ALGORITHM = "numpy.random.Philox"
DEFAULT_RETRY_CAP = 10_000
VERIFY_LIMIT = 24

Edge = Tuple[int, int]
Seed = Union[int, np.random.Generator]


class ConstructionError(ValueError):
    pass


class MembershipError(ValueError):
    pass


class SamplingError(RuntimeError):
    def __init__(self, message: str, attempts: int, accepted: int = 0):
        super().__init__(f"{message} (attempts={attempts}, accepted={accepted})")
        self.attempts = attempts
        self.accepted = accepted


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# -- block class -----------------------------------------------------------


def _block_ok_masked(rows: Sequence[int], mask: int, a: int, b: int) -> bool:
    """Block predicate on the subgraph induced by ``mask`` (0-based a, b)."""
    for v in iter_bits(mask):
        nb = rows[v] & mask
        ball = nb | (1 << v)
        for w in iter_bits(nb):
            ball |= rows[w] & mask
        if v == a:
            want = mask & ~(1 << b)
        elif v == b:
            want = mask & ~(1 << a)
        else:
            want = mask
        if ball != want:
            return False
    return True


def is_block(edges: Iterable[Edge], S: Iterable[int], a: int, b: int) -> bool:
    """Whether ``edges`` on S + {a, b} form a member of the block class."""
    verts = sorted(set(S) | {a, b})
    index = {v: k for k, v in enumerate(verts)}
    rows = [0] * len(verts)
    for u, v in edges:
        if u not in index or v not in index:
            return False
        rows[index[u]] |= 1 << index[v]
        rows[index[v]] |= 1 << index[u]
    return _block_ok_masked(rows, (1 << len(verts)) - 1, index[a], index[b])


@dataclass(frozen=True)
class BlockDraw:
    edges: FrozenSet[Edge]
    attempts: int


def sample_block(
    S: Sequence[int], a: int, b: int, seed: Seed, retry_cap: int = DEFAULT_RETRY_CAP
) -> BlockDraw:
    """Uniform member of the block class on S + {a, b}, by rejection.

    Each proposal puts every S-vertex into N(a), N(b) or neither and draws a
    uniform graph on S; distinct members are distinct proposals, so the
    accepted draw is uniform.
    """
    S = list(S)
    s = len(S)
    if s < 2:
        raise DomainError(f"block class needs |S| >= 2, got {s}")
    rng = make_rng(seed)
    pairs = list(itertools.combinations(range(s), 2))
    ia, ib = s, s + 1
    full = (1 << (s + 2)) - 1
    for attempt in range(1, retry_cap + 1):
        side = rng.integers(0, 3, size=s)
        inner = rng.integers(0, 2, size=len(pairs))
        rows = [0] * (s + 2)
        for k in range(s):
            if side[k] < 2:
                hub = ia if side[k] == 0 else ib
                rows[k] |= 1 << hub
                rows[hub] |= 1 << k
        for (u, v), bit in zip(pairs, inner):
            if bit:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        if _block_ok_masked(rows, full, ia, ib):
            labels = S + [a, b]
            edges = frozenset(
                _edge(labels[u], labels[v])
                for u in range(s + 2)
                for v in iter_bits(rows[u])
                if u < v
            )
            return BlockDraw(edges, attempt)
    raise SamplingError("block sampler exhausted its retry cap", retry_cap)


# -- block plus a path -----------------------------------------------------


@dataclass(frozen=True)
class H1Spec:
    """One parameter representation of a block-plus-path graph.

    ``head`` is v_0..v_{i-1}, ``tail`` is v_{i+2}..v_d.
    """

    n: int
    d: int
    i: int
    head: Tuple[int, ...]
    tail: Tuple[int, ...]
    block_vertices: FrozenSet[int]
    block_edges: FrozenSet[Edge]

    @property
    def a(self) -> int:
        return self.head[-1]

    @property
    def b(self) -> int:
        return self.tail[0]

    def reversed(self) -> "H1Spec":
        return H1Spec(
            self.n,
            self.d,
            self.d - 1 - self.i,
            tuple(reversed(self.tail)),
            tuple(reversed(self.head)),
            self.block_vertices,
            self.block_edges,
        )

    def validate(self) -> None:
        n, d, i = self.n, self.d, self.i
        if not 3 <= d < n:
            raise ConstructionError(f"need 3 <= d < n, got n={n}, d={d}")
        if not 1 <= i <= d - 2:
            raise ConstructionError(f"split position must satisfy 1 <= i <= d-2, got {i}")
        if len(self.head) != i or len(self.tail) != d - 1 - i:
            raise ConstructionError("path lengths do not match the split position")
        if len(self.block_vertices) != n - d + 1:
            raise ConstructionError(f"block needs n-d+1 = {n - d + 1} vertices")
        labels = list(self.head) + list(self.tail) + sorted(self.block_vertices)
        if sorted(labels) != list(range(1, n + 1)):
            raise ConstructionError("head, block and tail must partition 1..n")
        if not is_block(self.block_edges, self.block_vertices, self.a, self.b):
            raise ConstructionError("block graph violates the distance-3 predicate")


def build_h1(spec: H1Spec) -> LabeledGraph:
    spec.validate()
    edges = set(spec.block_edges)
    for path in (spec.head, spec.tail):
        edges.update(_edge(u, v) for u, v in zip(path, path[1:]))
    G = LabeledGraph.from_edges(spec.n, edges)
    if diameter(G) != spec.d:
        raise ConstructionError(f"assembled graph has diameter {diameter(G)}, expected {spec.d}")
    return G


def h1_representations(G: LabeledGraph, d: int) -> List[Tuple[int, int]]:
    """All (v_0, i) giving a block-plus-path description of G with diameter d.

    A representation is fixed by its first vertex and split position: BFS
    from v_0 must have singleton layers everywhere except i and i+1, and
    those two layers must form a block between layers i-1 and i+2.
    """
    n = G.n
    if not 3 <= d < n:
        return []
    reps = []
    for src in range(n):
        layers = bfs_layers(G.rows, src)
        if len(layers) != d + 1 or sum(bin(x).count("1") for x in layers) != n:
            continue
        sizes = [bin(x).count("1") for x in layers]
        for i in range(1, d - 1):
            if any(sizes[j] != 1 for j in range(d + 1) if j not in (i, i + 1)):
                continue
            a = layers[i - 1].bit_length() - 1
            b = layers[i + 2].bit_length() - 1
            mask = layers[i - 1] | layers[i] | layers[i + 1] | layers[i + 2]
            if _block_ok_masked(G.rows, mask, a, b):
                reps.append((src + 1, i))
    return reps


def is_member_h1(G: LabeledGraph, d: int) -> bool:
    return bool(h1_representations(G, d))


def sample_h1(n: int, d: int, seed: Seed, retry_cap: int = DEFAULT_RETRY_CAP) -> LabeledGraph:
    """Uniform member of the block-plus-path family.

    Parameters are drawn uniformly and the result is kept with probability
    2 / (number of representations): some graphs, e.g. an induced path with
    a 2-vertex block, admit more than the two mirror-image representations.
    """
    if not 3 <= d < n:
        raise DomainError(f"need 3 <= d < n, got n={n}, d={d}")
    rng = make_rng(seed)
    attempts = 0
    while attempts < retry_cap:
        attempts += 1
        i = int(rng.integers(1, d - 1))
        perm = [int(v) + 1 for v in rng.permutation(n)]
        head = tuple(perm[:i])
        tail = tuple(perm[i : d - 1])
        S = perm[d - 1 :]
        draw = sample_block(S, head[-1], tail[0], rng, retry_cap)
        spec = H1Spec(n, d, i, head, tail, frozenset(S), draw.edges)
        G = build_h1(spec)
        reps = len(h1_representations(G, d))
        if reps == 2 or rng.random() * reps < 2:
            return G
    raise SamplingError("h1 sampler exhausted its retry cap", attempts)


# -- snakes ----------------------------------------------------------------


@dataclass(frozen=True)
class SnakePartition:
    parts: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(sorted(p)) for p in self.parts))

    @property
    def d(self) -> int:
        return len(self.parts) - 1

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def is_valid(self) -> bool:
        sizes, d = self.sizes, self.d
        if d < 4 or any(k not in (1, 2) for k in sizes):
            return False
        if any(sizes[j] != 1 for j in (0, 1, 2, d - 2, d - 1, d)):
            return False
        if any(x == y == 2 for x, y in zip(sizes, sizes[1:])):
            return False
        labels = sorted(v for p in self.parts for v in p)
        return labels == list(range(1, self.n + 1))

    def validate(self) -> None:
        if not self.is_valid():
            raise ConstructionError(f"not a snake partition: {self.parts}")


def _double_positions(d: int, s: int) -> Iterator[Tuple[int, ...]]:
    """Sets of s pairwise non-adjacent indices in 3..d-3."""
    slots = d - 4 - s
    if slots < 0:
        return
    for picks in itertools.combinations(range(slots), s):
        yield tuple(3 + c + k for k, c in enumerate(picks))


def enumerate_snake_partitions(n: int, d: int) -> Iterator[SnakePartition]:
    """Every snake partition of [n] with d+1 parts, each exactly once."""
    s = n - d - 1
    formulas.snake_partition_count(n, d)  # domain check
    for positions in _double_positions(d, s):
        doubles = set(positions)

        def fill(j: int, left: Tuple[int, ...], acc: List[Tuple[int, ...]]):
            if j > d:
                yield SnakePartition(tuple(acc))
                return
            if j in doubles:
                for pair in itertools.combinations(left, 2):
                    rest = tuple(v for v in left if v not in pair)
                    yield from fill(j + 1, rest, acc + [pair])
            else:
                for k, v in enumerate(left):
                    yield from fill(j + 1, left[:k] + left[k + 1 :], acc + [(v,)])

        yield from fill(0, tuple(range(1, n + 1)), [])


BackChoice = Dict[int, Tuple[int, ...]]


def snake_choices(partition: SnakePartition) -> Iterator[Tuple[BackChoice, FrozenSet[Edge]]]:
    """Every (back-neighbor assignment, internal edge set) for a partition."""
    parts = partition.parts
    options = []
    for j in range(1, len(parts)):
        prev = parts[j - 1]
        subsets = [c for r in range(1, len(prev) + 1) for c in itertools.combinations(prev, r)]
        for v in parts[j]:
            options.append([(v, c) for c in subsets])
    inner = [p for p in parts if len(p) == 2]
    for back in itertools.product(*options):
        for bits in itertools.product((False, True), repeat=len(inner)):
            yield dict(back), frozenset(p for p, on in zip(inner, bits) if on)


def build_h2(
    partition: SnakePartition, back: BackChoice, internal: Iterable[Edge] = ()
) -> LabeledGraph:
    """Assemble a snake graph and check it has a unique diametral pair {V_0, V_d}."""
    partition.validate()
    parts, d, n = partition.parts, partition.d, partition.n
    position = {v: j for j, p in enumerate(parts) for v in p}
    edges = set()
    for j in range(1, d + 1):
        for v in parts[j]:
            nbrs = back.get(v, ())
            if not nbrs:
                raise ConstructionError(f"vertex {v} in V_{j} has no back-neighbor")
            for u in nbrs:
                if position.get(u) != j - 1:
                    raise ConstructionError(f"back-neighbor {u} of {v} is not in V_{j - 1}")
                edges.add(_edge(u, v))
    for u, v in internal:
        if position.get(u) != position.get(v) or u == v:
            raise ConstructionError(f"internal edge ({u}, {v}) leaves its part")
        edges.add(_edge(u, v))
    G = LabeledGraph.from_edges(n, edges)
    if n <= VERIFY_LIMIT:
        ends = {parts[0][0] - 1, parts[d][0] - 1}
        dist = distance_matrix(G)
        far = {(u, v) for u in range(n) for v in range(u + 1, n) if dist[u][v] >= d}
        if far != {tuple(sorted(ends))} or max(max(r) for r in dist) != d:
            raise ConstructionError("snake graph does not have a unique diametral pair at distance d")
    else:
        log.info("skipping diametral-pair verification for n=%d > %d", n, VERIFY_LIMIT)
    return G


def snake_layerings(G: LabeledGraph, d: int) -> List[SnakePartition]:
    """Snake partitions whose BFS layering reproduces G, one per valid end."""
    found = []
    for src in range(G.n):
        layers = bfs_layers(G.rows, src)
        if len(layers) != d + 1:
            continue
        parts = tuple(tuple(v + 1 for v in iter_bits(x)) for x in layers)
        candidate = SnakePartition(parts)
        if candidate.n == G.n and candidate.is_valid():
            found.append(candidate)
    return found


def h2_multiplicity(G: LabeledGraph, d: int) -> int:
    """How many snake partitions produce G (1 or 2)."""
    count = len(snake_layerings(G, d))
    if count == 0:
        raise MembershipError("graph is not a snake graph for this d")
    return count


def is_member_h2(G: LabeledGraph, d: int) -> bool:
    return bool(snake_layerings(G, d))


def _check_h2_sampling(n: int, d: int) -> int:
    if not (3 * d > 2 * n and d < n):
        raise DomainError(f"snake sampling needs 2n/3 < d < n, got n={n}, d={d}")
    if formulas.snake_partition_count(n, d) == 0:
        raise DomainError(f"no snake partitions exist for n={n}, d={d}")
    return n - d - 1


def random_snake_partition(n: int, d: int, seed: Seed) -> SnakePartition:
    s = _check_h2_sampling(n, d)
    rng = make_rng(seed)
    picks = sorted(int(c) for c in rng.choice(d - 4 - s, size=s, replace=False))
    doubles = {3 + c + k for k, c in enumerate(picks)}
    labels = iter(int(v) + 1 for v in rng.permutation(n))
    parts = []
    for j in range(d + 1):
        size = 2 if j in doubles else 1
        parts.append(tuple(next(labels) for _ in range(size)))
    return SnakePartition(tuple(parts))


def sample_h2(n: int, d: int, seed: Seed, retry_cap: int = DEFAULT_RETRY_CAP) -> LabeledGraph:
    """Uniform snake graph: uniform procedure output, kept with probability 1/multiplicity."""
    _check_h2_sampling(n, d)
    rng = make_rng(seed)
    for attempt in range(1, retry_cap + 1):
        part = random_snake_partition(n, d, rng)
        back: BackChoice = {}
        for j in range(1, d + 1):
            prev = part.parts[j - 1]
            for v in part.parts[j]:
                if len(prev) == 1:
                    back[v] = prev
                else:
                    back[v] = ((prev[0],), (prev[1],), prev)[int(rng.integers(0, 3))]
        internal = [p for p in part.parts if len(p) == 2 and rng.integers(0, 2)]
        G = build_h2(part, back, internal)
        if h2_multiplicity(G, d) == 1 or rng.random() < 0.5:
            return G
    raise SamplingError("h2 sampler exhausted its retry cap", retry_cap)
