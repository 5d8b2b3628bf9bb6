import itertools
import math
from collections import Counter

import networkx as nx
import pytest

from diamcensus import formulas
from diamcensus.construct import (
    ConstructionError,
    H1Spec,
    MembershipError,
    SamplingError,
    SnakePartition,
    build_h1,
    build_h2,
    enumerate_snake_partitions,
    h1_representations,
    h2_multiplicity,
    is_block,
    is_member_h1,
    is_member_h2,
    make_rng,
    sample_block,
    sample_h1,
    sample_h2,
    snake_choices,
)
from diamcensus.graph import LabeledGraph, diameter, distance_matrix
from diamcensus.kernel import DomainError
from diamcensus.oracle import block_class_count


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(1, G.n + 1))
    H.add_edges_from(G.edges())
    return H


def block_support(s):
    """All block graphs on S = 1..s with a = s+1, b = s+2, by brute force."""
    S = list(range(1, s + 1))
    a, b = s + 1, s + 2
    pairs = list(itertools.combinations(range(1, s + 3), 2))
    pairs = [p for p in pairs if p != (a, b)]
    out = []
    for mask in range(1 << len(pairs)):
        edges = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        if is_block(edges, S, a, b):
            out.append(edges)
    return out


# -- blocks ----------------------------------------------------------------


def test_block_predicate_against_networkx():
    for edges in block_support(3):
        H = nx.Graph(list(edges))
        H.add_nodes_from(range(1, 6))
        assert nx.shortest_path_length(H, 4, 5) == 3
        for v in (1, 2, 3):
            assert nx.shortest_path_length(H, 4, v) <= 2
            assert nx.shortest_path_length(H, 5, v) <= 2


def test_block_support_sizes():
    assert len(block_support(2)) == 2
    assert len(block_support(3)) == 18


def test_block_s2_frequencies():
    rng = make_rng(11)
    draws = Counter(sample_block([1, 2], 3, 4, rng).edges for _ in range(4000))
    assert len(draws) == 2
    share = min(draws.values()) / 4000
    assert abs(share - 0.5) < 0.05


@pytest.mark.parametrize("s, samples", [(2, 20_000), (3, 36_000)])
def test_block_uniformity_chisquare(s, samples):
    from scipy.stats import chisquare

    support = block_support(s)
    rng = make_rng(2024 + s)
    S = list(range(1, s + 1))
    counts = Counter(sample_block(S, s + 1, s + 2, rng).edges for _ in range(samples))
    assert set(counts) <= set(support)
    observed = [counts[e] for e in support]
    assert chisquare(observed).pvalue > 0.001


def test_block_s8_predicate_holds():
    rng = make_rng(5)
    S = list(range(10, 18))
    for _ in range(30):
        draw = sample_block(S, 1, 2, rng)
        assert is_block(draw.edges, S, 1, 2)


def test_block_needs_two_vertices():
    with pytest.raises(DomainError):
        sample_block([3], 1, 2, 0)


def test_block_retry_cap():
    with pytest.raises(SamplingError) as err:
        # with s = 12 acceptance per proposal is small; a cap of 1 usually fails
        for seed in range(50):
            sample_block(list(range(3, 15)), 1, 2, seed, retry_cap=1)
    assert err.value.attempts == 1


# -- block plus a path -----------------------------------------------------


def small_h1_spec():
    # n=6, d=4: path 1 | block {3,4,5} | 2 - 6, with a = 1 and b = 2
    edges = frozenset({(1, 3), (3, 4), (2, 4), (1, 5), (4, 5)})
    return H1Spec(6, 4, 1, (1,), (2, 6), frozenset({3, 4, 5}), edges)


def test_build_h1_example():
    G = build_h1(small_h1_spec())
    assert nx.diameter(to_nx(G)) == 4
    assert diameter(G) == 4
    reps = h1_representations(G, 4)
    assert (1, 1) in reps and (6, 2) in reps


def test_build_h1_reversal_gives_same_graph():
    spec = small_h1_spec()
    assert build_h1(spec) == build_h1(spec.reversed())


def test_build_h1_rejects_bad_parameters():
    spec = small_h1_spec()
    assert is_block(spec.block_edges, spec.block_vertices, 1, 2)
    with pytest.raises(ConstructionError):
        build_h1(H1Spec(6, 4, 0, (), (1, 2, 6), spec.block_vertices, spec.block_edges))
    bad = spec.block_edges | {(1, 2)}
    with pytest.raises(ConstructionError):
        build_h1(H1Spec(6, 4, 1, spec.head, spec.tail, spec.block_vertices, bad))


def test_p5_has_four_representations():
    P5 = LabeledGraph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    assert sorted(h1_representations(P5, 4)) == [(1, 1), (1, 2), (5, 1), (5, 2)]


def all_h1_specs(n, d):
    for i in range(1, d - 1):
        for path in itertools.permutations(range(1, n + 1), d - 1):
            head, tail = path[:i], path[i:]
            S = [v for v in range(1, n + 1) if v not in path]
            a, b = head[-1], tail[0]
            verts = S + [a, b]
            pairs = [p for p in itertools.combinations(sorted(verts), 2) if set(p) != {a, b}]
            for mask in range(1 << len(pairs)):
                edges = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
                if is_block(edges, S, a, b):
                    yield H1Spec(n, d, i, head, tail, frozenset(S), edges)


@pytest.mark.parametrize("n, d", [(5, 3), (5, 4), (6, 3), (6, 4), (6, 5)])
def test_h1_representation_structure(n, d):
    """Exhaustive: procedure outputs per graph equal its representation count."""
    outputs = Counter()
    for spec in all_h1_specs(n, d):
        G = build_h1(spec)
        outputs[G] += 1
        assert spec.reversed() != spec
    s = n - d + 1
    assert sum(outputs.values()) == (d - 2) * math.perm(n, d - 1) * block_class_count(s)
    for G, k in outputs.items():
        assert k == len(h1_representations(G, d))
        assert k >= 2 and k % 2 == 0
    assert len(outputs) <= formulas.h1(n, d)


def h1_members_by_filter(n, d):
    from diamcensus.graph import canonical_pairs

    total = 0
    for code in range(1 << len(canonical_pairs(n))):
        G = LabeledGraph.from_code(n, code)
        if is_member_h1(G, d):
            total += 1
    return total


@pytest.mark.parametrize("n", [5, 6])
def test_h1_members_at_most_h1(n):
    for d in range(3, n):
        assert h1_members_by_filter(n, d) <= formulas.h1(n, d)


def test_sample_h1_24_10():
    rng_seed = 314
    graphs = [sample_h1(24, 10, seed) for seed in range(rng_seed, rng_seed + 40)]
    for G in graphs:
        assert diameter(G) == 10
        assert is_member_h1(G, 10)
    assert sample_h1(24, 10, 7) == sample_h1(24, 10, 7)


def test_sample_h1_domain():
    with pytest.raises(DomainError):
        sample_h1(5, 5, 0)
    with pytest.raises(DomainError):
        sample_h1(5, 2, 0)


# -- snakes ----------------------------------------------------------------


def test_snake_partition_counts():
    assert sum(1 for _ in enumerate_snake_partitions(9, 7)) == 362880
    assert list(enumerate_snake_partitions(7, 5)) == []
    assert sum(1 for _ in enumerate_snake_partitions(6, 5)) == 720


@pytest.mark.parametrize("n, d", [(6, 5), (9, 7), pytest.param(10, 8, marks=pytest.mark.slow)])
def test_snake_partition_count_formula(n, d):
    assert sum(1 for _ in enumerate_snake_partitions(n, d)) == formulas.snake_partition_count(n, d)


def test_snake_partition_validity():
    assert SnakePartition(((1,), (2,), (3,), (4, 5), (6,), (7,), (8,), (9,))).is_valid()
    assert not SnakePartition(((1, 2), (3,), (4,), (5,))).is_valid()
    assert not SnakePartition(((1,), (2,), (3, 4), (5, 6), (7,), (8,))).is_valid()


def test_build_h2_choices_per_partition():
    part = next(iter(enumerate_snake_partitions(9, 7)))
    choices = list(snake_choices(part))
    assert len(choices) == 6
    graphs = {build_h2(part, back, internal) for back, internal in choices}
    assert len(graphs) == 6
    for G in graphs:
        dist = distance_matrix(G)
        a, b = part.parts[0][0] - 1, part.parts[-1][0] - 1
        assert dist[a][b] == 7


def test_build_h2_rejects_missing_back_edge():
    part = next(iter(enumerate_snake_partitions(9, 7)))
    back, _ = next(iter(snake_choices(part)))
    back = dict(back)
    back.pop(part.parts[2][0])
    with pytest.raises(ConstructionError):
        build_h2(part, back)


def test_symmetric_snake_multiplicity_two():
    P6 = LabeledGraph.from_edges(6, [(k, k + 1) for k in range(1, 6)])
    assert h2_multiplicity(P6, 5) == 2


def test_witness_multiplicity_one():
    parts = ((1,), (2,), (3,), (4, 5), (6,), (7, 8), (9,), (10,), (11,))
    back = {
        2: (1,), 3: (2,), 4: (3,), 5: (3,), 6: (4, 5), 7: (6,),
        8: (6,), 9: (7,), 10: (9,), 11: (10,),
    }
    G = build_h2(SnakePartition(parts), back, [(7, 8)])
    # reverse layer sizes 1,1,1,1,2,2,1,1,1: two adjacent doubles, not a snake layering
    assert h2_multiplicity(G, 8) == 1


def test_multiplicity_rejects_non_member():
    C5 = LabeledGraph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    with pytest.raises(MembershipError):
        h2_multiplicity(C5, 2)
    assert not is_member_h2(C5, 2)
    assert not is_member_h1(C5, 2)


@pytest.mark.parametrize("n, d", [(6, 5), pytest.param(8, 6, marks=pytest.mark.slow)])
def test_snake_multiplicity_identity(n, d):
    """2 |mult-2 graphs| + |mult-1 graphs| equals the number of procedure outputs."""
    outputs = Counter()
    for part in enumerate_snake_partitions(n, d):
        for back, internal in snake_choices(part):
            outputs[build_h2(part, back, internal)] += 1
    assert sum(outputs.values()) == formulas.snake_procedure_count(n, d)
    for G, k in outputs.items():
        assert k == h2_multiplicity(G, d)


def test_sample_h2_20_16():
    for seed in range(40):
        G = sample_h2(20, 16, seed)
        dist = distance_matrix(G)
        far = [(u, v) for u in range(20) for v in range(u + 1, 20) if dist[u][v] == 16]
        assert len(far) == 1
        assert max(max(r) for r in dist) == 16
    assert sample_h2(20, 16, 99) == sample_h2(20, 16, 99)


def test_sample_h2_domain():
    with pytest.raises(DomainError):
        sample_h2(7, 5, 0)  # no snake partitions
    with pytest.raises(DomainError):
        sample_h2(12, 8, 0)  # outside 2n/3 < d


def test_roundtrip_membership():
    rng = make_rng(8)
    for _ in range(5):
        G = sample_h2(14, 11, rng)
        assert LabeledGraph.from_text(G.to_text()) == G
        assert is_member_h2(G, 11)
