import io
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from netsample.community import (
    Partition,
    cnm_merges,
    detect_cnm,
    detect_rak,
    load_partition,
    modularity,
    write_partition,
)
from netsample.graph import Graph, GraphFormatError

import oracles
from conftest import clique, graphs, random_graph


def disjoint(*sizes):
    edges, base = [], 0
    for s in sizes:
        edges += [(base + u, base + v) for u, v in itertools.combinations(range(s), 2)]
        base += s
    return Graph.from_edges(base, edges)


def permuted(g, perm):
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges().tolist()])


def best_partition_bruteforce(g):
    edges = set(map(tuple, g.edges().tolist()))
    best, best_q = None, None
    for part in oracles.set_partitions(list(range(g.n))):
        labels = [0] * g.n
        for i, block in enumerate(part):
            for v in block:
                labels[v] = i
        q = oracles.modularity(g.n, edges, labels)
        if best_q is None or q > best_q:
            best, best_q = part, q
    return {frozenset(b) for b in best}, best_q


def test_partition_dense_relabel():
    p = Partition.from_labels(["x", "y", "x", "z"])
    assert p.assignment.tolist() == [0, 1, 0, 2] and p.count == 3
    assert p.as_sets() == {frozenset({0, 2}), frozenset({1}), frozenset({3})}


def test_rak_examples():
    for r in range(20):
        assert detect_rak(disjoint(3, 3), r).as_sets() == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
        assert detect_rak(clique(5), r).count == 1
    assert detect_rak(Graph.from_edges(1, []), 0).count == 1


def test_rak_isolated_nodes_are_singletons():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2)])
    assert detect_rak(g, 0).as_sets() == {frozenset({0, 1, 2}), frozenset({3}), frozenset({4})}


def test_rak_stable_under_permutation():
    g = disjoint(4, 5, 6)
    expected = {len(c) for c in detect_rak(g, 0).communities()}
    for r in range(10):
        perm = np.random.default_rng(r).permutation(g.n).tolist()
        part = detect_rak(permuted(g, perm), r)
        assert {len(c) for c in part.communities()} == expected


def test_cnm_examples(toy):
    part, q = best_partition_bruteforce(toy)
    assert part == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    assert detect_cnm(toy).as_sets() == part
    assert modularity(toy, detect_cnm(toy)) == pytest.approx(float(q))
    part, _ = best_partition_bruteforce(clique(5))
    assert part == {frozenset(range(5))}
    assert detect_cnm(clique(5)).count == 1


def test_cnm_two_disjoint_k4():
    g = disjoint(4, 4)
    part, _ = best_partition_bruteforce(g)
    assert part == {frozenset(range(4)), frozenset(range(4, 8))}
    assert detect_cnm(g).as_sets() == part


def test_cnm_isolated_and_edgeless():
    g = Graph.from_edges(4, [(0, 1)])
    assert detect_cnm(g).as_sets() == {frozenset({0, 1}), frozenset({2}), frozenset({3})}
    assert detect_cnm(Graph.from_edges(3, [])).count == 3


def test_cnm_merge_gain_is_maximal():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(2, 11))
        g = random_graph(rng, n, 0.35)
        if g.m == 0:
            continue
        edges = set(map(tuple, g.edges().tolist()))
        labels = list(range(n))
        _, merges = cnm_merges(g)
        for mg in merges:
            before = oracles.modularity(n, edges, labels)
            comms = sorted(set(labels))
            gains = {}
            for a, b in itertools.combinations(comms, 2):
                trial = [a if x == b else x for x in labels]
                gains[(a, b)] = oracles.modularity(n, edges, trial) - before
            adjacent = {k: v for k, v in gains.items()
                        if any(labels[u] in k and labels[v] in k and labels[u] != labels[v] for u, v in edges)}
            assert mg.gain == pytest.approx(float(max(adjacent.values())), abs=1e-12)
            assert (mg.a, mg.b) == min(k for k, v in adjacent.items() if v == max(adjacent.values()))
            if mg.gain > 0:
                assert mg.gain == pytest.approx(float(max(gains.values())), abs=1e-12)
            labels = [mg.a if x == mg.b else x for x in labels]


def test_cnm_permutation_invariant():
    g = disjoint(5, 4, 6)
    extra = [(0, 5), (9, 12)]
    g = Graph.from_edges(g.n, g.edges().tolist() + extra)
    expected = {frozenset(c.tolist()) for c in detect_cnm(g).communities()}
    for r in range(10):
        perm = np.random.default_rng(r).permutation(g.n).tolist()
        part = detect_cnm(permuted(g, perm))
        inv = {p: v for v, p in enumerate(perm)}
        assert {frozenset(inv[x] for x in c.tolist()) for c in part.communities()} == expected


def test_modularity_examples(toy, triangle):
    assert modularity(toy, Partition.from_labels([0] * 6)) == pytest.approx(0.0)
    assert modularity(toy, Partition.from_labels([0, 0, 0, 1, 1, 1])) == pytest.approx(5 / 14)
    assert modularity(triangle, Partition.from_labels(range(3))) == pytest.approx(-1 / 3)
    with pytest.raises(ValueError):
        modularity(Graph.from_edges(2, []), Partition.from_labels([0, 0]))


@settings(max_examples=100, deadline=None)
@given(graphs(min_n=2, max_n=10))
def test_modularity_properties(g):
    if g.m == 0:
        return
    edges = set(map(tuple, g.edges().tolist()))
    labels = [v % 3 for v in range(g.n)]
    q = modularity(g, Partition.from_labels(labels))
    assert q == pytest.approx(float(oracles.modularity(g.n, edges, labels)), abs=1e-12)
    assert modularity(g, Partition.from_labels([(x + 1) % 3 for x in labels])) == pytest.approx(q)
    assert modularity(g, Partition.from_labels(range(g.n))) <= 1e-12
    assert -0.5 - 1e-12 <= q < 1


def test_load_partition_examples():
    p = load_partition(io.StringIO("0 a\n1 a\n2 b\n"), None, n=3)
    assert p.count == 2 and p.assignment.tolist() == [0, 0, 1]
    with pytest.raises(GraphFormatError, match="'2'"):
        load_partition(io.StringIO("0 a\n1 a\n"), None, n=3)
    with pytest.raises(GraphFormatError, match="both"):
        load_partition(io.StringIO("0 a\n1 a\n2 b\n0 b\n"), None, n=3)
    with pytest.raises(GraphFormatError, match="unknown"):
        load_partition(io.StringIO("0 a\n1 a\n2 b\nq c\n"), None, n=3)


def test_partition_file_round_trip():
    labels = ["u", "v", "w", "x"]
    part = Partition.from_labels([1, 0, 1, 2])
    buf = io.StringIO()
    write_partition(part, buf, labels)
    back = load_partition(io.StringIO("# comment\n" + buf.getvalue()), labels)
    assert back.as_sets() == part.as_sets()
