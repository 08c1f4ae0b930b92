import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from netsample.community import Partition
from netsample.graph import Graph, induced_subgraph
from netsample.metrics import (
    ccglb,
    ccloc,
    community_reach,
    degree_cdf,
    distsim,
    dq,
    evaluate_checkpoints,
    hubs,
    ks_distance,
)
from netsample.samplers import sample

import oracles
from conftest import clique, connected_graphs, graphs, path, random_graph, star


def test_degree_cdf():
    c = degree_cdf([1, 1, 2])
    assert c.x.tolist() == [1, 2] and c.F.tolist() == pytest.approx([2 / 3, 1])
    assert degree_cdf([2, 2, 2]).F.tolist() == [1.0]
    c = degree_cdf([1, 2, 2, 3])
    assert c.F.tolist() == [0.25, 0.75, 1.0]
    assert c(0).item() == 0.0 and c(2.5).item() == 0.75
    with pytest.raises(ValueError):
        degree_cdf([])


def test_ks_distance_hand_value():
    assert ks_distance([1, 1, 2], [1, 2, 2]) == pytest.approx(1 / 3)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 20), min_size=1, max_size=40), st.lists(st.integers(0, 20), min_size=1, max_size=40))
def test_ks_distance_matches_scipy_and_is_symmetric(a, b):
    d = ks_distance(a, b)
    with np.errstate(divide="ignore"):  # scipy's p-value, not the statistic, trips on tiny samples
        ref = stats.ks_2samp(a, b, method="asymp").statistic
    assert d == pytest.approx(ref, abs=1e-12)
    assert d == ks_distance(b, a)


def test_distsim_examples(toy):
    assert distsim(toy, range(6)) == 1.0
    # induced degrees of {0,1,2} are [2,2,2] against [2,2,3,3,2,2]
    assert distsim(toy, {0, 1, 2}) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        distsim(toy, [])


def test_distsim_original_degree_mode(toy):
    # original degrees of {2,3} are [3,3]: D = F(2) - 0 = 4/6
    assert distsim(toy, {2, 3}, mode="original") == pytest.approx(1 - 4 / 6)


def test_hubs_examples(toy):
    assert hubs(toy, {0, 2, 3}, K=2) == 1.0
    assert hubs(toy, {0, 1}, K=2) == 0.0
    assert hubs(toy, range(6), K=3) == 1.0
    with pytest.raises(ValueError):
        hubs(toy, {0}, K=7)


def test_ccloc_examples(toy, triangle):
    assert ccloc(induced_subgraph(triangle, range(3))) == 1.0
    assert ccloc(induced_subgraph(star(4), range(5))) == 0.0
    assert ccloc(induced_subgraph(toy, {0, 1, 2, 3})) == pytest.approx(7 / 12)


def test_ccglb_examples(toy, triangle):
    assert ccglb(triangle) == 1.0
    assert ccglb(path(3)) == 0.0
    assert ccglb(toy) == pytest.approx(0.6)
    assert ccglb(Graph.from_edges(2, [])) == 0.0


def test_community_reach_examples():
    part = Partition.from_labels([0, 0, 0, 1, 1, 1])
    assert community_reach(part, {0, 2, 3}) == 1.0
    assert community_reach(part, {0}) == 0.5
    singletons = Partition.from_labels(range(6))
    assert community_reach(singletons, {1, 4, 5}) == 3 / 6
    with pytest.raises(KeyError):
        community_reach(part, {9})


def test_dq_examples(toy):
    assert dq(toy, {0, 2, 3}) == 1.0
    assert dq(star(4), {0}) == 1.0
    assert dq(path(5), {0}) == 2 / 5


def test_evaluate_checkpoints_examples(toy):
    out = evaluate_checkpoints(toy, [0, 2, 3], [1, 3], ["dq"])
    assert [(v.checkpoint, v.value) for v in out] == [(1, 0.5), (3, 1.0)]
    assert evaluate_checkpoints(toy, [0, 2, 3], [1, 3], []) == []


def test_evaluate_checkpoints_flags_short_trace(toy):
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always")
        out = evaluate_checkpoints(toy, [0, 2], [2, 5], ["dq", "hubs"], K=2)
    assert [v.status for v in out] == ["ok", "ok", "exhausted", "exhausted"]
    assert out[-1].value is None


def test_evaluate_checkpoints_matches_direct_calls():
    g = random_graph(np.random.default_rng(5), 80, 0.06)
    trace = sample(g, 0, 40, "xs", 2).trace
    parts = {"rak": Partition.from_labels(np.arange(80) % 7), "cnm": Partition.from_labels(np.arange(80) // 9)}
    metrics = ["distsim", "hubs", "ccloc", "ccglb", "commreach_rak", "commreach_cnm", "dq"]
    got = {v.metric: v.value for v in evaluate_checkpoints(g, trace, [len(trace)], metrics, parts, K=10)}
    sub = induced_subgraph(g, trace)
    assert got == pytest.approx({
        "distsim": distsim(g, trace),
        "hubs": hubs(g, trace, 10),
        "ccloc": ccloc(sub),
        "ccglb": ccglb(sub),
        "commreach_rak": community_reach(parts["rak"], trace),
        "commreach_cnm": community_reach(parts["cnm"], trace),
        "dq": dq(g, trace),
    })


def test_evaluate_checkpoints_needs_partition(toy):
    with pytest.raises(KeyError):
        evaluate_checkpoints(toy, [0], [1], ["commreach_cnm"])


def test_clustering_of_cliques_and_trees():
    for n in range(3, 8):
        assert ccglb(clique(n)) == 1.0
        assert ccglb(path(n)) == 0.0
        assert ccglb(star(n)) == 0.0


@settings(max_examples=100, deadline=None)
@given(connected_graphs(min_n=2, max_n=25), st.integers(0, 2**32))
def test_prefix_monotonicity(g, r):
    trace = sample(g, 0, g.n, "rw", r).trace
    part = Partition.from_labels(np.arange(g.n) % 3)
    K = max(1, g.n // 3)
    vals = evaluate_checkpoints(g, trace, list(range(1, g.n + 1)), ["dq", "hubs", "commreach_rak", "distsim", "ccloc", "ccglb"], {"rak": part}, K)
    for name in ("dq", "hubs", "commreach_rak"):
        series = [v.value for v in vals if v.metric == name]
        assert all(a <= b for a, b in zip(series, series[1:]))
    assert [v.value for v in vals if v.metric == "dq"][-1] == 1.0
    assert all(0.0 <= v.value <= 1.0 for v in vals)


def test_metrics_match_naive_definitions():
    rng = np.random.default_rng(21)
    for _ in range(100):
        n = int(rng.integers(1, 31))
        g = random_graph(rng, n, float(rng.uniform(0.05, 0.5)))
        adj = oracles.adjacency(n, g.edges().tolist())
        s = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist()
        labels = rng.integers(0, 4, size=n).tolist()
        K = int(rng.integers(1, n + 1))
        sub = induced_subgraph(g, s)
        assert distsim(g, s) == pytest.approx(float(oracles.distsim(adj, s)), abs=1e-12)
        assert hubs(g, s, K) == pytest.approx(float(oracles.hubs(adj, s, K)), abs=1e-12)
        assert ccloc(sub) == pytest.approx(float(oracles.ccloc(adj, s)), abs=1e-12)
        assert ccglb(sub) == pytest.approx(float(oracles.ccglb(adj, s)), abs=1e-12)
        assert community_reach(Partition.from_labels(labels), s) == pytest.approx(float(oracles.community_reach(labels, s)))
        assert dq(g, s) == pytest.approx(float(oracles.dq(adj, s)), abs=1e-12)
