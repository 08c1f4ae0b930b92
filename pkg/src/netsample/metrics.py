"""Representativeness measures for a sample, evaluated at checkpoint sizes."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import Graph, InducedSubgraph, induced_subgraph

METRICS = ("distsim", "hubs", "ccloc", "ccglb", "commreach_rak", "commreach_cnm", "dq")
DEFAULT_K = 100


@dataclass(frozen=True)
class DegreeCdf:
    x: np.ndarray  # sorted distinct degrees
    F: np.ndarray  # fraction of values <= x

    def __call__(self, t) -> np.ndarray:
        idx = np.searchsorted(self.x, t, side="right")
        return np.where(idx > 0, self.F[np.maximum(idx - 1, 0)], 0.0)


def degree_cdf(degrees: Iterable[int]) -> DegreeCdf:
    d = np.asarray(list(degrees) if not isinstance(degrees, np.ndarray) else degrees)
    if d.size == 0:
        raise ValueError("degree CDF of an empty multiset is undefined")
    x, counts = np.unique(d, return_counts=True)
    return DegreeCdf(x, np.cumsum(counts) / d.size)


def ks_distance(a: Sequence[int], b: Sequence[int]) -> float:
    """Two-sample Kolmogorov-Smirnov D between two degree multisets.

    Both empirical CDFs are right-continuous step functions that only change
    at support points, so the supremum is attained on the union of supports.
    """
    fa, fb = degree_cdf(a), degree_cdf(b)
    grid = np.union1d(fa.x, fb.x)
    return float(np.max(np.abs(fa(grid) - fb(grid))))


def sample_degrees(g: Graph, members: Iterable[int], mode: str = "induced") -> np.ndarray:
    nodes = np.fromiter(set(members), dtype=np.int64)
    if mode == "original":
        return g.degrees[nodes]
    if mode != "induced":
        raise ValueError(f"unknown sample degree mode {mode!r}")
    return induced_subgraph(g, nodes).graph.degrees


def distsim(g: Graph, members: Iterable[int], mode: str = "induced") -> float:
    """One minus the K-S distance between graph and sample degree distributions."""
    members = set(members)
    if not members:
        raise ValueError("distsim needs a nonempty sample")
    return 1.0 - ks_distance(g.degrees, sample_degrees(g, members, mode))


def top_k(g: Graph, K: int = DEFAULT_K) -> np.ndarray:
    """The K highest-degree nodes, ranked by (degree desc, id asc)."""
    if not 1 <= K <= g.n:
        raise ValueError(f"K must be in [1, n={g.n}], got {K}")
    order = np.lexsort((np.arange(g.n), -g.degrees))
    return order[:K]


def hubs(g: Graph, members: Iterable[int], K: int = DEFAULT_K) -> float:
    top = top_k(g, K)
    members = set(members)
    return sum(1 for v in top.tolist() if v in members) / len(top)


def _triangles_per_node(sub: Graph) -> np.ndarray:
    if sub.m == 0:
        return np.zeros(sub.n, dtype=np.int64)
    a = sub.to_scipy()
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2


def local_clustering(sub: Graph) -> np.ndarray:
    """Per-node clustering coefficient; nodes of degree < 2 get 0."""
    d = sub.degrees.astype(float)
    t = _triangles_per_node(sub)
    denom = d * (d - 1)
    out = np.zeros(sub.n)
    np.divide(2.0 * t, denom, out=out, where=denom > 0)
    return out


def _as_graph(sub: InducedSubgraph | Graph) -> Graph:
    return sub.graph if isinstance(sub, InducedSubgraph) else sub


def ccloc(sub: InducedSubgraph | Graph) -> float:
    g = _as_graph(sub)
    if g.n == 0:
        raise ValueError("clustering of an empty node set is undefined")
    return float(local_clustering(g).mean())


def ccglb(sub: InducedSubgraph | Graph) -> float:
    """Closed triplets over connected triples; 0 when there are no triples."""
    g = _as_graph(sub)
    if g.n == 0:
        raise ValueError("clustering of an empty node set is undefined")
    d = g.degrees
    triples = int((d * (d - 1) // 2).sum())
    if triples == 0:
        return 0.0
    return float(_triangles_per_node(g).sum()) / triples  # sum counts each triangle 3x


def community_reach(partition, members: Iterable[int]) -> float:
    assign = partition.assignment
    touched = set()
    for v in members:
        if not 0 <= v < len(assign):
            raise KeyError(f"node {v} is not covered by the partition")
        touched.add(int(assign[v]))
    return len(touched) / partition.count


def dq(g: Graph, members: Iterable[int]) -> float:
    """Discovery quotient |S u N(S)| / |V|."""
    seen = bytearray(g.n)
    adj = g.adj
    count = 0
    for v in members:
        if not seen[v]:
            seen[v] = 1
            count += 1
        for w in adj[v]:
            if not seen[w]:
                seen[w] = 1
                count += 1
    return count / g.n


@dataclass(frozen=True)
class CheckpointValue:
    checkpoint: int
    metric: str
    value: float | None
    status: str = "ok"


def evaluate_checkpoints(
    g: Graph,
    trace: Sequence[int],
    checkpoints: Sequence[int],
    metrics: Sequence[str],
    partitions: Mapping[str, object] | None = None,
    K: int = DEFAULT_K,
    degree_mode: str = "induced",
) -> list[CheckpointValue]:
    """Compute ``metrics`` on each trace prefix of length ``checkpoints[i]``.

    ``partitions`` maps ``"rak"``/``"cnm"`` to the partition used by the
    matching community-reach metric. Checkpoints past the end of the trace
    produce a value-less record with status ``"exhausted"``.
    """
    for name in metrics:
        if name not in METRICS:
            raise ValueError(f"unknown metric {name!r}")
    if not metrics:
        return []
    partitions = partitions or {}
    cps = sorted(checkpoints)
    out: list[CheckpointValue] = []

    top = set(top_k(g, min(K, g.n)).tolist()) if "hubs" in metrics else set()
    n_top = len(top)
    comm = {}
    for name in metrics:
        if name.startswith("commreach_"):
            algo = name.split("_", 1)[1]
            if algo not in partitions:
                raise KeyError(f"metric {name} needs a {algo!r} partition")
            comm[name] = (partitions[algo], set())

    # single pass over the trace for the additive metrics
    seen = bytearray(g.n)
    adj = g.adj
    discovered = 0
    hub_hits = 0
    pos = 0
    for c in cps:
        if c > len(trace) or c < 1:
            if c > len(trace):
                warnings.warn(f"checkpoint {c} exceeds trace length {len(trace)}", stacklevel=2)
            out.extend(CheckpointValue(c, name, None, "exhausted") for name in metrics)
            continue
        while pos < c:
            v = trace[pos]
            pos += 1
            if not seen[v]:
                seen[v] = 1
                discovered += 1
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = 1
                    discovered += 1
            if v in top:
                hub_hits += 1
            for part, touched in comm.values():
                touched.add(int(part.assignment[v]))
        prefix = trace[:c]
        sub = None
        for name in metrics:
            if name == "dq":
                val = discovered / g.n
            elif name == "hubs":
                val = hub_hits / n_top
            elif name in comm:
                part, touched = comm[name]
                val = len(touched) / part.count
            elif name == "distsim":
                val = distsim(g, prefix, degree_mode)
            else:
                if sub is None:
                    sub = induced_subgraph(g, prefix)
                val = ccloc(sub) if name == "ccloc" else ccglb(sub)
            out.append(CheckpointValue(c, name, float(val)))
    return out
