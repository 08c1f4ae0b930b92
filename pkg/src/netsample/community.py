"""Community partitions: label propagation, greedy modularity, partition files."""

from __future__ import annotations

import heapq
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .graph import Graph, GraphFormatError


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Partition:
    """Total assignment of nodes to dense community ids ``0..count-1``."""

    assignment: np.ndarray
    count: int

    @classmethod
    def from_labels(cls, labels: Iterable) -> "Partition":
        """Relabel arbitrary community labels densely, in order of first appearance."""
        dense: dict = {}
        assign = np.array([dense.setdefault(lab, len(dense)) for lab in labels], dtype=np.int64)
        if not len(assign):
            raise ValueError("a partition must cover at least one node")
        assign.setflags(write=False)
        return cls(assign, len(dense))

    def communities(self) -> list[np.ndarray]:
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(np.bincount(self.assignment, minlength=self.count))[:-1]
        return np.split(order, bounds)

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c.tolist()) for c in self.communities()}

    def __len__(self) -> int:
        return len(self.assignment)


def modularity(g: Graph, part: Partition) -> float:
    """Newman modularity Q = sum_c [e_c/m - (d_c/2m)^2]."""
    if g.m == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    a = part.assignment
    e = g.edges()
    internal = np.bincount(a[e[:, 0]][a[e[:, 0]] == a[e[:, 1]]], minlength=part.count)
    dsum = np.bincount(a, weights=g.degrees, minlength=part.count)
    return float(internal.sum() / g.m - ((dsum / (2 * g.m)) ** 2).sum())


def detect_rak(g: Graph, rng=None, max_sweeps: int = 100) -> Partition:
    """Asynchronous label propagation.

    Each sweep visits nodes in a fresh random order; a node keeps its label
    if that label is among the most frequent around it, otherwise it takes a
    uniformly random one of the most frequent labels. Stops once every node's
    label is among its neighborhood's most frequent labels.
    """
    if g.n == 0:
        raise ValueError("cannot detect communities in an empty graph")
    rng = np.random.default_rng(rng)
    adj = g.adj
    labels = list(range(g.n))

    def majority(v: int) -> list[int]:
        counts = Counter(labels[w] for w in adj[v])
        best = max(counts.values())
        return [lab for lab, c in counts.items() if c == best]

    for _ in range(max_sweeps):
        for v in rng.permutation(g.n).tolist():
            if not adj[v]:
                continue
            top = majority(v)
            if labels[v] not in top:
                labels[v] = top[int(rng.integers(len(top)))] if len(top) > 1 else top[0]
        if all(not adj[v] or labels[v] in majority(v) for v in range(g.n)):
            break
    else:
        warnings.warn(f"label propagation did not converge in {max_sweeps} sweeps", ConvergenceWarning, stacklevel=2)
    return Partition.from_labels(labels)


@dataclass(frozen=True)
class Merge:
    a: int
    b: int
    gain: float  # modularity increase of this merge
    q: float  # modularity after the merge


def cnm_merges(g: Graph) -> tuple[float, list[Merge]]:
    """Greedy agglomerative modularity merges (Clauset-Newman-Moore).

    Starting from singletons, repeatedly merge the adjacent pair of
    communities with the largest modularity gain until no adjacent pairs
    remain. Gains are compared exactly in integer units of ``1/(2m^2)``; ties
    go to the smallest ``(a, b)`` pair. The merged community keeps id ``a``.
    Returns the singleton modularity and the merge sequence.
    """
    m = g.m
    if m == 0:
        raise ValueError("greedy modularity needs at least one edge")
    two_m = 2 * m
    dsum = g.degrees.astype(np.int64).tolist()
    links: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for u, v in g.edges().tolist():
        links[u][v] = 1
        links[v][u] = 1

    def key(a: int, b: int, e: int) -> int:
        # 2m^2 * dQ = 2m*e_ab - d_a*d_b
        return two_m * e - dsum[a] * dsum[b]

    heap = [(-key(a, b, e), a, b, e) for a in range(g.n) for b, e in links[a].items() if a < b]
    heapq.heapify(heap)
    q0 = q = -sum(d * d for d in dsum) / (two_m * two_m)
    alive = [True] * g.n
    merges: list[Merge] = []
    while heap:
        negk, a, b, e = heapq.heappop(heap)
        if not (alive[a] and alive[b]) or links[a].get(b) != e or key(a, b, e) != -negk:
            continue
        gain = -negk / (2 * m * m)
        q += gain
        merges.append(Merge(a, b, gain, q))
        alive[b] = False
        la, lb = links[a], links[b]
        del la[b]
        for c, w in lb.items():
            if c == a:
                continue
            la[c] = la.get(c, 0) + w
            lc = links[c]
            del lc[b]
            lc[a] = la[c]
        lb.clear()
        dsum[a] += dsum[b]
        for c, w in la.items():
            lo, hi = (a, c) if a < c else (c, a)
            heapq.heappush(heap, (-key(lo, hi, w), lo, hi, w))
    return q0, merges


def detect_cnm(g: Graph) -> Partition:
    """Partition of maximal modularity along the greedy merge sequence."""
    if g.n == 0:
        raise ValueError("cannot detect communities in an empty graph")
    if g.m == 0:
        return Partition.from_labels(range(g.n))
    q0, merges = cnm_merges(g)
    best_q, best_t = q0, 0
    for t, mg in enumerate(merges, 1):
        if mg.q > best_q + 1e-12:
            best_q, best_t = mg.q, t
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mg in merges[:best_t]:
        parent[find(mg.b)] = find(mg.a)
    return Partition.from_labels(find(v) for v in range(g.n))


def load_partition(source: IO[str] | Iterable[str], labels: list[str] | None, n: int | None = None) -> Partition:
    """Read ``node community`` lines; ``labels`` maps dense ids to raw node labels."""
    if labels is None:
        if n is None:
            raise ValueError("need either the node label mapping or n")
        labels = [str(i) for i in range(n)]
    index = {lab: i for i, lab in enumerate(labels)}
    comm: list[str | None] = [None] * len(labels)
    for lineno, line in enumerate(source, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphFormatError(f"line {lineno}: expected 'node community', got {line!r}")
        node, c = parts[0], parts[1]
        if node not in index:
            raise GraphFormatError(f"line {lineno}: unknown node label {node!r}")
        i = index[node]
        if comm[i] is not None and comm[i] != c:
            raise GraphFormatError(f"line {lineno}: node {node!r} assigned to both {comm[i]!r} and {c!r}")
        comm[i] = c
    missing = [labels[i] for i, c in enumerate(comm) if c is None]
    if missing:
        raise GraphFormatError(f"partition misses node {missing[0]!r} ({len(missing)} missing in total)")
    return Partition.from_labels(comm)


def read_partition(path: str, labels: list[str] | None, n: int | None = None) -> Partition:
    with open(path) as fh:
        return load_partition(fh, labels, n)


def write_partition(part: Partition, out: IO[str], labels: list[str] | None = None) -> None:
    for i, c in enumerate(part.assignment.tolist()):
        out.write(f"{labels[i] if labels else i} {c}\n")
