"""Immutable undirected simple graphs in compressed sparse row form."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable

import numpy as np


class GraphFormatError(ValueError):
    """Raised when an edge list or partition file cannot be parsed."""


class Graph:
    """Undirected, unweighted, simple graph on nodes ``0..n-1``.

    Adjacency is stored as CSR arrays (``indptr``, ``indices``) with each
    neighbor slice sorted ascending. Instances are never mutated after
    construction, so one graph can be shared by any number of sampler runs.
    """

    __slots__ = ("n", "m", "indptr", "indices", "__dict__")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self.n = len(self.indptr) - 1
        if len(self.indices) % 2:
            raise ValueError("adjacency is not symmetric (odd number of entries)")
        self.m = len(self.indices) // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "Graph":
        """Build a graph from an edge iterable; loops are dropped, duplicates collapsed."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if arr.size == 0:
            return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))
        arr = arr.reshape(-1, 2)
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError(f"edge endpoint out of range for n={n}")
        arr = arr[arr[:, 0] != arr[:, 1]]
        both = np.concatenate([arr, arr[:, ::-1]])
        # encode pairs as scalars so one unique() both sorts and dedups
        keys = np.unique(both[:, 0] * n + both[:, 1])
        src, dst = np.divmod(keys, n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"node id {v} out of range [0, {self.n})")

    def neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        self._check(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self.indptr)
        deg.setflags(write=False)
        return deg

    @cached_property
    def adj(self) -> list[list[int]]:
        """Neighbor lists as plain Python lists (fast for per-node loops)."""
        flat = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [flat[ptr[i] : ptr[i + 1]] for i in range(self.n)]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    @cached_property
    def components(self) -> np.ndarray:
        """Connected-component label per node; labels ordered by smallest member id."""
        labels = np.full(self.n, -1, dtype=np.int64)
        adj = self.adj
        nxt = 0
        for s in range(self.n):
            if labels[s] >= 0:
                continue
            labels[s] = nxt
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if labels[w] < 0:
                        labels[w] = nxt
                        queue.append(w)
            nxt += 1
        labels.setflags(write=False)
        return labels

    @cached_property
    def component_sizes(self) -> np.ndarray:
        return np.bincount(self.components)

    def component_size(self, v: int) -> int:
        self._check(v)
        return int(self.component_sizes[self.components[v]])

    def to_scipy(self):
        from scipy.sparse import csr_matrix

        data = np.ones(len(self.indices), dtype=np.int64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


@dataclass(frozen=True)
class InducedSubgraph:
    """The subgraph of a parent graph restricted to ``nodes``.

    ``graph`` is relabeled so that local id ``i`` is parent node ``nodes[i]``.
    """

    nodes: np.ndarray
    graph: Graph

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.nodes.tolist())

    @property
    def m(self) -> int:
        return self.graph.m

    def edges(self) -> np.ndarray:
        """Edges in parent node ids."""
        return self.nodes[self.graph.edges()]


def _as_index(g: Graph, s) -> np.ndarray:
    idx = np.unique(np.fromiter(s, dtype=np.int64)) if not isinstance(s, np.ndarray) else np.unique(s)
    if idx.size and (idx[0] < 0 or idx[-1] >= g.n):
        raise IndexError("node set contains ids outside the graph")
    return idx


def neighborhood(g: Graph, s: Iterable[int]) -> set[int]:
    """Nodes outside ``s`` adjacent to at least one node of ``s``."""
    members = set(s)
    adj = g.adj
    out: set[int] = set()
    for v in members:
        g._check(v)
        out.update(adj[v])
    return out - members


def induced_subgraph(g: Graph, s: Iterable[int]) -> InducedSubgraph:
    nodes = _as_index(g, s)
    local = np.full(g.n, -1, dtype=np.int64)
    local[nodes] = np.arange(len(nodes))
    if len(nodes) == 0:
        return InducedSubgraph(nodes, Graph.from_edges(0, []))
    deg = g.degrees[nodes]
    # gather the CSR rows of the members without a Python loop
    offsets = np.repeat(g.indptr[nodes] - np.cumsum(deg) + deg, deg) + np.arange(deg.sum())
    dst = local[g.indices[offsets]]
    src = np.repeat(np.arange(len(nodes)), deg)
    keep = (dst >= 0) & (src < dst)
    return InducedSubgraph(nodes, Graph.from_edges(len(nodes), np.column_stack([src[keep], dst[keep]])))


def largest_component(g: Graph) -> np.ndarray:
    """Sorted node ids of a largest connected component (ties: smallest member id)."""
    if g.n == 0:
        raise ValueError("empty graph has no components")
    # argmax returns the first maximal label, and labels follow smallest member id
    best = int(np.argmax(g.component_sizes))
    return np.flatnonzero(g.components == best)


def load_edge_list(source: IO[str] | Iterable[str]) -> tuple[Graph, list[str]]:
    """Parse a whitespace-separated edge list.

    Returns the graph and ``labels`` where ``labels[i]`` is the raw label of
    dense node ``i``. Ids are assigned in order of first appearance.
    """
    ids: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    for lineno, line in enumerate(source, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphFormatError(f"line {lineno}: expected two node labels, got {line!r}")
        a, b = parts[0], parts[1]
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        edges.append((u, v))
    if not ids:
        raise GraphFormatError("edge list is empty")
    return Graph.from_edges(len(ids), edges), list(ids)


def read_graph(path: str) -> tuple[Graph, list[str]]:
    with open(path) as fh:
        return load_edge_list(fh)


def write_edge_list(g: Graph, out: IO[str], labels: list[str] | None = None) -> None:
    for u, v in g.edges().tolist():
        if labels is None:
            out.write(f"{u} {v}\n")
        else:
            out.write(f"{labels[u]} {labels[v]}\n")


def write_mapping(labels: list[str], out: IO[str]) -> None:
    for i, lab in enumerate(labels):
        out.write(f"{lab} {i}\n")
