"""Link-trace sampling strategies and acquaintance sampling.

Every strategy is written as a generator that yields nodes in selection order
until it runs out of reachable nodes; :func:`sample` takes the first ``k``.
Consumers that stop on a condition other than size (e.g. hub coverage) can
drive :func:`iter_sample` directly.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .graph import Graph

STRATEGIES = ("bfs", "dfs", "rw", "ffs", "ds", "sec", "xs", "acq")
LINK_TRACE = STRATEGIES[:-1]

OK = "ok"
EXHAUSTED = "exhausted"


class StepLimitExceeded(RuntimeError):
    pass


@dataclass
class SamplerConfig:
    strategy: str = "bfs"
    p: float = 0.7  # forest-fire burning probability
    max_steps: int = 10**9  # random-walk step cap

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"burning probability must be in (0, 1], got {self.p}")


@dataclass
class RunStats:
    """Side counters a sampler updates while it runs."""

    draws: int = 0  # ACQ: node draws; RW: walk steps
    touched: int = 0  # nodes whose adjacency was queried


@dataclass
class Sample:
    trace: list[int]
    k: int
    status: str = OK
    stats: RunStats = field(default_factory=RunStats)

    @property
    def members(self) -> set[int]:
        return set(self.trace)

    def __len__(self) -> int:
        return len(self.trace)


class ScoreBuckets:
    """Nodes bucketed by integer score with a uniformly random argmax pick."""

    def __init__(self):
        self._buckets: dict[int, list[int]] = {}
        self._pos: dict[int, int] = {}
        self.score: dict[int, int] = {}
        self._top = -1

    def __len__(self) -> int:
        return len(self.score)

    def __contains__(self, v: int) -> bool:
        return v in self.score

    def add(self, v: int, s: int) -> None:
        b = self._buckets.get(s)
        if b is None:
            b = self._buckets[s] = []
        self._pos[v] = len(b)
        b.append(v)
        self.score[v] = s
        if s > self._top:
            self._top = s

    def remove(self, v: int) -> int:
        s = self.score.pop(v)
        b = self._buckets[s]
        i = self._pos.pop(v)
        last = b.pop()
        if last != v:
            b[i] = last
            self._pos[last] = i
        return s

    def shift(self, v: int, delta: int) -> None:
        self.add(v, self.remove(v) + delta)

    def top_nodes(self) -> list[int]:
        self._settle()
        return list(self._buckets.get(self._top, ()))

    def _settle(self) -> None:
        while self._top >= 0 and not self._buckets.get(self._top):
            self._top -= 1

    def pick(self, rng: np.random.Generator) -> int:
        """A uniformly random node among those with the maximal score."""
        self._settle()
        b = self._buckets[self._top]
        return b[int(rng.integers(len(b)))] if len(b) > 1 else b[0]


class Frontier:
    """The neighborhood N(S) of a growing sample S with incremental scores.

    ``sec[v]`` is the number of edges from S to ``v``. When ``track_xs`` is
    on, ``xs[v]`` is ``|N({v}) - (N(S) | S)|``, the number of neighbors of
    ``v`` that have not been discovered yet. ``priority`` selects which score
    (``"sec"``, ``"xs"`` or ``"degree"``) drives :meth:`pick`.
    """

    def __init__(self, g: Graph, seed: int, priority: str = "sec", track_xs: bool | None = None):
        if priority not in ("sec", "xs", "degree"):
            raise ValueError(f"unknown frontier priority {priority!r}")
        self.g = g
        self.priority = priority
        self.track_xs = priority == "xs" if track_xs is None else track_xs or priority == "xs"
        self.in_sample = bytearray(g.n)
        self.discovered = bytearray(g.n)  # S | N(S)
        self.sec: dict[int, int] = {}
        self.xs: dict[int, int] = {}
        self.buckets = ScoreBuckets()
        self.n_discovered = 1
        self.discovered[seed] = 1
        self.add(seed)

    def __len__(self) -> int:
        return len(self.sec)

    def __contains__(self, v: int) -> bool:
        return v in self.sec

    def nodes(self) -> set[int]:
        return set(self.sec)

    def pick(self, rng: np.random.Generator) -> int:
        return self.buckets.pick(rng)

    def add(self, v: int) -> None:
        """Move ``v`` from the frontier (or the seed) into the sample."""
        adj = self.g.adj
        disc = self.discovered
        ins = self.in_sample
        buckets = self.buckets
        by_sec = self.priority == "sec"
        if v in self.sec:
            del self.sec[v]
            self.xs.pop(v, None)
            buckets.remove(v)
        ins[v] = 1

        fresh = [w for w in adj[v] if not disc[w]]
        for w in fresh:
            disc[w] = 1
        self.n_discovered += len(fresh)

        sec = self.sec
        for w in adj[v]:
            if ins[w]:
                continue
            if w in sec:
                sec[w] += 1
                if by_sec:
                    buckets.shift(w, 1)
            else:
                sec[w] = 1

        if self.track_xs:
            xs = self.xs
            by_xs = self.priority == "xs"
            fresh_set = set(fresh)
            # a newly discovered node is no longer novel for old frontier nodes
            for w in fresh:
                for u in adj[w]:
                    if u in xs and u not in fresh_set:
                        xs[u] -= 1
                        if by_xs:
                            buckets.shift(u, -1)
            for w in fresh:
                xs[w] = sum(1 for u in adj[w] if not disc[u])

        if self.priority == "sec":
            for w in fresh:
                buckets.add(w, 1)
        elif self.priority == "xs":
            for w in fresh:
                buckets.add(w, self.xs[w])
        else:
            deg = self.g.degrees
            for w in fresh:
                buckets.add(w, int(deg[w]))


def _iter_bfs(g: Graph, seed: int, rng, cfg: SamplerConfig, stats: RunStats) -> Iterator[int]:
    adj = g.adj
    visited = bytearray(g.n)
    visited[seed] = 1
    stats.touched = 1
    yield seed
    queue = deque([seed])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not visited[w]:
                visited[w] = 1
                queue.append(w)
                stats.touched += 1
                yield w


def _iter_dfs(g: Graph, seed: int, rng, cfg: SamplerConfig, stats: RunStats) -> Iterator[int]:
    adj = g.adj
    visited = bytearray(g.n)
    visited[seed] = 1
    stats.touched = 1
    yield seed
    # (node, index of the next neighbor to inspect)
    stack = [[seed, 0]]
    while stack:
        top = stack[-1]
        u, i = top
        nbrs = adj[u]
        while i < len(nbrs) and visited[nbrs[i]]:
            i += 1
        if i == len(nbrs):
            stack.pop()
            continue
        top[1] = i + 1
        w = nbrs[i]
        visited[w] = 1
        stats.touched += 1
        yield w
        stack.append([w, 0])


def _iter_rw(g: Graph, seed: int, rng, cfg: SamplerConfig, stats: RunStats) -> Iterator[int]:
    adj = g.adj
    visited = bytearray(g.n)
    visited[seed] = 1
    stats.touched = 1
    yield seed
    reachable = g.component_size(seed)
    cur = seed
    seen = 1
    while seen < reachable:
        if stats.draws >= cfg.max_steps:
            raise StepLimitExceeded(f"random walk exceeded {cfg.max_steps} steps")
        # uniforms are drawn in blocks; a block is consumed step by step
        block = rng.random(1024).tolist()
        for r in block:
            stats.draws += 1
            nbrs = adj[cur]
            cur = nbrs[int(r * len(nbrs))]
            if not visited[cur]:
                visited[cur] = 1
                seen += 1
                stats.touched += 1
                yield cur
                if seen >= reachable:
                    return
            if stats.draws >= cfg.max_steps:
                break


def _iter_ffs(g: Graph, seed: int, rng, cfg: SamplerConfig, stats: RunStats) -> Iterator[int]:
    adj = g.adj
    p = cfg.p
    visited = bytearray(g.n)
    visited[seed] = 1
    trace = [seed]
    stats.touched = 1
    yield seed
    reachable = g.component_size(seed)
    queue = deque([seed])
    while len(trace) < reachable:
        if not queue:
            # the fire died out: revive it at a random sampled node that still
            # has unvisited neighbors
            alive = [u for u in trace if any(not visited[w] for w in adj[u])]
            queue.append(alive[int(rng.integers(len(alive)))])
        u = queue.popleft()
        for w in adj[u]:
            if visited[w]:
                continue
            if p < 1.0 and rng.random() >= p:
                continue
            visited[w] = 1
            trace.append(w)
            queue.append(w)
            stats.touched += 1
            yield w


def _iter_greedy(priority: str):
    def run(g: Graph, seed: int, rng, cfg: SamplerConfig, stats: RunStats) -> Iterator[int]:
        frontier = Frontier(g, seed, priority)
        stats.touched = frontier.n_discovered
        yield seed
        while len(frontier):
            v = frontier.pick(rng)
            frontier.add(v)
            stats.touched = frontier.n_discovered
            yield v

    run.__name__ = f"_iter_{priority}"
    return run


def _iter_acq(g: Graph, seed, rng, cfg: SamplerConfig, stats: RunStats) -> Iterator[int]:
    if g.m == 0:
        raise ValueError("acquaintance sampling needs at least one edge")
    indptr = g.indptr
    deg = g.degrees
    selectable = int(np.count_nonzero(deg))
    chosen = bytearray(g.n)
    found = 0
    while found < selectable:
        us = rng.integers(g.n, size=1024)
        rs = rng.random(1024)
        du = deg[us]
        has = du > 0
        picks = g.indices[np.where(has, indptr[us] + (rs * du).astype(np.int64), 0)]
        for ok, w in zip(has.tolist(), picks.tolist()):
            stats.draws += 1
            if ok and not chosen[w]:
                chosen[w] = 1
                found += 1
                stats.touched += 1
                yield w
                if found == selectable:
                    return


_ITERS: dict[str, Callable[..., Iterator[int]]] = {
    "bfs": _iter_bfs,
    "dfs": _iter_dfs,
    "rw": _iter_rw,
    "ffs": _iter_ffs,
    "ds": _iter_greedy("degree"),
    "sec": _iter_greedy("sec"),
    "xs": _iter_greedy("xs"),
    "acq": _iter_acq,
}


def iter_sample(
    g: Graph,
    seed: int | None,
    cfg: SamplerConfig,
    rng: np.random.Generator,
    stats: RunStats | None = None,
) -> Iterator[int]:
    """Lazily yield the nodes a strategy selects, in order.

    The iterator ends when no further node is reachable. ``seed`` is ignored
    for ``acq``.
    """
    if cfg.strategy != "acq":
        if seed is None:
            raise ValueError(f"strategy {cfg.strategy!r} needs a seed node")
        g._check(seed)
    return _ITERS[cfg.strategy](g, seed, rng, cfg, stats if stats is not None else RunStats())


def sample(
    g: Graph,
    seed: int | None,
    k: int,
    cfg: SamplerConfig | str = "bfs",
    rng: np.random.Generator | int | None = None,
) -> Sample:
    """Grow a sample of ``k`` nodes with the configured strategy.

    When fewer than ``k`` nodes are reachable the partial sample is returned
    with ``status == "exhausted"``.
    """
    if isinstance(cfg, str):
        cfg = SamplerConfig(cfg)
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = np.random.default_rng(rng)
    stats = RunStats()
    trace = list(itertools.islice(iter_sample(g, seed, cfg, rng, stats), k))
    return Sample(trace, k, OK if len(trace) == k else EXHAUSTED, stats)


def _strategy_fn(name: str):
    def fn(g, seed, k, cfg=None, rng=None):
        cfg = SamplerConfig(name) if cfg is None else SamplerConfig(name, cfg.p, cfg.max_steps)
        return sample(g, seed, k, cfg, rng)

    fn.__name__ = f"sample_{name}"
    fn.__doc__ = f"Shortcut for ``sample(..., SamplerConfig({name!r}))``."
    return fn


sample_bfs = _strategy_fn("bfs")
sample_dfs = _strategy_fn("dfs")
sample_rw = _strategy_fn("rw")
sample_ffs = _strategy_fn("ffs")
sample_ds = _strategy_fn("ds")
sample_sec = _strategy_fn("sec")
sample_xs = _strategy_fn("xs")


def sample_acq(g: Graph, k: int, rng=None) -> Sample:
    """Acquaintance sampling: a random neighbor of a uniformly random node, repeated."""
    return sample(g, None, k, SamplerConfig("acq"), rng)
