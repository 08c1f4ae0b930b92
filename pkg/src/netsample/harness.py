"""Experiment orchestration: many seeds per strategy, metric curves, summaries."""

from __future__ import annotations

import csv
import math
import os
import statistics
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from . import community
from .graph import Graph, largest_component, read_graph
from .metrics import DEFAULT_K, METRICS, evaluate_checkpoints, local_clustering, top_k
from .samplers import OK, STRATEGIES, RunStats, SamplerConfig, iter_sample

RAW_FIELDS = ("strategy", "seed_index", "seed_node", "checkpoint", "metric", "value", "status")
AGG_FIELDS = ("strategy", "metric", "checkpoint", "mean", "std", "count")


@dataclass
class ExperimentConfig:
    graph: str | None = None
    strategies: list[str] = field(default_factory=lambda: list(STRATEGIES[:-1]))
    metrics: list[str] = field(default_factory=lambda: ["dq", "hubs"])
    # ints are absolute sizes, floats in (0, 1) are fractions of n; empty = default schedule
    checkpoints: list[float] = field(default_factory=list)
    seeds: int = 100
    K: int = DEFAULT_K
    scale_k: bool = False  # opt-in: K = min(K, n // 10) for small graphs
    p: float = 0.7
    master_seed: int = 0
    partitions: dict[str, str] = field(default_factory=dict)  # rak/cnm -> "detect" or a file path
    degree_mode: str = "induced"
    use_largest_component: bool = True
    cache_dir: str | None = None
    out: str | None = None

    def __post_init__(self):
        for s in self.strategies:
            if s not in STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}")
        for mname in self.metrics:
            if mname not in METRICS:
                raise ValueError(f"unknown metric {mname!r}")
        if self.seeds < 1:
            raise ValueError("seeds must be at least 1")
        if list(self.checkpoints) != sorted(self.checkpoints):
            raise ValueError("checkpoints must be sorted ascending")
        if self.degree_mode not in ("induced", "original"):
            raise ValueError("degree_mode must be 'induced' or 'original'")

    def resolve_checkpoints(self, n: int) -> list[int]:
        if not self.checkpoints:
            return default_checkpoints(n)
        sizes = [int(round(c * n)) if isinstance(c, float) and c < 1 else int(c) for c in self.checkpoints]
        return sorted(set(max(1, s) for s in sizes))

    def hubs_k(self, n: int) -> int:
        k = min(self.K, max(1, n // 10)) if self.scale_k else self.K
        if k > n:
            raise ValueError(f"K={k} exceeds the number of nodes ({n}); use scale_k")
        return k


def default_checkpoints(n: int, count: int = 20) -> list[int]:
    """Log-spaced sizes from max(10, n/1000) up to n/5."""
    lo = max(10, math.ceil(0.001 * n))
    hi = max(lo, int(0.2 * n))
    sizes = np.unique(np.round(np.geomspace(lo, hi, count)).astype(int))
    return [int(s) for s in sizes if s <= n]


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.startswith("[") and raw.endswith("]"):
        inner = raw[1:-1].strip()
        return [_parse_value(x) for x in inner.split(",")] if inner else []
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1]
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    return raw


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines into an :class:`ExperimentConfig`.

    Values may be quoted strings, numbers, booleans, or ``[a, b]`` lists.
    ``partition.rak = detect`` style keys fill the partitions table.
    """
    kw: dict = {}
    parts: dict[str, str] = {}
    known = set(ExperimentConfig.__dataclass_fields__)
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and "=" not in line):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        val = _parse_value(raw)
        if key.startswith("partition.") or key.startswith("partitions."):
            parts[key.split(".", 1)[1]] = str(val)
            continue
        if key not in known:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        if key in ("strategies", "metrics", "checkpoints") and not isinstance(val, list):
            val = [_parse_value(x) for x in str(val).split(",")] if isinstance(val, str) else [val]
        kw[key] = val
    if parts:
        kw["partitions"] = parts
    return ExperimentConfig(**kw)


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read())


@dataclass(frozen=True)
class RawRow:
    strategy: str
    seed_index: int
    seed_node: int | None
    checkpoint: int
    metric: str
    value: float | None
    status: str


@dataclass(frozen=True)
class AggregateRow:
    strategy: str
    metric: str
    checkpoint: int
    mean: float
    std: float
    count: int


def run_rng(master_seed: int, strategy: str, seed_index: int) -> np.random.Generator:
    """Independent stream per (strategy, seed index) run."""
    return np.random.default_rng([master_seed, STRATEGIES.index(strategy), seed_index])


def draw_seed_nodes(g: Graph, count: int, rng: np.random.Generator, use_lcc: bool = True) -> list[int]:
    """Seed nodes drawn without replacement while the pool lasts, then with replacement."""
    pool = largest_component(g) if use_lcc else np.arange(g.n)
    first = rng.choice(pool, size=min(count, len(pool)), replace=False).tolist()
    rest = rng.choice(pool, size=count - len(first)).tolist() if count > len(pool) else []
    return [int(v) for v in first + rest]


def load_partitions(g: Graph, labels: list[str] | None, cfg: ExperimentConfig) -> dict:
    """Partitions needed by the configured community-reach metrics (cached on disk)."""
    wanted = {m.split("_", 1)[1] for m in cfg.metrics if m.startswith("commreach_")}
    out = {}
    for algo in sorted(wanted):
        source = cfg.partitions.get(algo, "detect")
        if source != "detect":
            out[algo] = community.read_partition(source, labels, g.n)
            continue
        cache = None
        if cfg.cache_dir or cfg.out:
            base = cfg.cache_dir or os.path.dirname(os.path.abspath(cfg.out))
            stem = os.path.basename(cfg.graph or "graph")
            cache = os.path.join(base, f"{stem}.{algo}-{cfg.master_seed}.part")
        if cache and os.path.exists(cache):
            out[algo] = community.read_partition(cache, labels, g.n)
            continue
        if algo == "rak":
            part = community.detect_rak(g, np.random.default_rng([cfg.master_seed, 99]))
        elif algo == "cnm":
            part = community.detect_cnm(g)
        else:
            raise ValueError(f"unknown community algorithm {algo!r}")
        if cache:
            with open(cache, "w") as fh:
                community.write_partition(part, fh, labels)
        out[algo] = part
    return out


def _one_run(args) -> list[RawRow]:
    g, strategy, seed_index, seed_node, cps, cfg, partitions, K = args
    rng = run_rng(cfg.master_seed, strategy, seed_index)
    scfg = SamplerConfig(strategy, cfg.p)
    try:
        trace: list[int] = []
        it = iter_sample(g, seed_node, scfg, rng, RunStats())
        for v in it:
            trace.append(v)
            if len(trace) >= cps[-1]:
                break
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vals = evaluate_checkpoints(g, trace, cps, cfg.metrics, partitions, K, cfg.degree_mode)
    except Exception as exc:  # a failing run is recorded, the experiment goes on
        return [RawRow(strategy, seed_index, seed_node, c, mname, None, f"error:{type(exc).__name__}")
                for c in cps for mname in cfg.metrics]
    return [RawRow(strategy, seed_index, seed_node, cv.checkpoint, cv.metric, cv.value, cv.status) for cv in vals]


def run_experiment(
    cfg: ExperimentConfig,
    g: Graph | None = None,
    labels: list[str] | None = None,
    partitions: dict | None = None,
) -> list[RawRow]:
    """One row per (strategy, seed, checkpoint, metric).

    Seed nodes come from the master RNG and are shared by all strategies so
    that strategies are compared on the same starting points.
    """
    if g is None:
        if cfg.graph is None:
            raise ValueError("no graph given")
        g, labels = read_graph(cfg.graph)
    if partitions is None:
        partitions = load_partitions(g, labels, cfg)
    cps = cfg.resolve_checkpoints(g.n)
    if not cps:
        raise ValueError("empty checkpoint schedule")
    K = cfg.hubs_k(g.n) if "hubs" in cfg.metrics else cfg.K
    seeds = draw_seed_nodes(g, cfg.seeds, np.random.default_rng(cfg.master_seed), cfg.use_largest_component)
    tasks = [
        (g, s, i, None if s == "acq" else node, cps, cfg, partitions, K)
        for s in cfg.strategies
        for i, node in enumerate(seeds)
    ]
    workers = max(1, int(os.environ.get("NETSAMPLE_THREADS", "1")))
    if workers == 1:
        chunks = map(_one_run, tasks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_one_run, tasks, chunksize=4))
    return [row for chunk in chunks for row in chunk]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(round(v, 12))
    return str(v)


def write_raw(rows: Iterable[RawRow], out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(RAW_FIELDS)
    for r in rows:
        w.writerow([r.strategy, r.seed_index, _fmt(r.seed_node), r.checkpoint, r.metric, _fmt(r.value), r.status])


def read_raw(source: IO[str]) -> list[RawRow]:
    rows = []
    for rec in csv.DictReader(source):
        rows.append(
            RawRow(
                rec["strategy"],
                int(rec["seed_index"]),
                int(rec["seed_node"]) if rec["seed_node"] else None,
                int(rec["checkpoint"]),
                rec["metric"],
                float(rec["value"]) if rec["value"] else None,
                rec["status"],
            )
        )
    return rows


def aggregate(rows: Iterable[RawRow]) -> list[AggregateRow]:
    """Mean and sample std (n-1) per (strategy, metric, checkpoint) over ok rows."""
    groups: dict[tuple[str, str, int], list[float]] = {}
    for r in rows:
        vals = groups.setdefault((r.strategy, r.metric, r.checkpoint), [])
        if r.status == OK and r.value is not None:
            vals.append(r.value)

    def order(key):
        s, mname, c = key
        return (STRATEGIES.index(s) if s in STRATEGIES else len(STRATEGIES), s,
                METRICS.index(mname) if mname in METRICS else len(METRICS), mname, c)

    out = []
    for key in sorted(groups, key=order):
        vals = sorted(groups[key])  # sorted so float sums do not depend on row order
        if vals:
            mean = math.fsum(vals) / len(vals)
            std = statistics.stdev(vals) if len(vals) > 1 else 0.0
        else:
            mean = std = math.nan
        out.append(AggregateRow(*key, mean, std, len(vals)))
    return out


def write_aggregate(rows: Iterable[AggregateRow], out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(AGG_FIELDS)
    for r in rows:
        w.writerow([r.strategy, r.metric, r.checkpoint, _fmt(r.mean), _fmt(r.std), r.count])


def write_gnuplot(rows: Sequence[AggregateRow], out: IO[str]) -> None:
    """One indexed block per (strategy, metric): checkpoint mean std."""
    blocks: dict[tuple[str, str], list[AggregateRow]] = {}
    for r in rows:
        blocks.setdefault((r.strategy, r.metric), []).append(r)
    for (s, mname), rs in blocks.items():
        out.write(f"# {s} {mname}\n")
        for r in rs:
            out.write(f"{r.checkpoint} {_fmt(r.mean)} {_fmt(r.std)}\n")
        out.write("\n\n")


@dataclass
class DatasetSummary:
    n: int
    m: int
    density: float
    avg_degree: float
    cc: float
    pl: float
    pl_method: str


def characteristic_path_length(g: Graph, exact_limit: int = 50_000, sources: int = 1000, rng=None) -> tuple[float, str]:
    """Mean shortest-path length over ordered pairs of the largest component."""
    from scipy.sparse.csgraph import shortest_path

    lcc = largest_component(g)
    if len(lcc) < 2:
        return 0.0, "exact"
    from .graph import induced_subgraph

    sub = induced_subgraph(g, lcc).graph
    a = sub.to_scipy()
    if sub.n <= exact_limit:
        srcs, method = np.arange(sub.n), "exact"
    else:
        srcs = np.random.default_rng(rng).choice(sub.n, size=sources, replace=False)
        method = f"sampled-{sources}"
    total = 0.0
    pairs = 0
    for chunk in np.array_split(srcs, max(1, len(srcs) // 256)):
        d = shortest_path(a, unweighted=True, directed=False, indices=chunk)
        total += d.sum()
        pairs += d.size - len(chunk)
    return float(total / pairs), method


def dataset_summary(g: Graph, rng=None) -> DatasetSummary:
    """Size, density, average degree, mean local clustering, path length.

    The clustering column averages over nodes of degree >= 2 only, the
    convention used for published dataset tables; the sample metric
    ``ccloc`` instead counts low-degree nodes as 0.
    """
    n, m = g.n, g.m
    cc_all = local_clustering(g)
    eligible = g.degrees >= 2
    cc = float(cc_all[eligible].mean()) if eligible.any() else 0.0
    pl, method = characteristic_path_length(g, rng=rng)
    return DatasetSummary(
        n=n,
        m=m,
        density=2 * m / (n * (n - 1)) if n > 1 else 0.0,
        avg_degree=2 * m / n if n else 0.0,
        cc=cc,
        pl=pl,
        pl_method=method,
    )


@dataclass(frozen=True)
class OutbreakRow:
    strategy: str
    fraction: float
    mean_size: float
    std: float
    runs: int
    censored: int


DEFAULT_FRACTIONS = tuple(round(0.1 * i, 1) for i in range(1, 11))


def outbreak_comparison(
    g: Graph,
    strategies: Sequence[str],
    K: int = DEFAULT_K,
    seeds: int = 100,
    rng=0,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    max_size: int | None = None,
    p: float = 0.7,
) -> list[OutbreakRow]:
    """Sample size each strategy needs to collect a fraction of the top-K hubs.

    For every run the sampler is driven until all targets are met or
    ``max_size`` nodes are sampled; unmet targets are censored at the size
    reached.
    """
    if not strategies:
        raise ValueError("no strategies given")
    top = set(top_k(g, K).tolist())
    needed = [math.ceil(round(f * K, 9)) for f in fractions]
    limit = max_size or g.n
    master = np.random.default_rng(rng)
    seed_nodes = draw_seed_nodes(g, seeds, master)
    run_seed = int(master.integers(2**63))
    out = []
    for s in strategies:
        sizes: list[list[int]] = [[] for _ in fractions]
        censored = [0] * len(fractions)
        for i, node in enumerate(seed_nodes):
            it = iter_sample(g, None if s == "acq" else node, SamplerConfig(s, p), run_rng(run_seed, s, i))
            reached: list[int | None] = [None] * len(fractions)
            found = size = 0
            for v in it:
                size += 1
                if v in top:
                    found += 1
                for j, need in enumerate(needed):
                    if reached[j] is None and found >= need:
                        reached[j] = size
                if all(r is not None for r in reached) or size >= limit:
                    break
            for j, r in enumerate(reached):
                if r is None:
                    censored[j] += 1
                    r = size
                sizes[j].append(r)
        for j, f in enumerate(fractions):
            vals = sizes[j]
            out.append(OutbreakRow(s, f, float(np.mean(vals)), statistics.stdev(vals) if len(vals) > 1 else 0.0,
                                   len(vals), censored[j]))
    return out


def write_outbreak(rows: Iterable[OutbreakRow], out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("strategy", "fraction", "mean_size", "std", "runs", "censored"))
    for r in rows:
        w.writerow([r.strategy, r.fraction, _fmt(r.mean_size), _fmt(r.std), r.runs, r.censored])
