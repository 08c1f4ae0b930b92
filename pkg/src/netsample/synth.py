"""Random graph models and Monte Carlo checks of the XS and SEC biases.

Two experiments live here:

* :func:`expansion_experiment` compares the expected number of novel
  neighbors gained by adding a frontier node from an unrepresented community
  versus one from a community already in the sample, on planted-partition
  graphs. The analytic sufficient condition is
  ``e_out < |V| e_in^2 / (n (|V| + e_in |S|))``.
* :func:`sec_order_experiment` checks that, under the expected-degree (Chung-Lu)
  model, the number of links a frontier node has into the sample grows with
  its expected degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .community import Partition
from .graph import Graph, neighborhood


@dataclass
class PlantedPartitionConfig:
    num_communities: int = 10
    community_size: int = 100
    e_in: int = 20
    e_out: int = 2
    seed: int | None = None
    repair_rounds: int = 50

    def __post_init__(self):
        if self.num_communities < 1 or self.community_size < 1:
            raise ValueError("need at least one community of at least one node")
        if not 0 <= self.e_in < self.community_size:
            raise ValueError("e_in must lie in [0, community_size)")
        if self.e_out < 0:
            raise ValueError("e_out must be nonnegative")
        if self.e_out > 0 and self.num_communities < 2:
            raise ValueError("outward edges need at least two communities")

    @property
    def n_nodes(self) -> int:
        return self.num_communities * self.community_size


@dataclass
class PlantedPartitionReport:
    dropped_stubs: int = 0  # parity fixes
    discarded_pairs: int = 0  # pairs left invalid after repair
    mean_in_degree: float = 0.0
    mean_out_degree: float = 0.0


def _pair_stubs(stubs: np.ndarray, rng, bad_pair, rounds: int) -> tuple[np.ndarray, int]:
    """Pair stubs uniformly at random, re-pairing conflicting stubs.

    ``bad_pair(u, v)`` flags pairs that are structurally invalid (self-loops,
    same-community outward stubs). Duplicated edges count as invalid too.
    Stubs in invalid pairs are reshuffled for up to ``rounds`` rounds; pairs
    still invalid after that are dropped (simple-graph projection).
    """
    stubs = rng.permutation(stubs)
    pairs = stubs.reshape(-1, 2)
    kept: set[tuple[int, int]] = set()
    pending = pairs
    leftover: list[int] = []
    for _ in range(rounds + 1):
        leftover = []
        for u, v in pending.tolist():
            e = (u, v) if u < v else (v, u)
            if bad_pair(u, v) or e in kept:
                leftover.extend(e)
            else:
                kept.add(e)
        if not leftover:
            break
        pending = rng.permutation(np.array(leftover, dtype=np.int64)).reshape(-1, 2)
    discarded = len(leftover) // 2
    return np.array(sorted(kept), dtype=np.int64).reshape(-1, 2), discarded


def _fix_parity(stubs: np.ndarray, owners: np.ndarray, rng) -> tuple[np.ndarray, int]:
    if len(stubs) % 2 == 0:
        return stubs, 0
    victim = owners[int(rng.integers(len(owners)))]
    idx = np.flatnonzero(stubs == victim)[0]
    return np.delete(stubs, idx), 1


def gen_planted_partition(cfg: PlantedPartitionConfig, rng=None):
    """Configuration-model graph with planted communities.

    Every node gets ``e_in`` stubs paired inside its community and ``e_out``
    stubs paired with stubs of other communities. Returns
    ``(graph, ground_truth_partition, report)``.
    """
    rng = np.random.default_rng(cfg.seed if rng is None else rng)
    C, n = cfg.num_communities, cfg.community_size
    comm = np.repeat(np.arange(C), n)
    report = PlantedPartitionReport()
    chunks = []
    for c in range(C):
        members = np.arange(c * n, (c + 1) * n)
        stubs, dropped = _fix_parity(np.repeat(members, cfg.e_in), members, rng)
        report.dropped_stubs += dropped
        if len(stubs):
            edges, bad = _pair_stubs(stubs, rng, lambda u, v: u == v, cfg.repair_rounds)
            chunks.append(edges)
            report.discarded_pairs += bad
    if cfg.e_out:
        everyone = np.arange(C * n)
        stubs, dropped = _fix_parity(np.repeat(everyone, cfg.e_out), everyone, rng)
        report.dropped_stubs += dropped
        edges, bad = _pair_stubs(stubs, rng, lambda u, v: comm[u] == comm[v], cfg.repair_rounds)
        chunks.append(edges)
        report.discarded_pairs += bad
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
    g = Graph.from_edges(C * n, edges)
    e = g.edges()
    same = comm[e[:, 0]] == comm[e[:, 1]]
    report.mean_in_degree = 2 * int(same.sum()) / g.n
    report.mean_out_degree = 2 * int((~same).sum()) / g.n
    return g, Partition.from_labels(comm.tolist()), report


@dataclass
class ChungLuConfig:
    weights: Sequence[float]
    seed: int | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.size == 0:
            raise ValueError("Chung-Lu model needs at least one weight")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        self.weights = w

    @property
    def capped(self) -> bool:
        """True when some pair probability ``w_i w_j / sum(w)`` exceeds 1."""
        w = np.sort(self.weights)
        return len(w) > 1 and w[-1] * w[-2] > w.sum()


def gen_chung_lu(cfg: ChungLuConfig | Sequence[float], rng=None) -> Graph:
    """Expected-degree random graph: pair (i, j) is an edge with prob min(1, w_i w_j / sum w).

    Uses geometric skipping over weight-sorted nodes (Miller and Hagberg), so
    the cost is linear in n + m while every pair stays independent.
    """
    if not isinstance(cfg, ChungLuConfig):
        cfg = ChungLuConfig(cfg)
    rng = np.random.default_rng(cfg.seed if rng is None else rng)
    w = cfg.weights
    n = len(w)
    order = np.argsort(-w, kind="stable")
    ws = w[order].tolist()
    total = float(w.sum())
    edges: list[tuple[int, int]] = []
    buf = rng.random(4096).tolist()
    bi = 0
    for u in range(n - 1):
        v = u + 1
        wu = ws[u]
        p = min(wu * ws[v] / total, 1.0)
        while v < n and p > 0:
            if p != 1.0:
                if bi == len(buf):
                    buf, bi = rng.random(4096).tolist(), 0
                r = buf[bi]
                bi += 1
                v += int(math.log1p(-r) / math.log1p(-p))
            if v < n:
                q = min(wu * ws[v] / total, 1.0)
                if bi == len(buf):
                    buf, bi = rng.random(4096).tolist(), 0
                r = buf[bi]
                bi += 1
                if r < q / p:
                    edges.append((u, v))
                p = q
                v += 1
    if not edges:
        return Graph.from_edges(n, [])
    e = order[np.array(edges, dtype=np.int64)]
    return Graph.from_edges(n, e)


def power_law_weights(
    n: int,
    gamma: float = 2.5,
    avg_degree: float = 10.0,
    max_degree: float | None = None,
    min_degree: float | None = None,
) -> np.ndarray:
    """Weights ``w_i ~ (i + i0)^(-1/(gamma-1))`` scaled to ``avg_degree``.

    ``i0`` is chosen so the heaviest weight is about ``max_degree``
    (default ``sqrt(n * avg_degree)``, the largest value that keeps all
    pair probabilities at most 1). ``min_degree`` clips the light end.
    """
    if gamma <= 2:
        raise ValueError("gamma must exceed 2 for a finite mean degree")
    alpha = 1.0 / (gamma - 1.0)
    if max_degree is None:
        max_degree = math.sqrt(n * avg_degree)
    ranks = np.arange(n, dtype=float)
    # pick the offset i0 by bisection so that w_0 / mean(w) = max_degree / avg_degree
    target = max_degree / avg_degree
    lo, hi = 0.0, float(n)
    for _ in range(200):
        i0 = 0.5 * (lo + hi)
        raw = (ranks + i0 + 1.0) ** -alpha
        ratio = raw[0] / raw.mean()
        if ratio > target:
            lo = i0
        else:
            hi = i0
    w = raw * (avg_degree / raw.mean())
    if min_degree is not None:
        w = np.maximum(w, min_degree)
    return w


def conductance(g: Graph, s) -> float:
    """Cut edges of ``s`` over the smaller of the two sides' degree sums."""
    members = np.zeros(g.n, dtype=bool)
    members[np.fromiter(set(s), dtype=np.int64)] = True
    if not members.any() or members.all():
        raise ValueError("conductance needs a proper nonempty subset")
    a_s = int(g.degrees[members].sum())
    a_rest = int(g.degrees[~members].sum())
    denom = min(a_s, a_rest)
    if denom == 0:
        raise ValueError("conductance denominator is zero")
    e = g.edges()
    cut = int(np.count_nonzero(members[e[:, 0]] != members[e[:, 1]]))
    return cut / denom


def expansion_bound(n_nodes: int, community_size: int, e_in: float, sample_size: int) -> float:
    """Largest e_out for which a new-community node is guaranteed the larger expected expansion."""
    return n_nodes * e_in**2 / (community_size * (n_nodes + e_in * sample_size))


def _novel_count(adj, v: int, disc: np.ndarray) -> int:
    return sum(1 for u in adj[v] if not disc[u])


@dataclass
class ExpansionTrialResult:
    mean_x_new: float
    mean_x_curr: float
    se_x_new: float
    se_x_curr: float
    trials: int
    skipped: int
    bound: float
    e_out: int
    mean_in_degree: float
    mean_out_degree: float
    diff_mean: float = 0.0
    diff_se: float = 0.0

    @property
    def condition_holds(self) -> bool:
        return self.e_out < self.bound

    def confidence_interval(self, z: float = 2.576) -> tuple[float, float]:
        """Interval for ``mean_x_new - mean_x_curr`` (default 99%)."""
        return (self.diff_mean - z * self.diff_se, self.diff_mean + z * self.diff_se)

    def new_beats_current(self, z: float = 2.576) -> bool:
        return self.confidence_interval(z)[0] > 0


def _mean_se(xs: list[float]) -> tuple[float, float]:
    a = np.asarray(xs, dtype=float)
    if a.size == 0:
        return math.nan, math.nan
    se = a.std(ddof=1) / math.sqrt(a.size) if a.size > 1 else 0.0
    return float(a.mean()), float(se)


def expansion_experiment(
    cfg: PlantedPartitionConfig,
    sample_size: int,
    trials: int,
    rng=None,
    extra_current: int = 0,
    require_frontier: bool = True,
) -> ExpansionTrialResult:
    """Monte Carlo estimate of the novel-neighbor counts X_new and X_curr.

    Per trial: draw a planted-partition graph; build S from one node of
    community 0 (plus ``extra_current`` more from it) and the remaining
    nodes one per community 1, 2, ...; then pick a uniformly random frontier
    node in community 0 (current) and one in a community with no S node
    (new), and count each one's neighbors outside S | N(S).

    With ``require_frontier=False`` the candidates are any non-S nodes of
    those communities, adjacent to S or not.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    C, n = cfg.num_communities, cfg.community_size
    n_other = sample_size - 1 - extra_current
    if sample_size < 1 or n_other < 0:
        raise ValueError("sample size must cover the current-community nodes")
    if n_other > C - 2:
        raise ValueError("sample would leave no community unrepresented")
    if sample_size >= cfg.n_nodes:
        raise ValueError("sample must be smaller than the graph")
    master = np.random.default_rng(cfg.seed if rng is None else rng)
    seeds = master.integers(2**63, size=trials)
    x_new, x_curr, diffs = [], [], []
    in_deg, out_deg = [], []
    skipped = 0
    for t in range(trials):
        trng = np.random.default_rng(int(seeds[t]))
        g, part, rep = gen_planted_partition(cfg, trng)
        in_deg.append(rep.mean_in_degree)
        out_deg.append(rep.mean_out_degree)
        s = list((trng.choice(n, size=1 + extra_current, replace=False)).tolist())
        for c in range(1, 1 + n_other):
            s.append(c * n + int(trng.integers(n)))
        frontier = neighborhood(g, s)
        disc = np.zeros(g.n, dtype=bool)
        disc[s] = True
        disc[list(frontier)] = True
        comm = part.assignment
        represented = set(comm[s].tolist())
        pool = frontier if require_frontier else set(range(g.n)).difference(s)
        curr = [v for v in pool if comm[v] == 0]
        new = [v for v in pool if comm[v] not in represented]
        if not curr or not new:
            skipped += 1
            continue
        curr.sort()
        new.sort()
        vc = curr[int(trng.integers(len(curr)))]
        vn = new[int(trng.integers(len(new)))]
        a, b = _novel_count(g.adj, vn, disc), _novel_count(g.adj, vc, disc)
        x_new.append(a)
        x_curr.append(b)
        diffs.append(a - b)
    mn, sn = _mean_se(x_new)
    mc, sc = _mean_se(x_curr)
    md, sd = _mean_se(diffs)
    return ExpansionTrialResult(
        mean_x_new=mn,
        mean_x_curr=mc,
        se_x_new=sn,
        se_x_curr=sc,
        trials=trials,
        skipped=skipped,
        bound=expansion_bound(cfg.n_nodes, n, cfg.e_in, sample_size),
        e_out=cfg.e_out,
        mean_in_degree=float(np.mean(in_deg)),
        mean_out_degree=float(np.mean(out_deg)),
        diff_mean=md,
        diff_se=sd,
    )


@dataclass
class SecOrderReport:
    """Induced degree of frontier candidates, grouped by expected degree."""

    weight_classes: list[float]
    mean_induced: dict[float, float]  # weight -> mean over trials of the per-trial class mean
    se_induced: dict[float, float]
    pair_agreement: float  # fraction of (heavier, lighter) frontier pairs ordered as expected
    trials: int
    skipped: int
    class_trials: dict[float, int] = field(default_factory=dict)
    diff_mean: float = math.nan  # heaviest minus lightest class, paired per trial
    diff_se: float = math.nan


def sec_order_experiment(
    weights: Sequence[float],
    sample_nodes: Sequence[int],
    trials: int,
    rng=None,
) -> SecOrderReport:
    """Monte Carlo check that frontier nodes with larger weight have more links into S.

    ``sample_nodes`` fixes S by index into ``weights``. Every other node that
    lands in N(S) is a candidate; its induced degree in ``G[S + {v}]`` is the
    number of its neighbors in S.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    w = np.asarray(weights, dtype=float)
    s = sorted(set(int(i) for i in sample_nodes))
    in_s = np.zeros(len(w), dtype=bool)
    in_s[s] = True
    cand = np.flatnonzero(~in_s)
    classes = sorted(set(w[cand].tolist()))
    if len(cand) < 2:
        raise ValueError("need at least two candidate nodes outside the sample")
    master = np.random.default_rng(rng)
    seeds = master.integers(2**63, size=trials)
    per_class: dict[float, list[float]] = {c: [] for c in classes}
    diffs: list[float] = []
    agree = total = 0
    skipped = 0
    for t in range(trials):
        g = gen_chung_lu(ChungLuConfig(w), np.random.default_rng(int(seeds[t])))
        adj = g.adj
        induced = {int(v): sum(1 for u in adj[v] if in_s[u]) for v in cand.tolist()}
        front = [v for v, d in induced.items() if d > 0]
        if not s or len(front) < 2:
            skipped += 1
            if not s:
                for c in classes:
                    per_class[c].append(0.0)
            continue
        by_class: dict[float, list[int]] = {}
        for v in front:
            by_class.setdefault(float(w[v]), []).append(induced[v])
        for c, ds in by_class.items():
            per_class[c].append(float(np.mean(ds)))
        if classes[0] in by_class and classes[-1] in by_class:
            diffs.append(float(np.mean(by_class[classes[-1]]) - np.mean(by_class[classes[0]])))
        fw = np.array([w[v] for v in front])
        fd = np.array([induced[v] for v in front])
        heavier = fw[:, None] > fw[None, :]
        agree += int(np.count_nonzero(heavier & (fd[:, None] >= fd[None, :])))
        total += int(np.count_nonzero(heavier))
    stats = {c: _mean_se(v) for c, v in per_class.items()}
    dm, ds_ = _mean_se(diffs)
    return SecOrderReport(
        weight_classes=classes,
        mean_induced={c: stats[c][0] for c in classes},
        se_induced={c: stats[c][1] for c in classes},
        pair_agreement=agree / total if total else math.nan,
        trials=trials,
        skipped=skipped,
        class_trials={c: len(per_class[c]) for c in classes},
        diff_mean=dm,
        diff_se=ds_,
    )
