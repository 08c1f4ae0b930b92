"""Command line interface: ``netsample <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial results
(exhausted samples or censored runs).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
from contextlib import contextmanager

import numpy as np

from . import community, harness, synth
from .graph import GraphFormatError, read_graph, write_edge_list
from .samplers import EXHAUSTED, STRATEGIES, SamplerConfig, sample

log = logging.getLogger("netsample")

EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _node_id(labels: list[str], raw: str) -> int:
    try:
        return labels.index(raw)
    except ValueError:
        raise GraphFormatError(f"node {raw!r} does not occur in the graph") from None


def cmd_sample(args) -> int:
    g, labels = read_graph(args.graph)
    seed = None
    if args.strategy != "acq":
        if args.seed_node is None:
            raise UsageError("--seed-node is required for link-trace strategies")
        seed = _node_id(labels, args.seed_node)
    s = sample(g, seed, args.k, SamplerConfig(args.strategy, args.p), args.rng)
    with _output(args.out) as out:
        for v in s.trace:
            out.write(f"{labels[v]}\n")
    if s.status == EXHAUSTED:
        log.warning("only %d of %d nodes reachable", len(s.trace), args.k)
        return EXIT_PARTIAL
    return 0


def cmd_eval(args) -> int:
    cfg = harness.load_config(args.config) if args.config else harness.ExperimentConfig()
    overrides = {"graph": args.graph, "out": args.out}
    if args.seeds is not None:
        overrides["seeds"] = args.seeds
    if args.rng is not None:
        overrides["master_seed"] = args.rng
    if args.sample_degrees is not None:
        overrides["degree_mode"] = args.sample_degrees
    if args.all_components:
        overrides["use_largest_component"] = False
    cfg = dataclasses.replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    rows = harness.run_experiment(cfg)
    with _output(cfg.out) as out:
        harness.write_raw(rows, out)
    bad = sum(r.status != "ok" for r in rows)
    if bad:
        log.warning("%d rows without a value (exhausted or failed runs)", bad)
        return EXIT_PARTIAL
    return 0


def cmd_aggregate(args) -> int:
    with open(args.input, newline="") as fh:
        rows = harness.aggregate(harness.read_raw(fh))
    with _output(args.out) as out:
        harness.write_aggregate(rows, out)
    if args.gnuplot:
        with open(args.gnuplot, "w") as fh:
            harness.write_gnuplot(rows, fh)
    return 0


def cmd_communities(args) -> int:
    g, labels = read_graph(args.graph)
    part = community.detect_rak(g, args.rng) if args.algo == "rak" else community.detect_cnm(g)
    with _output(args.out) as out:
        out.write(f"# {args.algo}: {part.count} communities, modularity {community.modularity(g, part):.6f}\n"
                  if g.m else f"# {args.algo}: {part.count} communities\n")
        community.write_partition(part, out, labels)
    return 0


def cmd_synth(args) -> int:
    if args.model == "planted":
        cfg = synth.PlantedPartitionConfig(args.communities, args.size, args.e_in, args.e_out, args.rng)
        g, part, report = synth.gen_planted_partition(cfg)
        log.info("realized mean in/out degree %.3f / %.3f (%d stubs dropped, %d pairs discarded)",
                 report.mean_in_degree, report.mean_out_degree, report.dropped_stubs, report.discarded_pairs)
        if args.partition_out:
            with open(args.partition_out, "w") as fh:
                community.write_partition(part, fh)
    else:
        if args.weights:
            w = np.loadtxt(args.weights, ndmin=1)
        else:
            w = synth.power_law_weights(args.n, args.gamma, args.avg_degree, args.max_degree, args.min_degree)
        cfg = synth.ChungLuConfig(w, args.rng)
        if cfg.capped:
            log.warning("some pair probabilities exceed 1 and are capped")
        g = synth.gen_chung_lu(cfg)
    with _output(args.out) as out:
        write_edge_list(g, out)
    return 0


def _write_row(out, row: dict) -> None:
    w = csv.DictWriter(out, fieldnames=list(row), lineterminator="\n")
    w.writeheader()
    w.writerow(row)


def cmd_theory(args) -> int:
    if args.check == "xs-expansion":
        cfg = synth.PlantedPartitionConfig(args.communities, args.size, args.e_in, args.e_out)
        res = synth.expansion_experiment(cfg, args.sample_size, args.trials, args.rng, args.extra_current,
                                         require_frontier=not args.any_candidate)
        lo, hi = res.confidence_interval()
        row = {
            "n_nodes": cfg.n_nodes, "communities": cfg.num_communities, "community_size": cfg.community_size,
            "e_in": cfg.e_in, "e_out": cfg.e_out, "sample_size": args.sample_size,
            "extra_current": args.extra_current, "bound": res.bound, "condition_holds": res.condition_holds,
            "mean_x_new": res.mean_x_new, "mean_x_curr": res.mean_x_curr, "diff": res.diff_mean,
            "ci99_low": lo, "ci99_high": hi, "trials": res.trials, "skipped": res.skipped,
            "realized_in_degree": res.mean_in_degree, "realized_out_degree": res.mean_out_degree,
        }
    else:
        w = [args.sample_weight] * args.sample_size + [args.heavy] * args.n_heavy + [args.light] * args.n_light
        rep = synth.sec_order_experiment(w, range(args.sample_size), args.trials, args.rng)
        hi_c, lo_c = rep.weight_classes[-1], rep.weight_classes[0]
        row = {
            "sample_size": args.sample_size, "sample_weight": args.sample_weight,
            "heavy": args.heavy, "n_heavy": args.n_heavy, "light": args.light, "n_light": args.n_light,
            "mean_induced_heavy": rep.mean_induced[hi_c], "se_heavy": rep.se_induced[hi_c],
            "mean_induced_light": rep.mean_induced[lo_c], "se_light": rep.se_induced[lo_c],
            "diff": rep.diff_mean, "diff_se": rep.diff_se, "pair_agreement": rep.pair_agreement,
            "trials": rep.trials, "skipped": rep.skipped,
        }
    with _output(args.out) as out:
        _write_row(out, row)
    return 0


def cmd_summary(args) -> int:
    g, _ = read_graph(args.graph)
    s = harness.dataset_summary(g, args.rng)
    with _output(args.out) as out:
        _write_row(out, dataclasses.asdict(s))
    return 0


def cmd_outbreak(args) -> int:
    g, _ = read_graph(args.graph)
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for s in strategies:
        if s not in STRATEGIES:
            raise UsageError(f"unknown strategy {s!r}")
    K = min(args.K, max(1, g.n // 10)) if args.scale_k else args.K
    rows = harness.outbreak_comparison(g, strategies, K, args.seeds, args.rng, max_size=args.max_size, p=args.p)
    with _output(args.out) as out:
        harness.write_outbreak(rows, out)
    return EXIT_PARTIAL if any(r.censored for r in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="netsample", description="Link-trace network sampling experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="print one sample trace")
    s.add_argument("--graph", required=True)
    s.add_argument("--strategy", required=True, choices=STRATEGIES)
    s.add_argument("--seed-node", help="raw node label to start from")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--rng", type=int, default=0)
    s.add_argument("--p", type=float, default=0.7)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("eval", help="run the multi-seed experiment, write raw rows")
    s.add_argument("--graph")
    s.add_argument("--config")
    s.add_argument("--out")
    s.add_argument("--seeds", type=int)
    s.add_argument("--rng", type=int)
    s.add_argument("--sample-degrees", choices=("induced", "original"))
    s.add_argument("--all-components", action="store_true", help="draw seeds from every component")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("aggregate", help="mean/std curves from raw rows")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.add_argument("--gnuplot")
    s.set_defaults(func=cmd_aggregate)

    s = sub.add_parser("communities", help="detect communities")
    s.add_argument("--graph", required=True)
    s.add_argument("--algo", choices=("rak", "cnm"), required=True)
    s.add_argument("--rng", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_communities)

    s = sub.add_parser("synth", help="generate a synthetic graph")
    models = s.add_subparsers(dest="model", required=True, parser_class=_Parser)
    pp = models.add_parser("planted")
    pp.add_argument("--communities", type=int, default=10)
    pp.add_argument("--size", type=int, default=100)
    pp.add_argument("--e-in", type=int, default=20)
    pp.add_argument("--e-out", type=int, default=2)
    pp.add_argument("--partition-out")
    cl = models.add_parser("chunglu")
    cl.add_argument("--weights", help="file with one weight per line")
    cl.add_argument("--n", type=int, default=20000)
    cl.add_argument("--gamma", type=float, default=2.5)
    cl.add_argument("--avg-degree", type=float, default=10.0)
    cl.add_argument("--max-degree", type=float)
    cl.add_argument("--min-degree", type=float)
    for mp in (pp, cl):
        mp.add_argument("--rng", type=int, default=0)
        mp.add_argument("--out")
        mp.set_defaults(func=cmd_synth)

    s = sub.add_parser("theory", help="Monte Carlo checks of the XS and SEC biases")
    checks = s.add_subparsers(dest="check", required=True, parser_class=_Parser)
    xe = checks.add_parser("xs-expansion")
    xe.add_argument("--communities", type=int, default=10)
    xe.add_argument("--size", type=int, default=100)
    xe.add_argument("--e-in", type=int, default=20)
    xe.add_argument("--e-out", type=int, default=2)
    xe.add_argument("--sample-size", type=int, default=5)
    xe.add_argument("--extra-current", type=int, default=0)
    xe.add_argument("--trials", type=int, default=1000)
    xe.add_argument("--any-candidate", action="store_true", help="do not require candidates to be adjacent to S")
    so = checks.add_parser("sec-order")
    so.add_argument("--sample-size", type=int, default=20)
    so.add_argument("--sample-weight", type=float, default=5.0)
    so.add_argument("--heavy", type=float, default=8.0)
    so.add_argument("--n-heavy", type=int, default=10)
    so.add_argument("--light", type=float, default=2.0)
    so.add_argument("--n-light", type=int, default=10)
    so.add_argument("--trials", type=int, default=1000)
    for cp in (xe, so):
        cp.add_argument("--rng", type=int, default=0)
        cp.add_argument("--out")
        cp.set_defaults(func=cmd_theory)

    s = sub.add_parser("summary", help="dataset statistics")
    s.add_argument("--graph", required=True)
    s.add_argument("--rng", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_summary)

    s = sub.add_parser("outbreak", help="sample size needed to find the top-K hubs")
    s.add_argument("--graph", required=True)
    s.add_argument("--strategies", default="sec,acq")
    s.add_argument("--K", type=int, default=100)
    s.add_argument("--scale-k", action="store_true")
    s.add_argument("--seeds", type=int, default=100)
    s.add_argument("--rng", type=int, default=0)
    s.add_argument("--max-size", type=int)
    s.add_argument("--p", type=float, default=0.7)
    s.add_argument("--out")
    s.set_defaults(func=cmd_outbreak)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"netsample: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, OSError, ValueError, KeyError, IndexError) as exc:
        print(f"netsample: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
