#!/usr/bin/env python3
"""Sample size each strategy needs to find a growing share of the top-K hubs."""

import argparse

import numpy as np

from netsample import gen_chung_lu, power_law_weights
from netsample.graph import read_graph
from netsample.harness import outbreak_comparison


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", help="edge list; a synthetic power-law graph if omitted")
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--strategies", default="sec,xs,ds,bfs,rw,acq")
    ap.add_argument("--K", type=int, default=100)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--rng", type=int, default=0)
    args = ap.parse_args()

    if args.graph:
        g, _ = read_graph(args.graph)
    else:
        g = gen_chung_lu(power_law_weights(args.n), np.random.default_rng(args.rng))
    rows = outbreak_comparison(g, args.strategies.split(","), args.K, args.seeds, args.rng)
    fractions = sorted({r.fraction for r in rows})
    print("strategy " + " ".join(f"{f:>7}" for f in fractions))
    for s in args.strategies.split(","):
        sizes = {r.fraction: r.mean_size for r in rows if r.strategy == s}
        print(f"{s:<8} " + " ".join(f"{sizes[f]:7.1f}" for f in fractions))
    if any(r.censored for r in rows):
        print("note: some runs were censored at the graph size")


if __name__ == "__main__":
    main()
