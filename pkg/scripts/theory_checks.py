#!/usr/bin/env python3
"""Monte Carlo checks of the XS expansion inequality and SEC degree ordering.

Sweeps e_out around the bound on the planted-partition model, then varies
the number of S nodes in the current community, then runs the two-class
expected-degree setup.
"""

import argparse

from netsample.synth import PlantedPartitionConfig, expansion_experiment, sec_order_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--rng", type=int, default=0)
    args = ap.parse_args()

    print("e_out  bound  X_new   X_curr  99% CI of difference")
    for e_out in (0, 1, 2, 4, 8, 20, 40):
        cfg = PlantedPartitionConfig(10, 100, 20, e_out)
        res = expansion_experiment(cfg, 5, args.trials, args.rng, require_frontier=e_out > 0)
        lo, hi = res.confidence_interval()
        print(f"{e_out:5d} {res.bound:6.2f} {res.mean_x_new:7.2f} {res.mean_x_curr:7.2f}  ({lo:.2f}, {hi:.2f})"
              f"{'' if res.condition_holds else '  [above bound]'}")

    print("\nextra S nodes in the current community (e_out=2)")
    for extra in (0, 1, 2, 4):
        res = expansion_experiment(PlantedPartitionConfig(10, 100, 20, 2), 5 + extra, args.trials, args.rng, extra)
        print(f"  +{extra}: X_new {res.mean_x_new:.2f}  X_curr {res.mean_x_curr:.2f}  diff {res.diff_mean:.2f}")

    rep = sec_order_experiment([5.0] * 20 + [8.0] * 10 + [2.0] * 10, range(20), args.trials, args.rng)
    print("\nSEC ordering, |S|=20 at weight 5")
    for c in rep.weight_classes:
        print(f"  weight {c:g}: mean links into S {rep.mean_induced[c]:.3f} (se {rep.se_induced[c]:.3f})")
    print(f"  heavy - light = {rep.diff_mean:.3f} ({rep.diff_mean / rep.diff_se:.1f} SE), "
          f"pair agreement {rep.pair_agreement:.3f}")


if __name__ == "__main__":
    main()
