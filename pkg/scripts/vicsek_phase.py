#!/usr/bin/env python3
"""Order parameter of the Vicsek flock versus noise amplitude.

Writes CSV: eta, phi_mean, phi_stderr.
"""

import argparse
import csv
import sys

import numpy as np

from netctl.collective import vicsek_order_parameter


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=300, help="number of agents")
    ap.add_argument("--box", type=float, default=5.0, help="box side length")
    ap.add_argument("--speed", type=float, default=0.03)
    ap.add_argument("--radius", type=float, default=1.0)
    ap.add_argument("--eta-max", type=float, default=5.0)
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--steps", type=int, default=400)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--seed0", type=int, default=0, help="first RNG seed")
    ap.add_argument("--output", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()

    w = csv.writer(args.output)
    w.writerow(["eta", "phi_mean", "phi_stderr"])
    for eta in np.linspace(0.0, args.eta_max, args.points):
        phis = [
            vicsek_order_parameter(
                args.n, args.box, args.speed, args.radius, float(eta),
                args.steps, seed=args.seed0 + s,
            ).mean
            for s in range(args.seeds)
        ]
        se = (float(np.std(phis, ddof=1) / np.sqrt(args.seeds))
              if args.seeds > 1 else 0.0)
        w.writerow([f"{eta:.3f}", f"{np.mean(phis):.4f}", f"{se:.4f}"])


if __name__ == "__main__":
    main()
