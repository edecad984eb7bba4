#!/usr/bin/env python3
"""Online hetero-association forgetting curves.

Stores D random pattern pairs one at a time with each of the four update
rules (learning rate grid-searched per rule on the last-20 objective) and
writes the per-pattern recall MAE curves to one CSV per rule, plus a
summary table to stdout. Feed the CSVs to any plotter to reproduce the
classic curves: a roughly flat error profile for Hebb/covariance versus a
monotone forgetting slope for the descent rule.
"""

import argparse
import os

import numpy as np

from hebbnet.activations import Difference, Sigmoid, SquaredError
from hebbnet.data import baseline_mae, gen_rand
from hebbnet.matlib import Rng, derive_seed, mean_rows
from hebbnet.model import init_layer
from hebbnet.rules import Covariance, GradientDescent, Hebb, HebbianDescent
from hebbnet.train import BUILTIN_ETA_GRID, HyperGrid, TrainConfig, grid_search, train_hetero


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--patterns", type=int, default=100)
    ap.add_argument("--dim", type=int, default=200)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--outdir", default="out_forgetting")
    args = ap.parse_args()

    X = gen_rand(args.patterns, args.dim, Rng(derive_seed(args.seed, 101))).X
    T = gen_rand(args.patterns, args.dim, Rng(derive_seed(args.seed, 102))).X
    mu = mean_rows(X)
    cfg = TrainConfig(eta=1.0, batch_size=1, epochs=1, seed=args.seed)
    factory = lambda rng: init_layer(args.dim, args.dim, Sigmoid(), mu, rng)  # noqa: E731
    grid = HyperGrid(BUILTIN_ETA_GRID, (0.0,), "mae_last_k", 20)
    rules = {
        "hd": HebbianDescent(Difference()),
        "gd": GradientDescent(SquaredError()),
        "hebb": Hebb(),
        "cov": Covariance(mean_rows(X), mean_rows(T)),
    }

    os.makedirs(args.outdir, exist_ok=True)
    print(f"baseline (mean predictor): {baseline_mae(T):.4f}")
    for name, rule in rules.items():
        res = grid_search(rule, (X, T), grid, cfg, args.trials, factory)
        curves = []
        for trial in range(args.trials):
            layer = factory(Rng(derive_seed(args.seed, trial + 1)))
            run_cfg = TrainConfig(eta=res.best_eta, batch_size=1, epochs=1,
                                  seed=derive_seed(args.seed, trial + 1))
            curves.append(train_hetero(layer, rule, X, T, run_cfg).per_pattern_mae)
        mean_curve = np.mean(curves, axis=0)
        path = os.path.join(args.outdir, f"curve_{name}.csv")
        with open(path, "w") as f:
            f.write("pattern_index,mae\n")
            for i, v in enumerate(mean_curve):
                f.write(f"{i},{v!r}\n")
        print(f"{name:>5}: eta*={res.best_eta:<8g} last20={res.best_score:.4f} "
              f"all={mean_curve.mean():.4f} -> {path}")


if __name__ == "__main__":
    main()
