#!/usr/bin/env python3
"""Tied auto-encoder: reconstruction error and hidden-activity profile.

Trains the same auto-encoder with the descent rule and with the full
tied-weight gradient, then prints per-unit mean activities. The descent
rule keeps every linear hidden unit mean-free (the hidden offsets absorb
the first-order statistics), while the gradient solution spreads the unit
means out.
"""

import argparse

import numpy as np

from hebbnet.activations import Difference, Identity, Sigmoid, SquaredError
from hebbnet.data import baseline_mae, gen_rand
from hebbnet.matlib import Rng, derive_seed, mean_rows
from hebbnet.model import init_autoencoder
from hebbnet.rules import GradientDescent, HebbianDescent
from hebbnet.train import HyperGrid, TrainConfig, grid_search, train_auto


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--patterns", type=int, default=500)
    ap.add_argument("--dim", type=int, default=50)
    ap.add_argument("--hidden", type=int, default=20)
    ap.add_argument("--epochs", type=int, default=100)
    ap.add_argument("--batch", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    X = gen_rand(args.patterns, args.dim, Rng(derive_seed(args.seed, 301))).X
    mu = mean_rows(X)
    cfg = TrainConfig(eta=1.0, batch_size=args.batch, epochs=args.epochs,
                      nu_hidden=0.01, seed=args.seed)
    factory = lambda rng: init_autoencoder(  # noqa: E731
        args.dim, args.hidden, Identity(), Sigmoid(), mu, rng)
    grid = HyperGrid((4.0, 2.0, 1.0, 0.6, 0.2, 0.1, 0.06, 0.02), (0.0,), "mae_all")

    print(f"baseline (mean predictor): {baseline_mae(X):.4f}")
    for name, rule in (("descent rule", HebbianDescent(Difference())),
                       ("gradient", GradientDescent(SquaredError()))):
        res = grid_search(rule, (X, None), grid, cfg, 1, factory)
        ae = factory(Rng(derive_seed(args.seed, 1)))
        run_cfg = TrainConfig(eta=res.best_eta, batch_size=args.batch,
                              epochs=args.epochs, nu_hidden=0.01,
                              seed=derive_seed(args.seed, 1))
        train_auto(ae, rule, X, run_cfg)
        unit_means = ae.forward(X).h.mean(axis=0)
        print(f"{name}: eta*={res.best_eta:g} reconstruction mae={res.best_score:.4f} "
              f"mean hidden activity={unit_means.mean():+.4f} "
              f"spread across units={unit_means.std():.4f}")
        print("  per-unit means:", np.round(unit_means, 3).tolist())


if __name__ == "__main__":
    main()
