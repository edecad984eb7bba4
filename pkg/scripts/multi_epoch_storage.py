#!/usr/bin/env python3
"""Multi-epoch storage comparison.

Trains the same association for many epochs with the descent rule and
with gradient descent across a set of activation functions, and prints
the final all-pattern MAE per combination. The step activation is the
interesting row: its derivative is identically zero, so gradient descent
cannot move while the descent rule still converges.
"""

import argparse

from hebbnet.activations import (
    Difference,
    ExpLin,
    Identity,
    Rectifier,
    Sigmoid,
    SquaredError,
    Step,
)
from hebbnet.data import gen_rand
from hebbnet.matlib import Rng, derive_seed, mean_rows
from hebbnet.model import init_layer
from hebbnet.rules import GradientDescent, HebbianDescent
from hebbnet.train import HyperGrid, TrainConfig, grid_search


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--patterns", type=int, default=100)
    ap.add_argument("--dim", type=int, default=200)
    ap.add_argument("--epochs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--etas", type=float, nargs="+",
                    default=[20.0, 4.0, 1.0, 0.2, 0.04, 0.008])
    args = ap.parse_args()

    X = gen_rand(args.patterns, args.dim, Rng(derive_seed(args.seed, 101))).X
    T = gen_rand(args.patterns, args.dim, Rng(derive_seed(args.seed, 102))).X
    mu = mean_rows(X)
    cfg = TrainConfig(eta=1.0, batch_size=1, epochs=args.epochs, seed=args.seed)
    grid = HyperGrid(tuple(args.etas), (0.0,), "mae_all")

    print(f"{'activation':<12} {'descent rule':>14} {'gradient descent':>18}")
    for act in (Identity(), ExpLin(), Rectifier(), Sigmoid(), Step()):
        factory = lambda rng: init_layer(args.dim, args.dim, act, mu, rng)  # noqa: E731
        hd = grid_search(HebbianDescent(Difference()), (X, T), grid, cfg, 1, factory)
        gd = grid_search(GradientDescent(SquaredError()), (X, T), grid, cfg, 1, factory)
        print(f"{act.name:<12} {hd.best_score:>14.6f} {gd.best_score:>18.6f}")


if __name__ == "__main__":
    main()
