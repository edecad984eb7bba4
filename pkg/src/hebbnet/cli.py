"""Command-line front end.

Subcommands:

* ``hetero``   associate one dataset with another, optionally grid-searching
               the learning rate / weight decay; writes per-pattern recall
               (``trial,pattern_index,mae``)
* ``curve``    per-pattern forgetting curve at a fixed learning rate
               (same CSV schema as ``hetero``)
* ``auto``     tied auto-encoder reconstruction (same CSV schema)
* ``classify`` one-hot classification; writes ``trial,epoch,test_error``
* ``grid``     emit the full grid-search table (``eta,omega,score``)
* ``verify``   run the oracle battery, TAP output, non-zero exit on failure

Dataset specifiers: ``rand:DxN``, ``randn:DxN``, ``idx:PATH[,labels=PATH]``,
``dense:PATH[,label-last]``. Generated datasets draw from streams derived
from ``--seed`` and the dataset's role (input/output/test), so a given
command line is bit-reproducible: identical flags give byte-identical CSV.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from .activations import (
    CrossEntropy,
    SquaredError,
    activation_from_name,
    error_term_from_name,
)
from .data import Dataset, gen_rand, gen_randn, load_dense, load_idx, one_hot
from .matlib import Rng, derive_seed, mean_rows
from .metrics import classification_error
from .model import init_autoencoder, init_layer, save_model
from .rules import Covariance, GradientDescent, Hebb, HebbianDescent
from .train import (
    BUILTIN_ETA_GRID,
    BUILTIN_OMEGA_GRID,
    HyperGrid,
    TrainConfig,
    grid_search,
    train_auto,
    train_hetero,
)
from .verify import format_tap, run_battery

# seed-stream tags for the dataset roles
_ROLE_TAGS = {"in": 101, "out": 102, "test": 103}


class CliError(ValueError):
    """User-facing command error: reported on stderr with exit code 1."""


def _parse_dims(spec: str) -> tuple[int, int]:
    try:
        d, n = spec.lower().split("x")
        return int(d), int(n)
    except ValueError:
        raise CliError(f"bad dataset size {spec!r}, expected DxN")


def load_dataset(spec: str, seed: int, role: str) -> Dataset:
    """Resolve a dataset specifier; generation seeds depend on the role."""
    kind, _, rest = spec.partition(":")
    if kind == "rand":
        d, n = _parse_dims(rest)
        return gen_rand(d, n, Rng(derive_seed(seed, _ROLE_TAGS[role])))
    if kind == "randn":
        d, n = _parse_dims(rest)
        return gen_randn(d, n, Rng(derive_seed(seed, _ROLE_TAGS[role])))
    if kind == "idx":
        path, _, opt = rest.partition(",")
        ds = load_idx(path)
        if opt:
            key, _, labels_path = opt.partition("=")
            if key != "labels":
                raise CliError(f"unknown idx option {opt!r}")
            ds.labels = load_idx(labels_path).labels
        return ds
    if kind == "dense":
        path, _, opt = rest.partition(",")
        if opt and opt != "label-last":
            raise CliError(f"unknown dense option {opt!r}")
        return load_dense(path, label_last=bool(opt))
    raise CliError(f"unknown dataset specifier {spec!r}")


def _fmt(value) -> str:
    return repr(float(value))


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", newline="") as f:
        f.write(header + "\n")
        for row in rows:
            f.write(",".join(str(c) if isinstance(c, int) else _fmt(c) for c in row) + "\n")


def _build_rule(name: str, args, X, T):
    if name == "hd":
        return HebbianDescent(error_term_from_name(args.error_term))
    if name == "gd":
        loss = CrossEntropy() if args.loss == "cross_entropy" else SquaredError()
        return GradientDescent(loss)
    if name == "hebb":
        return Hebb()
    if name == "cov":
        return Covariance(mean_rows(X), mean_rows(T))
    raise CliError(f"unknown rule {name!r}")


def _input_offsets(args, X) -> np.ndarray:
    if args.nu_input > 0.0:
        return np.full(X.shape[1], 0.5)  # adaptive offsets start at 0.5
    if args.centered:
        return mean_rows(X)
    return np.zeros(X.shape[1])


def _objective(spec: str) -> tuple[str, int]:
    if spec == "all":
        return "mae_all", 0
    if spec == "class":
        return "classification_error", 0
    if spec.startswith("last"):
        try:
            return "mae_last_k", int(spec[4:])
        except ValueError:
            pass
    raise CliError(f"bad objective {spec!r}, expected all, lastK, or class")


def _resolve_eta_omega(args, rule, data, cfg, model_factory, eval_data=None):
    """Run the grid search when requested, otherwise take the fixed values."""
    etas = list(BUILTIN_ETA_GRID) if args.grid_lr else ([args.eta] if args.eta is not None else None)
    if etas is None:
        raise CliError("give --eta or --grid-lr")
    omegas = list(BUILTIN_OMEGA_GRID) if args.grid_wd else [args.omega]
    if not args.grid_lr and not args.grid_wd:
        return args.eta, args.omega, None
    objective, last_k = _objective(args.objective)
    grid = HyperGrid(etas, omegas, objective, last_k or 20)
    result = grid_search(
        rule, data, grid, cfg, args.trials, model_factory, eval_data=eval_data, jobs=args.jobs
    )
    return result.best_eta, result.best_omega, result


def _add_common(p, *, rule_choices=("hd", "gd", "hebb", "cov")):
    p.add_argument("--rule", required=True, choices=rule_choices)
    p.add_argument("--error-term", default="difference",
                   choices=("difference", "sat_tanh", "leaky_hinge"))
    p.add_argument("--loss", default="squared", choices=("squared", "cross_entropy"))
    p.add_argument("--centered", action="store_true")
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--grid-lr", action="store_true", help="search the built-in 35-value learning-rate grid")
    p.add_argument("--grid-wd", action="store_true", help="search the built-in 20-value weight-decay grid")
    p.add_argument("--objective", default="all", help="all, lastK (e.g. last20), or class")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nu-input", type=float, default=0.0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--csv", required=True)
    p.add_argument("--save-model", default=None, help="write the first trial's final model here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hebbnet")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hetero", help="hetero-associative training")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", dest="out", required=True)
    p.add_argument("--act", default="sigmoid")
    _add_common(p)

    p = sub.add_parser("curve", help="per-pattern forgetting curve at fixed eta")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", dest="out", required=True)
    p.add_argument("--act", default="sigmoid")
    _add_common(p)

    p = sub.add_parser("auto", help="tied auto-encoder training")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--hidden", type=int, required=True)
    p.add_argument("--enc-act", default="identity")
    p.add_argument("--dec-act", default="sigmoid")
    p.add_argument("--nu-hidden", type=float, default=0.01)
    _add_common(p, rule_choices=("hd", "gd"))

    p = sub.add_parser("classify", help="one-hot classification")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--test", dest="test", default=None)
    p.add_argument("--act", default="softmax")
    _add_common(p)

    p = sub.add_parser("grid", help="emit the full grid-search score table")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", dest="out", required=True)
    p.add_argument("--act", default="sigmoid")
    _add_common(p)

    p = sub.add_parser("verify", help="run the oracle battery (TAP output)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=100)

    return ap


def _hetero_like(args, fixed_eta_only: bool) -> int:
    ds_in = load_dataset(args.inp, args.seed, "in")
    ds_out = load_dataset(args.out, args.seed, "out")
    X, T = ds_in.X, ds_out.X
    if X is None or T is None:
        raise CliError("both datasets must carry pattern matrices")
    if X.shape[0] != T.shape[0]:
        raise CliError("input and output datasets disagree on pattern count")
    rule = _build_rule(args.rule, args, X, T)
    act = activation_from_name(args.act)
    mu = _input_offsets(args, X)
    cfg = TrainConfig(
        eta=args.eta if args.eta is not None else 1.0,
        omega=args.omega,
        batch_size=args.batch,
        epochs=args.epochs,
        nu_input=args.nu_input,
        seed=args.seed,
        shuffle=args.shuffle,
    )
    factory = lambda rng: init_layer(X.shape[1], T.shape[1], act, mu, rng)  # noqa: E731
    if fixed_eta_only:
        if args.eta is None:
            raise CliError("curve needs a fixed --eta")
        eta, omega = args.eta, args.omega
    else:
        eta, omega, _ = _resolve_eta_omega(args, rule, (X, T), cfg, factory)
    rows = []
    final_model = None
    for trial in range(args.trials):
        run_cfg = replace(cfg, eta=eta, omega=omega, seed=derive_seed(args.seed, trial + 1))
        model = factory(Rng(derive_seed(args.seed, trial + 1)))
        trace = train_hetero(model, rule, X, T, run_cfg)
        if final_model is None:
            final_model = model
        rows.extend(
            (trial, idx, m) for idx, m in enumerate(trace.per_pattern_mae)
        )
    _write_csv(args.csv, "trial,pattern_index,mae", rows)
    if args.save_model:
        save_model(args.save_model, final_model)
    return 0


def _cmd_auto(args) -> int:
    ds = load_dataset(args.inp, args.seed, "in")
    X = ds.X
    if X is None:
        raise CliError("dataset carries no patterns")
    rule = _build_rule(args.rule, args, X, X)
    enc_act = activation_from_name(args.enc_act)
    dec_act = activation_from_name(args.dec_act)
    mu = _input_offsets(args, X)
    cfg = TrainConfig(
        eta=args.eta if args.eta is not None else 1.0,
        omega=args.omega,
        batch_size=args.batch,
        epochs=args.epochs,
        nu_input=args.nu_input,
        nu_hidden=args.nu_hidden,
        seed=args.seed,
        shuffle=args.shuffle,
    )
    factory = lambda rng: init_autoencoder(X.shape[1], args.hidden, enc_act, dec_act, mu, rng)  # noqa: E731
    eta, omega, _ = _resolve_eta_omega(args, rule, (X, None), cfg, factory)
    rows = []
    final_model = None
    for trial in range(args.trials):
        run_cfg = replace(cfg, eta=eta, omega=omega, seed=derive_seed(args.seed, trial + 1))
        model = factory(Rng(derive_seed(args.seed, trial + 1)))
        trace = train_auto(model, rule, X, run_cfg)
        if final_model is None:
            final_model = model
        rows.extend((trial, idx, m) for idx, m in enumerate(trace.per_pattern_mae))
    _write_csv(args.csv, "trial,pattern_index,mae", rows)
    if args.save_model:
        save_model(args.save_model, final_model)
    return 0


def _cmd_classify(args) -> int:
    ds = load_dataset(args.inp, args.seed, "in")
    if ds.X is None or ds.labels is None:
        raise CliError("classification needs patterns with labels")
    num_classes = int(ds.labels.max()) + 1
    T = one_hot(ds.labels, num_classes)
    if args.test:
        ds_test = load_dataset(args.test, args.seed, "test")
        if ds_test.X is None or ds_test.labels is None:
            raise CliError("test dataset needs patterns with labels")
        X_eval, labels_eval = ds_test.X, ds_test.labels
    else:
        X_eval, labels_eval = ds.X, ds.labels
    rule = _build_rule(args.rule, args, ds.X, T)
    act = activation_from_name(args.act)
    mu = _input_offsets(args, ds.X)
    cfg = TrainConfig(
        eta=args.eta if args.eta is not None else 1.0,
        omega=args.omega,
        batch_size=args.batch,
        epochs=1,
        nu_input=args.nu_input,
        seed=args.seed,
        shuffle=args.shuffle,
    )
    factory = lambda rng: init_layer(ds.X.shape[1], num_classes, act, mu, rng)  # noqa: E731
    eta, omega, _ = _resolve_eta_omega(
        args, rule, (ds.X, T), replace(cfg, epochs=args.epochs), factory,
        eval_data=(X_eval, labels_eval),
    )
    rows = []
    final_model = None
    for trial in range(args.trials):
        model = factory(Rng(derive_seed(args.seed, trial + 1)))
        for epoch in range(args.epochs):
            run_cfg = replace(
                cfg, eta=eta, omega=omega,
                seed=derive_seed(args.seed, trial + 1, epoch),
            )
            train_hetero(model, rule, ds.X, T, run_cfg)
            _, H = model.forward(X_eval)
            rows.append((trial, epoch, classification_error(H, labels_eval)))
        if final_model is None:
            final_model = model
    _write_csv(args.csv, "trial,epoch,test_error", rows)
    if args.save_model:
        save_model(args.save_model, final_model)
    return 0


def _cmd_grid(args) -> int:
    ds_in = load_dataset(args.inp, args.seed, "in")
    ds_out = load_dataset(args.out, args.seed, "out")
    X, T = ds_in.X, ds_out.X
    rule = _build_rule(args.rule, args, X, T)
    act = activation_from_name(args.act)
    mu = _input_offsets(args, X)
    cfg = TrainConfig(
        eta=1.0, omega=args.omega, batch_size=args.batch, epochs=args.epochs,
        nu_input=args.nu_input, seed=args.seed, shuffle=args.shuffle,
    )
    factory = lambda rng: init_layer(X.shape[1], T.shape[1], act, mu, rng)  # noqa: E731
    etas = list(BUILTIN_ETA_GRID) if args.grid_lr or args.eta is None else [args.eta]
    omegas = list(BUILTIN_OMEGA_GRID) if args.grid_wd else [args.omega]
    objective, last_k = _objective(args.objective)
    grid = HyperGrid(etas, omegas, objective, last_k or 20)
    result = grid_search(rule, (X, T), grid, cfg, args.trials, factory, jobs=args.jobs)
    _write_csv(args.csv, "eta,omega,score", result.table)
    return 0


def _cmd_verify(args) -> int:
    results = run_battery(seed=args.seed, instances=args.instances)
    print(format_tap(results))
    return 0 if all(r.ok for r in results) else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "hetero":
            return _hetero_like(args, fixed_eta_only=False)
        if args.command == "curve":
            return _hetero_like(args, fixed_eta_only=True)
        if args.command == "auto":
            return _cmd_auto(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "grid":
            return _cmd_grid(args)
        if args.command == "verify":
            return _cmd_verify(args)
        raise CliError(f"unknown command {args.command!r}")
    except SystemExit:
        raise
    except Exception as exc:  # runtime failure -> message on stderr, exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
