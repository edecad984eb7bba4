"""Online, mini-batch, and multi-epoch training with offset maintenance,
plus the hyperparameter grid search.

Conventions shared by both loops:

* each batch step is forward -> rule update (averaged over the batch) ->
  apply_update -> offset EMA (offsets always move after the parameter
  update, never before);
* input offsets stay frozen unless ``nu_input > 0``; no bias
  compensation is applied when offsets move;
* presentation order is the dataset order unless ``shuffle`` is set, in
  which case a Fisher-Yates permutation is drawn per epoch from the
  config seed;
* the per-pattern error curve stored on the trace is the recall of the
  *final* model, evaluated once after training.

Seed streams: trial t of a grid search uses ``derive_seed(seed, t + 1)``
both for the weight init and as the training seed, so every grid point
and every rule sees the same initial weights in the same trial. Within a
run the shuffle stream is ``derive_seed(cfg.seed, _SHUFFLE_TAG)``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .matlib import Rng, ShapeError, derive_seed
from .metrics import classification_error, per_pattern_mae, per_pattern_recon_mae
from .model import CenteredLayer, TiedAutoEncoder
from .rules import (
    GradientDescent,
    HebbianDescent,
    NumericOverflowError,
    apply_update,
    auto_update,
    hetero_update,
)

__all__ = [
    "TrainConfig",
    "TrainTrace",
    "HyperGrid",
    "GridResult",
    "update_offsets",
    "train_hetero",
    "train_auto",
    "grid_search",
    "BUILTIN_ETA_GRID",
    "BUILTIN_OMEGA_GRID",
]

_SHUFFLE_TAG = 0x5F

# the 35-value learning-rate grid and 20-value weight-decay grid used by
# the CLI's --grid-lr / --grid-wd switches
BUILTIN_ETA_GRID = (
    100.0, 80.0, 60.0, 40.0, 20.0, 10.0, 8.0, 6.0, 4.0, 2.0, 1.0,
    0.8, 0.6, 0.4, 0.2, 0.1, 0.08, 0.06, 0.04, 0.02, 0.01,
    0.008, 0.006, 0.004, 0.002, 0.001, 0.0008, 0.0006, 0.0004, 0.0002,
    0.0001, 0.00008, 0.00006, 0.00004, 0.00002,
)
BUILTIN_OMEGA_GRID = (
    2.0, 1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.08, 0.06, 0.04, 0.02,
    0.01, 0.008, 0.006, 0.004, 0.002, 0.001, 0.0005, 0.0001, 0.0,
)


@dataclass
class TrainConfig:
    eta: float
    omega: float = 0.0
    batch_size: int = 1
    epochs: int = 1
    nu_input: float = 0.0
    nu_hidden: float = 0.0
    seed: int = 0
    shuffle: bool = False

    def __post_init__(self):
        if self.eta < 0.0:
            raise ValueError("eta must be non-negative")
        if self.omega < 0.0:
            raise ValueError("omega must be non-negative")
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be at least 1")
        for nu in (self.nu_input, self.nu_hidden):
            if not 0.0 <= nu <= 1.0:
                raise ValueError("sliding factors must lie in [0, 1]")


@dataclass
class TrainTrace:
    updates: list  # (pattern_index, epoch, batch mean |error|) per update
    model: object
    per_pattern_mae: np.ndarray


def update_offsets(mu, batch_mean, nu: float) -> np.ndarray:
    """Exponential moving average (1-nu)*mu + nu*batch_mean."""
    if not 0.0 <= nu <= 1.0:
        raise ValueError("sliding factor must lie in [0, 1]")
    mu = np.asarray(mu, dtype=float)
    batch_mean = np.asarray(batch_mean, dtype=float)
    if mu.shape != batch_mean.shape:
        raise ShapeError(f"offset shape {mu.shape} != batch mean shape {batch_mean.shape}")
    return (1.0 - nu) * mu + nu * batch_mean


def _epoch_order(d: int, epoch: int, cfg: TrainConfig, rng: Rng | None) -> np.ndarray:
    if cfg.shuffle and rng is not None:
        return rng.permutation(d)
    return np.arange(d)


def train_hetero(layer: CenteredLayer, rule, X, T, cfg: TrainConfig) -> TrainTrace:
    """Train the layer in place on the association X -> T."""
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    if X.ndim != 2 or T.ndim != 2 or X.shape[0] != T.shape[0]:
        raise ShapeError("X and T must be matrices with equal row counts")
    d = X.shape[0]
    order_rng = Rng(derive_seed(cfg.seed, _SHUFFLE_TAG)) if cfg.shuffle else None
    updates = []
    # divergence is detected explicitly in apply_update, so the transient
    # overflow warnings of a run that is about to be aborted are noise
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(cfg.epochs):
            idx = _epoch_order(d, epoch, cfg, order_rng)
            for start in range(0, d, cfg.batch_size):
                rows = idx[start : start + cfg.batch_size]
                xb, tb = X[rows], T[rows]
                _, h = layer.forward(xb)
                upd = hetero_update(layer, xb, tb, rule)
                apply_update(layer, upd, cfg.eta, cfg.omega)
                if cfg.nu_input > 0.0:
                    layer.mu = update_offsets(layer.mu, xb.mean(axis=0), cfg.nu_input)
                updates.append((int(rows[0]), epoch, float(np.mean(np.abs(h - tb)))))
        curve = per_pattern_mae(layer, X, T)
    return TrainTrace(updates, layer, curve)


def train_auto(
    ae: TiedAutoEncoder, rule, X, cfg: TrainConfig, lambda_target=None
) -> TrainTrace:
    """Train the auto-encoder in place to reconstruct X."""
    if not isinstance(rule, (HebbianDescent, GradientDescent)):
        raise TypeError("auto-associative training supports HebbianDescent or GradientDescent")
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeError("X must be a matrix")
    d = X.shape[0]
    order_rng = Rng(derive_seed(cfg.seed, _SHUFFLE_TAG)) if cfg.shuffle else None
    updates = []
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(cfg.epochs):
            idx = _epoch_order(d, epoch, cfg, order_rng)
            for start in range(0, d, cfg.batch_size):
                rows = idx[start : start + cfg.batch_size]
                xb = X[rows]
                st = ae.forward(xb)
                upd = auto_update(ae, xb, rule, lambda_target)
                apply_update(ae, upd, cfg.eta, cfg.omega)
                if cfg.nu_hidden > 0.0:
                    ae.lam = update_offsets(ae.lam, st.h.mean(axis=0), cfg.nu_hidden)
                if cfg.nu_input > 0.0:
                    ae.mu = update_offsets(ae.mu, xb.mean(axis=0), cfg.nu_input)
                updates.append((int(rows[0]), epoch, float(np.mean(np.abs(st.z - xb)))))
        curve = per_pattern_recon_mae(ae, X)
    return TrainTrace(updates, ae, curve)


# ---------------------------------------------------------------------------
# grid search


@dataclass
class HyperGrid:
    etas: Sequence[float]
    omegas: Sequence[float] = (0.0,)
    objective: str = "mae_all"  # mae_all | mae_last_k | classification_error
    last_k: int = 20

    def __post_init__(self):
        if not self.etas or not self.omegas:
            raise ValueError("grid axes must be non-empty")
        if self.objective not in ("mae_all", "mae_last_k", "classification_error"):
            raise ValueError(f"unknown objective {self.objective!r}")


@dataclass
class GridResult:
    best_eta: float
    best_omega: float
    best_score: float
    table: list  # (eta, omega, mean score) per grid point, grid order


def _score_trace(trace: TrainTrace, grid: HyperGrid, eval_data) -> float:
    if grid.objective == "mae_all":
        return float(trace.per_pattern_mae.mean())
    if grid.objective == "mae_last_k":
        return float(trace.per_pattern_mae[-grid.last_k :].mean())
    X_eval, labels_eval = eval_data
    _, H = trace.model.forward(X_eval)
    return classification_error(H, labels_eval)


def _run_grid_point(payload) -> float:
    rule, X, T, cfg_base, grid, eval_data, inits, lambda_target = payload
    scores = []
    for trial, init in enumerate(inits):
        cfg = replace(cfg_base, seed=derive_seed(cfg_base.seed, trial + 1))
        model = init.copy()
        try:
            if isinstance(model, TiedAutoEncoder):
                trace = train_auto(model, rule, X, cfg, lambda_target)
            else:
                trace = train_hetero(model, rule, X, T, cfg)
        except NumericOverflowError:
            scores.append(np.inf)
            continue
        scores.append(_score_trace(trace, grid, eval_data))
    return float(np.mean(scores))


def grid_search(
    rule,
    data,
    grid: HyperGrid,
    cfg_base: TrainConfig,
    trials: int,
    model_factory: Callable[[Rng], object],
    eval_data=None,
    jobs: int = 1,
) -> GridResult:
    """Average the objective over ``trials`` seeded runs per grid point.

    ``data`` is ``(X, T)`` for hetero-association or ``(X, None)`` for
    auto-association; ``eval_data = (X_eval, labels_eval)`` is required for
    the classification objective. Trial t draws its initial model from
    ``Rng(derive_seed(cfg_base.seed, t + 1))``, so all grid points and all
    rules share initial weights per trial. Ties break toward the smaller
    learning rate, then the smaller weight decay. Runs that overflow
    numerically score +inf.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if grid.objective == "classification_error" and eval_data is None:
        raise ValueError("classification objective needs eval_data=(X, labels)")
    X, T = data
    inits = [model_factory(Rng(derive_seed(cfg_base.seed, t + 1))) for t in range(trials)]
    points = [(eta, omega) for eta in grid.etas for omega in grid.omegas]
    payloads = [
        (rule, X, T, replace(cfg_base, eta=eta, omega=omega), grid, eval_data, inits, None)
        for eta, omega in points
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            scores = list(pool.map(_run_grid_point, payloads))
    else:
        scores = [_run_grid_point(p) for p in payloads]
    table = [(eta, omega, score) for (eta, omega), score in zip(points, scores)]
    best_score, best_eta, best_omega = min(
        (score, eta, omega) for eta, omega, score in table
    )
    return GridResult(best_eta, best_omega, best_score, table)
