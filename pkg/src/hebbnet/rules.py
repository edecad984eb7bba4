"""Parameter update rules for hetero- and auto-associative learning.

Every rule returns a unit-rate :class:`ParamUpdate`; learning rate and
weight decay are applied once in :func:`apply_update`, which uniformly
*adds* eta * (direction - omega * W). Descent rules therefore return the
negative loss direction while Hebb and the covariance rule return the
growth direction.

Rules accept a single pattern (1-d) or a mini-batch (2-d, one pattern per
row); the batch update is the average of the per-pattern updates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .activations import (
    CrossEntropy,
    Difference,
    ErrorTerm,
    Loss,
    Sigmoid,
    Softmax,
    SquaredError,
    UnsupportedLossError,
)
from .matlib import ShapeError
from .model import CenteredLayer, ParamUpdate, TiedAutoEncoder

__all__ = [
    "NumericOverflowError",
    "hd_hetero",
    "gd_hetero",
    "hebb_hetero",
    "cov_hetero",
    "hd_auto",
    "gd_auto",
    "apply_update",
    "HebbianDescent",
    "GradientDescent",
    "Hebb",
    "Covariance",
    "hetero_update",
    "auto_update",
]


class NumericOverflowError(ArithmeticError):
    """A parameter left the finite range during an update step."""


def _rows(v, width: int, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        v = v[None, :]
    if v.ndim != 2 or v.shape[1] != width:
        raise ShapeError(f"{name} has shape {np.asarray(v).shape}, expected (*, {width})")
    return v


def hd_hetero(layer: CenteredLayer, x, t, term: ErrorTerm) -> ParamUpdate:
    """dW = -(x - mu) err^T, db = -err with err = term(t, h)."""
    X = _rows(x, layer.n, "x")
    T = _rows(t, layer.m, "t")
    if X.shape[0] != T.shape[0]:
        raise ShapeError("x and t disagree on the number of patterns")
    _, H = layer.forward(X)
    E = term.value(T, H)
    B = X.shape[0]
    dW = -(X - layer.mu).T @ E / B
    return ParamUpdate(dW, -E.mean(axis=0))


def gd_hetero(layer: CenteredLayer, x, t, loss: Loss) -> ParamUpdate:
    """Negative loss gradient: the error signal gated by the activation
    derivative (full Jacobian for softmax)."""
    if isinstance(loss, CrossEntropy) and not isinstance(layer.act, (Sigmoid, Softmax)):
        raise UnsupportedLossError(
            f"cross-entropy needs outputs in (0, 1); {layer.act.name} is unbounded"
        )
    X = _rows(x, layer.n, "x")
    T = _rows(t, layer.m, "t")
    if X.shape[0] != T.shape[0]:
        raise ShapeError("x and t disagree on the number of patterns")
    A, H = layer.forward(X)
    delta = layer.act.chain(A, loss.error(T, H, A))
    B = X.shape[0]
    dW = -(X - layer.mu).T @ delta / B
    return ParamUpdate(dW, -delta.mean(axis=0))


def hebb_hetero(layer: CenteredLayer, x, t) -> ParamUpdate:
    """Centered supervised Hebb step; the bias is never updated."""
    X = _rows(x, layer.n, "x")
    T = _rows(t, layer.m, "t")
    if X.shape[0] != T.shape[0]:
        raise ShapeError("x and t disagree on the number of patterns")
    dW = (X - layer.mu).T @ T / X.shape[0]
    return ParamUpdate(dW, np.zeros(layer.m))


def cov_hetero(x, t, x_mean, t_mean) -> ParamUpdate:
    """Covariance rule with dataset means frozen before training."""
    x_mean = np.asarray(x_mean, dtype=float)
    t_mean = np.asarray(t_mean, dtype=float)
    X = _rows(x, x_mean.shape[0], "x")
    T = _rows(t, t_mean.shape[0], "t")
    if X.shape[0] != T.shape[0]:
        raise ShapeError("x and t disagree on the number of patterns")
    dW = (X - x_mean).T @ (T - t_mean) / X.shape[0]
    return ParamUpdate(dW, np.zeros(t_mean.shape[0]))


def hd_auto(
    ae: TiedAutoEncoder, x, term: ErrorTerm, lambda_target=None
) -> ParamUpdate:
    """dW = -err(x, z) (h - lam)^T, dc = -err; db regularizes the hidden
    activity towards lambda_target when one is given, else stays zero."""
    X = _rows(x, ae.n, "x")
    st = ae.forward(X)
    E = term.value(X, st.z)
    B = X.shape[0]
    dW = -E.T @ (st.h - ae.lam) / B
    dc = -E.mean(axis=0)
    if lambda_target is not None:
        lt = np.asarray(lambda_target, dtype=float)
        if lt.shape != (ae.m,):
            raise ShapeError(f"lambda_target has shape {lt.shape}, expected ({ae.m},)")
        db = -(st.h - lt).mean(axis=0)
    else:
        db = np.zeros(ae.m)
    return ParamUpdate(dW, db, dc)


def gd_auto(ae: TiedAutoEncoder, x, loss: Loss, decoder_only: bool = False) -> ParamUpdate:
    """Full tied-weight gradient. The weight gradient is the sum of the
    decoder part (the hetero rule applied to the decoder) and the encoder
    part back-propagated through the hidden layer; ``decoder_only`` keeps
    just the former."""
    X = _rows(x, ae.n, "x")
    st = ae.forward(X)
    B = X.shape[0]
    ddec = ae.dec_act.chain(st.a_dec, loss.error(X, st.z, st.a_dec))   # (B, n)
    dW_dec = ddec.T @ (st.h - ae.lam) / B
    dc = -ddec.mean(axis=0)
    if decoder_only:
        return ParamUpdate(-dW_dec, np.zeros(ae.m), dc)
    denc = (ddec @ ae.W) * ae.enc_act.derivative(st.a_enc)             # (B, m)
    dW_enc = (X - ae.mu).T @ denc / B
    return ParamUpdate(-(dW_enc + dW_dec), -denc.mean(axis=0), dc)


def apply_update(model, upd: ParamUpdate, eta: float, omega: float = 0.0) -> None:
    """W += eta*(dW - omega*W); b += eta*db; c likewise. Mutates the model."""
    if eta < 0.0:
        raise ValueError("learning rate must be non-negative")
    if omega < 0.0:
        raise ValueError("weight decay must be non-negative")
    model.W += eta * (upd.dW - omega * model.W)
    model.b += eta * upd.db
    if upd.dc is not None:
        model.c += eta * upd.dc
    for name in ("W", "b", "c"):
        arr = getattr(model, name, None)
        if arr is not None and not np.all(np.isfinite(arr)):
            raise NumericOverflowError(f"parameter {name} became non-finite")


# ---------------------------------------------------------------------------
# rule kinds consumed by the training loops


@dataclass(frozen=True)
class HebbianDescent:
    term: ErrorTerm = field(default_factory=Difference)


@dataclass(frozen=True)
class GradientDescent:
    loss: Loss = field(default_factory=SquaredError)


@dataclass(frozen=True)
class Hebb:
    pass


@dataclass(frozen=True, eq=False)
class Covariance:
    x_mean: np.ndarray
    t_mean: np.ndarray


def hetero_update(layer: CenteredLayer, x, t, rule) -> ParamUpdate:
    if isinstance(rule, HebbianDescent):
        return hd_hetero(layer, x, t, rule.term)
    if isinstance(rule, GradientDescent):
        return gd_hetero(layer, x, t, rule.loss)
    if isinstance(rule, Hebb):
        return hebb_hetero(layer, x, t)
    if isinstance(rule, Covariance):
        return cov_hetero(x, t, rule.x_mean, rule.t_mean)
    raise TypeError(f"unknown rule {rule!r}")


def auto_update(ae: TiedAutoEncoder, x, rule, lambda_target=None) -> ParamUpdate:
    if isinstance(rule, HebbianDescent):
        return hd_auto(ae, x, rule.term, lambda_target)
    if isinstance(rule, GradientDescent):
        return gd_auto(ae, x, rule.loss)
    raise TypeError(f"auto-associative training supports HebbianDescent or GradientDescent")
