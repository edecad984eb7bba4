"""Activation functions, error terms, and the loss catalogue.

Activations are small stateless objects exposing ``apply`` and
``derivative`` (elementwise; softmax is the one vector-coupled case and
additionally exposes its full Jacobian). Error terms map a target/output
pair to the raw error signal that drives the update rules. Losses tie the
two together: every (activation, error term) pair in the catalogue has a
closed-form antiderivative of ``error / derivative`` which ``hd_loss``
evaluates, so gradient-checking oracles can differentiate it numerically.

Cross-entropy arguments are clamped to [1e-12, 1 - 1e-12] before the log
so saturated sigmoid outputs in long runs stay finite; pass ``clamp=False``
to get a DomainError at the boundary instead.
"""

from __future__ import annotations

import numpy as np

from .matlib import ShapeError

__all__ = [
    "Activation",
    "Identity",
    "Sigmoid",
    "Step",
    "Softmax",
    "Rectifier",
    "LeakyRectifier",
    "ExpLin",
    "ScaledExpLin",
    "ScaledTanh",
    "SoftSign",
    "SoftPlus",
    "InvSqrt",
    "ErrorTerm",
    "Difference",
    "SaturatingTanh",
    "LeakyHinge",
    "Loss",
    "SquaredError",
    "CrossEntropy",
    "HebbianDescentLoss",
    "hd_loss",
    "gd_loss",
    "activation_from_name",
    "error_term_from_name",
    "UnsupportedLossError",
    "DomainError",
]

_EPS = 1e-12


class UnsupportedLossError(ValueError):
    """No closed-form loss exists for the requested pairing."""


class DomainError(ValueError):
    """Loss evaluated outside its domain (e.g. cross-entropy at 0 or 1)."""


def _sigmoid(a: np.ndarray) -> np.ndarray:
    # piecewise form avoids overflow in exp for large |a|
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    e = np.exp(a[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _clamp01(h: np.ndarray) -> np.ndarray:
    return np.clip(h, _EPS, 1.0 - _EPS)


def _log_cosh(x: np.ndarray) -> np.ndarray:
    # |x| + log1p(exp(-2|x|)) - log 2, finite for any finite x
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - np.log(2.0)


# ---------------------------------------------------------------------------
# activations


class Activation:
    name = "?"

    def apply(self, a) -> np.ndarray:
        raise NotImplementedError

    def derivative(self, a) -> np.ndarray:
        raise NotImplementedError

    def chain(self, a, err) -> np.ndarray:
        """Backpropagate ``err`` (dL/dh) through the activation: dL/da."""
        return err * self.derivative(a)

    def __repr__(self):
        return self.name


class Identity(Activation):
    name = "identity"

    def apply(self, a):
        return np.asarray(a, dtype=float)

    def derivative(self, a):
        return np.ones_like(np.asarray(a, dtype=float))


class Sigmoid(Activation):
    name = "sigmoid"

    def apply(self, a):
        return _sigmoid(np.asarray(a, dtype=float))

    def derivative(self, a):
        s = _sigmoid(np.asarray(a, dtype=float))
        return s * (1.0 - s)


class Step(Activation):
    """Heaviside step; the tie at zero goes to one."""

    name = "step"

    def apply(self, a):
        return (np.asarray(a, dtype=float) >= 0.0).astype(float)

    def derivative(self, a):
        return np.zeros_like(np.asarray(a, dtype=float))


class Softmax(Activation):
    """Vector-coupled softmax over the last axis."""

    name = "softmax"

    def apply(self, a):
        a = np.asarray(a, dtype=float)
        z = a - a.max(axis=-1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=-1, keepdims=True)

    def derivative(self, a):
        # diagonal of the Jacobian; use jacobian()/chain() for the full one
        h = self.apply(a)
        return h * (1.0 - h)

    def jacobian(self, a) -> np.ndarray:
        """Full Jacobian diag(h) - h h^T for a single pre-activation vector."""
        a = np.asarray(a, dtype=float)
        if a.ndim != 1:
            raise ShapeError("jacobian expects a single pre-activation vector")
        h = self.apply(a)
        return np.diag(h) - np.outer(h, h)

    def chain(self, a, err):
        h = self.apply(a)
        return h * (err - (err * h).sum(axis=-1, keepdims=True))


class Rectifier(Activation):
    name = "rectifier"

    def apply(self, a):
        return np.maximum(np.asarray(a, dtype=float), 0.0)

    def derivative(self, a):
        return (np.asarray(a, dtype=float) > 0.0).astype(float)


class LeakyRectifier(Activation):
    name = "leaky_rectifier"

    def __init__(self, eps: float = 0.01):
        self.eps = float(eps)

    def apply(self, a):
        a = np.asarray(a, dtype=float)
        return np.where(a < 0.0, self.eps * a, a)

    def derivative(self, a):
        a = np.asarray(a, dtype=float)
        return np.where(a < 0.0, self.eps, 1.0)


class ExpLin(Activation):
    """Exponential linear unit: alpha*(exp(a)-1) below zero, a above."""

    name = "explin"

    def __init__(self, alpha: float = 1.0):
        self.alpha = float(alpha)

    def apply(self, a):
        a = np.asarray(a, dtype=float)
        neg = a < 0.0
        out = a.copy()
        out[neg] = self.alpha * np.expm1(a[neg])
        return out

    def derivative(self, a):
        a = np.asarray(a, dtype=float)
        neg = a < 0.0
        out = np.ones_like(a)
        out[neg] = self.alpha * np.exp(a[neg])
        return out


class ScaledExpLin(Activation):
    """Self-normalizing ELU with the published (lambda, alpha) constants."""

    name = "scaled_explin"

    def __init__(self, lam: float = 1.0507009873554805, alpha: float = 1.6732632423543772):
        self.lam = float(lam)
        self.alpha = float(alpha)

    def apply(self, a):
        a = np.asarray(a, dtype=float)
        neg = a < 0.0
        out = self.lam * a
        out[neg] = self.lam * self.alpha * np.expm1(a[neg])
        return out

    def derivative(self, a):
        a = np.asarray(a, dtype=float)
        neg = a < 0.0
        out = np.full_like(a, self.lam)
        out[neg] = self.lam * self.alpha * np.exp(a[neg])
        return out


class ScaledTanh(Activation):
    name = "scaled_tanh"

    def __init__(self, alpha: float = 1.0):
        self.alpha = float(alpha)

    def apply(self, a):
        return self.alpha * np.tanh(np.asarray(a, dtype=float))

    def derivative(self, a):
        t = np.tanh(np.asarray(a, dtype=float))
        return self.alpha * (1.0 - t * t)


class SoftSign(Activation):
    name = "softsign"

    def apply(self, a):
        a = np.asarray(a, dtype=float)
        return a / (1.0 + np.abs(a))

    def derivative(self, a):
        a = np.asarray(a, dtype=float)
        return 1.0 / (1.0 + np.abs(a)) ** 2


class SoftPlus(Activation):
    name = "softplus"

    def apply(self, a):
        return np.logaddexp(0.0, np.asarray(a, dtype=float))

    def derivative(self, a):
        return _sigmoid(np.asarray(a, dtype=float))


class InvSqrt(Activation):
    """a / sqrt(1 + alpha a^2); bounded in (-1/sqrt(alpha), 1/sqrt(alpha))."""

    name = "invsqrt"

    def __init__(self, alpha: float = 1.0):
        self.alpha = float(alpha)

    def apply(self, a):
        a = np.asarray(a, dtype=float)
        return a / np.sqrt(1.0 + self.alpha * a * a)

    def derivative(self, a):
        a = np.asarray(a, dtype=float)
        return (1.0 + self.alpha * a * a) ** -1.5


# ---------------------------------------------------------------------------
# error terms


class ErrorTerm:
    name = "?"

    def value(self, t, h) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self):
        return self.name


def _check_same_shape(t, h):
    t = np.asarray(t, dtype=float)
    h = np.asarray(h, dtype=float)
    if t.shape != h.shape:
        raise ShapeError(f"target shape {t.shape} != output shape {h.shape}")
    return t, h


class Difference(ErrorTerm):
    name = "difference"

    def value(self, t, h):
        t, h = _check_same_shape(t, h)
        return h - t


class SaturatingTanh(ErrorTerm):
    """alpha*tanh(beta*(h - t)); saturates the error at +-alpha."""

    name = "sat_tanh"

    def __init__(self, alpha: float = 1.0, beta: float = 1.0):
        self.alpha = float(alpha)
        self.beta = float(beta)

    def value(self, t, h):
        t, h = _check_same_shape(t, h)
        return self.alpha * np.tanh(self.beta * (h - t))


class LeakyHinge(ErrorTerm):
    """-t where t*h < 1, a small positive alpha elsewhere."""

    name = "leaky_hinge"

    def __init__(self, alpha: float = 0.01):
        self.alpha = float(alpha)

    def value(self, t, h):
        t, h = _check_same_shape(t, h)
        return np.where(t * h < 1.0, -t, self.alpha)


# ---------------------------------------------------------------------------
# losses


class Loss:
    name = "?"

    def value(self, t, h, a=None) -> float:
        raise NotImplementedError

    def error(self, t, h, a=None) -> np.ndarray:
        """Partial derivative of the loss with respect to the output h."""
        raise NotImplementedError

    def __repr__(self):
        return self.name


class SquaredError(Loss):
    name = "squared_error"

    def value(self, t, h, a=None):
        t, h = _check_same_shape(t, h)
        return 0.5 * float(np.sum((h - t) ** 2))

    def error(self, t, h, a=None):
        t, h = _check_same_shape(t, h)
        return h - t


class CrossEntropy(Loss):
    name = "cross_entropy"

    def __init__(self, clamp: bool = True):
        self.clamp = bool(clamp)

    def _prep(self, t, h):
        t, h = _check_same_shape(t, h)
        if self.clamp:
            return t, _clamp01(h)
        if np.any(h <= 0.0) or np.any(h >= 1.0):
            raise DomainError("cross-entropy needs outputs strictly inside (0, 1)")
        return t, h

    def value(self, t, h, a=None):
        t, h = self._prep(t, h)
        return float(np.sum(-t * np.log(h) - (1.0 - t) * np.log(1.0 - h)))

    def error(self, t, h, a=None):
        t, h = self._prep(t, h)
        return (h - t) / (h * (1.0 - h))


class HebbianDescentLoss(Loss):
    """Loss whose plain gradient reproduces the descent rule that drops the
    output derivative: the catalogued antiderivative of error/derivative."""

    name = "hebbian_descent"

    def __init__(self, act: Activation, term: ErrorTerm):
        self.act = act
        self.term = term

    def value(self, t, h, a=None):
        if a is None:
            raise ValueError("HebbianDescentLoss.value needs the pre-activation a")
        return hd_loss(self.act, self.term, t, h, a)

    def error(self, t, h, a=None):
        if a is None:
            raise ValueError("HebbianDescentLoss.error needs the pre-activation a")
        return self.term.value(t, h) / self.act.derivative(a)


def gd_loss(loss: Loss, t, h, a=None) -> float:
    """Scalar value of a standard loss."""
    return loss.value(t, h, a)


def hd_loss(act: Activation, term: ErrorTerm, t, h, a) -> float:
    """Closed-form antiderivative of error/derivative for catalogued pairs.

    ``a`` is the pre-activation belonging to ``h``. Where the closed form
    contains the pre-activation explicitly (softsign, softplus, invsqrt,
    and the piecewise branch selectors) it is treated as a fixed anchor:
    gradient-checking oracles keep it at the unperturbed value while
    re-evaluating ``h``.
    """
    t, h = _check_same_shape(t, h)
    a = np.asarray(a, dtype=float)
    if a.shape != h.shape:
        raise ShapeError(f"pre-activation shape {a.shape} != output shape {h.shape}")

    if isinstance(term, Difference):
        if isinstance(act, Identity):
            return 0.5 * float(np.sum((h - t) ** 2))
        if isinstance(act, (Sigmoid, Softmax)):
            hc = _clamp01(h)
            return float(np.sum(-t * np.log(hc) - (1.0 - t) * np.log(1.0 - hc)))
        if isinstance(act, ScaledTanh):
            al = act.alpha
            hc = np.clip(h, -al + _EPS, al - _EPS)
            return float(
                np.sum(-0.5 * (al + t) * np.log(al + hc) - 0.5 * (al - t) * np.log(al - hc))
            )
        if isinstance(act, LeakyRectifier):
            sq = 0.5 * (h - t) ** 2
            return float(np.sum(np.where(a < 0.0, sq / act.eps, sq)))
        if isinstance(act, (ExpLin, ScaledExpLin)):
            lam = act.lam if isinstance(act, ScaledExpLin) else 1.0
            la = lam * act.alpha
            neg = a < 0.0
            out = 0.5 * (h - t) ** 2 / lam
            out[neg] = h[neg] - (t[neg] + la) * np.log(h[neg] + la)
            return float(np.sum(out))
        if isinstance(act, InvSqrt):
            return 0.5 * float(np.sum((act.alpha * a * a + 1.0) ** 1.5 * (h - t) ** 2))
        if isinstance(act, SoftSign):
            return 0.5 * float(np.sum((1.0 + np.abs(a)) ** 2 * (h - t) ** 2))
        if isinstance(act, SoftPlus):
            return 0.5 * float(np.sum((1.0 + np.exp(-a)) * (h - t) ** 2))

    if isinstance(term, SaturatingTanh) and isinstance(act, Identity):
        # smooth Huber: quadratic near zero, linear with slope alpha far out
        return (term.alpha / term.beta) * float(np.sum(_log_cosh(term.beta * (h - t))))

    if isinstance(term, LeakyHinge):
        if isinstance(act, Identity):
            return float(np.sum(np.where(t * h < 1.0, 1.0 - t * h, term.alpha * h)))
        if isinstance(act, Sigmoid):
            logit = np.log(_clamp01(h)) - np.log1p(-_clamp01(h))
            return float(np.sum(np.where(t * h < 1.0, -t * logit, term.alpha * logit)))

    raise UnsupportedLossError(
        f"no closed-form loss for activation {act.name!r} with error term {term.name!r}"
    )


# ---------------------------------------------------------------------------
# name registries (CLI surface)

_ACTIVATIONS = {
    "identity": Identity,
    "sigmoid": Sigmoid,
    "step": Step,
    "softmax": Softmax,
    "rectifier": Rectifier,
    "leaky_rectifier": LeakyRectifier,
    "explin": ExpLin,
    "scaled_explin": ScaledExpLin,
    "scaled_tanh": ScaledTanh,
    "softsign": SoftSign,
    "softplus": SoftPlus,
    "invsqrt": InvSqrt,
}

_ERROR_TERMS = {
    "difference": Difference,
    "sat_tanh": SaturatingTanh,
    "leaky_hinge": LeakyHinge,
}


def activation_from_name(name: str, **params) -> Activation:
    try:
        return _ACTIVATIONS[name](**params)
    except KeyError:
        raise ValueError(f"unknown activation {name!r}; choose from {sorted(_ACTIVATIONS)}")


def error_term_from_name(name: str, **params) -> ErrorTerm:
    try:
        return _ERROR_TERMS[name](**params)
    except KeyError:
        raise ValueError(f"unknown error term {name!r}; choose from {sorted(_ERROR_TERMS)}")
