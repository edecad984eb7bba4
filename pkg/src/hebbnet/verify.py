"""Executable oracles for the analytic claims behind the update rules.

Every check here is an independent numeric route to a statement the
library's algebra also implements: finite differences of a scalar loss
against the closed-form updates, epoch sums of two rules against each
other, exact reproductions of the small worked datasets, and the
inner-product convergence invariant. ``run_battery`` executes all of them
on seeded random instances and reports one result per check; failures
carry the offending instance seed.

Finite differences are central with step 1e-6 by default, one parameter
at a time; relative errors are measured as |analytic - fd| / (|fd| +
1e-12). Losses whose closed form anchors the pre-activation (softsign,
softplus, invsqrt and the piecewise branch selectors) keep that anchor at
the unperturbed value while the output is re-evaluated.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .activations import (
    CrossEntropy,
    Difference,
    ErrorTerm,
    ExpLin,
    HebbianDescentLoss,
    Identity,
    InvSqrt,
    LeakyHinge,
    LeakyRectifier,
    Loss,
    Rectifier,
    SaturatingTanh,
    ScaledExpLin,
    ScaledTanh,
    Sigmoid,
    SoftPlus,
    SoftSign,
    Softmax,
    SquaredError,
    Step,
    hd_loss,
)
from .matlib import Rng, derive_seed, mean_rows
from .model import CenteredLayer, TiedAutoEncoder
from .rules import cov_hetero, gd_auto, gd_hetero, hd_auto, hd_hetero, hebb_hetero

__all__ = [
    "VerificationError",
    "CheckResult",
    "CurlResult",
    "Figure1Report",
    "check_gd_gradient",
    "check_hd_loss_gradient",
    "check_inner_product",
    "check_auto_curl",
    "check_hebb_cov",
    "check_glm_bernoulli",
    "check_gd_auto_gradient",
    "check_figure1",
    "run_battery",
    "format_tap",
]

FD_EPS = 1e-6
# the battery calls the FD checks with a slightly larger step: for double
# precision and loss values up to O(10), 3e-6 balances roundoff noise
# (~|L|*eps_mach/step) against curvature error (~|f'''|*step^2)
BATTERY_FD_EPS = 3e-6
_REL_FLOOR = 1e-12


class VerificationError(AssertionError):
    """An oracle identity that must hold exactly has been violated."""


# ---------------------------------------------------------------------------
# finite-difference machinery


def _fd_grads(model, arrays, scalar_fn, eps: float) -> dict:
    """Central finite differences of scalar_fn() over the named parameter
    arrays of ``model``, one entry at a time."""
    grads = {}
    for name in arrays:
        arr = getattr(model, name)
        g = np.zeros_like(arr)
        flat = arr.ravel()
        gflat = g.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            fp = scalar_fn()
            flat[i] = orig - eps
            fm = scalar_fn()
            flat[i] = orig
            gflat[i] = (fp - fm) / (2.0 * eps)
        grads[name] = g
    return grads


def _max_rel_err(analytic: dict, fd: dict) -> float:
    worst = 0.0
    for name, g in fd.items():
        rel = np.abs(analytic[name] - g) / (np.abs(g) + _REL_FLOOR)
        worst = max(worst, float(rel.max()))
    return worst


# ---------------------------------------------------------------------------
# gradient oracles


def check_gd_gradient(layer: CenteredLayer, x, t, loss: Loss, eps: float = FD_EPS):
    """Gradient-descent rule against finite differences of the loss.

    Returns the maximum relative error, or None for the non-differentiable
    step activation (the check is skipped there).
    """
    if isinstance(layer.act, Step):
        return None
    upd = gd_hetero(layer, x, t, loss)
    analytic = {"W": -upd.dW, "b": -upd.db}

    def value():
        a, h = layer.forward(x)
        return loss.value(t, h, a)

    return _max_rel_err(analytic, _fd_grads(layer, ("W", "b"), value, eps))


def check_hd_loss_gradient(layer: CenteredLayer, x, t, term: ErrorTerm, eps: float = FD_EPS):
    """Hebbian-descent rule against finite differences of its catalogued
    loss, with the pre-activation anchor frozen at the unperturbed value."""
    a0, _ = layer.forward(x)
    act = layer.act
    hd_loss(act, term, t, layer.forward(x)[1], a0)  # raises for unsupported pairs
    upd = hd_hetero(layer, x, t, term)
    analytic = {"W": -upd.dW, "b": -upd.db}

    def value():
        _, h = layer.forward(x)
        return hd_loss(act, term, t, h, a0)

    return _max_rel_err(analytic, _fd_grads(layer, ("W", "b"), value, eps))


def check_glm_bernoulli(layer: CenteredLayer, x, t, eps: float = FD_EPS):
    """Hebbian-descent with the difference term against finite differences
    of the Bernoulli log-likelihood sum(t ln h + (1-t) ln(1-h))."""
    if not isinstance(layer.act, Sigmoid):
        raise ValueError("the Bernoulli check needs a sigmoid output layer")
    upd = hd_hetero(layer, x, t, Difference())
    analytic = {"W": upd.dW, "b": upd.db}  # ascent direction of the likelihood
    t = np.asarray(t, dtype=float)

    def value():
        _, h = layer.forward(x)
        h = np.clip(h, 1e-300, 1.0 - 1e-16)
        return float(np.sum(t * np.log(h) + (1.0 - t) * np.log(1.0 - h)))

    return _max_rel_err(analytic, _fd_grads(layer, ("W", "b"), value, eps))


def check_gd_auto_gradient(ae: TiedAutoEncoder, x, loss: Loss, eps: float = FD_EPS):
    """Tied-weight gradient rule against finite differences of the
    reconstruction loss over W, b, and c."""
    upd = gd_auto(ae, x, loss)
    analytic = {"W": -upd.dW, "b": -upd.db, "c": -upd.dc}
    x = np.asarray(x, dtype=float)

    def value():
        st = ae.forward(x)
        return loss.value(x, st.z, st.a_dec)

    return _max_rel_err(analytic, _fd_grads(ae, ("W", "b", "c"), value, eps))


# ---------------------------------------------------------------------------
# convergence inner product (update directions never oppose the gradient)


def check_inner_product(layer: CenteredLayer, x, t, term: ErrorTerm):
    """Flattened dot product of the descent rule with the gradient rule for
    the paired loss, recomputed independently as sum(update^2 * phi').

    Returns (dot, recomputed); raises VerificationError if the two routes
    disagree beyond 1e-10.
    """
    upd_hd = hd_hetero(layer, x, t, term)
    if isinstance(term, Difference):
        loss = SquaredError()
    else:
        # the loss whose output derivative is exactly this error term
        loss = HebbianDescentLoss(Identity(), term)
    upd_gd = gd_hetero(layer, x, t, loss)
    dot = float(np.sum(upd_hd.dW * upd_gd.dW) + np.sum(upd_hd.db * upd_gd.db))
    a, _ = layer.forward(np.asarray(x, dtype=float))
    phi = layer.act.derivative(a)
    recomputed = float(
        np.sum(phi * (upd_hd.dW**2).sum(axis=0)) + np.sum(phi * upd_hd.db**2)
    )
    if abs(dot - recomputed) > 1e-10:
        raise VerificationError(
            f"inner product {dot!r} disagrees with sum(update^2 * phi') {recomputed!r}"
        )
    return dot, recomputed


# ---------------------------------------------------------------------------
# the auto-associative rule is not a gradient field


@dataclass
class CurlResult:
    d12: float
    d21: float
    fd12: float
    fd21: float


def check_auto_curl(w, x, eps: float = FD_EPS) -> CurlResult:
    """Cross partial derivatives of the two weight-update components of the
    linear two-input one-hidden tied auto-encoder (zero biases/offsets).

    The update here carries the loss-ascent sign, G_i(w) = (z_i - x_i) h;
    the library rule equals -G. A symmetric Hessian would force
    d12 == d21; their closed forms differ, confirmed by finite
    differences.
    """
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    if w.shape != (2,) or x.shape != (2,):
        raise ValueError("the counterexample is the 2-input, 1-hidden linear net")

    def G(wv):
        h = float(wv @ x)
        z = wv * h
        return (z - x) * h

    d12 = 2.0 * w[0] ** 2 * x[0] * x[1] + 2.0 * w[0] * w[1] * x[1] ** 2 - x[0] * x[1]
    d21 = 2.0 * w[1] ** 2 * x[0] * x[1] + 2.0 * w[0] * w[1] * x[0] ** 2 - x[0] * x[1]
    e0 = np.array([eps, 0.0])
    e1 = np.array([0.0, eps])
    fd12 = (G(w + e1)[0] - G(w - e1)[0]) / (2.0 * eps)
    fd21 = (G(w + e0)[1] - G(w - e0)[1]) / (2.0 * eps)
    return CurlResult(float(d12), float(d21), float(fd12), float(fd21))


# ---------------------------------------------------------------------------
# centered Hebb vs covariance rule


def check_hebb_cov(X, T) -> float:
    """Max entry difference between the epoch sum of the centered Hebb rule
    (offsets at the input mean) and the epoch sum of the covariance rule."""
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    if X.shape[0] < 2:
        raise ValueError("need at least two patterns")
    x_mean = mean_rows(X)
    t_mean = mean_rows(T)
    layer = CenteredLayer(np.zeros((X.shape[1], T.shape[1])), np.zeros(T.shape[1]), x_mean, Identity())
    hebb_sum = np.zeros_like(layer.W)
    cov_sum = np.zeros_like(layer.W)
    for x, t in zip(X, T):
        hebb_sum += hebb_hetero(layer, x, t).dW
        cov_sum += cov_hetero(x, t, x_mean, t_mean).dW
    return float(np.max(np.abs(hebb_sum - cov_sum)))


# ---------------------------------------------------------------------------
# the two worked limitation datasets


_DOUBLED_X = np.array([[0, 1], [1, 1], [1, 0], [1, 0]], dtype=float)
_DOUBLED_T = np.array([[0, 1], [1, 0], [1, 1], [1, 1]], dtype=float)
_DOUBLED_HEBB_EXPECTED = np.array([[0, 0], [0, 0], [1, 1], [1, 1]], dtype=float)

_THREEBIT_X = np.array([[0, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=float)
_THREEBIT_T = np.array([[0, 1, 1], [1, 0, 0], [1, 1, 0], [1, 0, 1]], dtype=float)
_THREEBIT_HEBB_CORRECT = (False, False, True, False)


def _limitation_run(X, T, rule_name: str, eta: float = 10.0, repeats: int = 300):
    """Sigmoid net, centered at the input mean, bias pinned to zero, trained
    online for the given number of sweeps, final weights rescaled to
    Frobenius norm 100, outputs rounded to two decimals."""
    mu = mean_rows(X)
    t_mean = mean_rows(T)
    layer = CenteredLayer(
        np.zeros((X.shape[1], T.shape[1])), np.zeros(T.shape[1]), mu, Sigmoid()
    )
    for _ in range(repeats):
        for x, t in zip(X, T):
            if rule_name == "hd":
                upd = hd_hetero(layer, x, t, Difference())
            elif rule_name == "hebb":
                upd = hebb_hetero(layer, x, t)
            elif rule_name == "cov":
                upd = cov_hetero(x, t, mu, t_mean)
            else:
                raise ValueError(rule_name)
            layer.W += eta * upd.dW
    layer.W *= 100.0 / np.linalg.norm(layer.W)
    _, H = layer.forward(X)
    return np.round(H, 2)


@dataclass
class Figure1Report:
    doubled_hd: np.ndarray
    doubled_hebb: np.ndarray
    doubled_cov: np.ndarray
    threebit_hd: np.ndarray
    threebit_hebb: np.ndarray
    doubled_hd_ok: bool
    doubled_hebb_ok: bool
    doubled_cov_ok: bool
    threebit_hd_ok: bool
    threebit_hebb_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.doubled_hd_ok
            and self.doubled_hebb_ok
            and self.doubled_cov_ok
            and self.threebit_hd_ok
            and self.threebit_hebb_ok
        )


def check_figure1() -> Figure1Report:
    """Reproduce both correlated-pattern datasets: the descent rule stores
    every pair, the Hebb/covariance rules only the doubled pair (first
    dataset) or the third pattern (second dataset)."""
    doubled_hd = _limitation_run(_DOUBLED_X, _DOUBLED_T, "hd")
    doubled_hebb = _limitation_run(_DOUBLED_X, _DOUBLED_T, "hebb")
    doubled_cov = _limitation_run(_DOUBLED_X, _DOUBLED_T, "cov")
    threebit_hd = _limitation_run(_THREEBIT_X, _THREEBIT_T, "hd")
    threebit_hebb = _limitation_run(_THREEBIT_X, _THREEBIT_T, "hebb")
    hebb_rows_correct = tuple(
        bool(np.array_equal(row, want)) for row, want in zip(threebit_hebb, _THREEBIT_T)
    )
    return Figure1Report(
        doubled_hd,
        doubled_hebb,
        doubled_cov,
        threebit_hd,
        threebit_hebb,
        doubled_hd_ok=np.array_equal(doubled_hd, _DOUBLED_T),
        doubled_hebb_ok=np.array_equal(doubled_hebb, _DOUBLED_HEBB_EXPECTED),
        doubled_cov_ok=np.array_equal(doubled_cov, _DOUBLED_HEBB_EXPECTED),
        threebit_hd_ok=np.array_equal(threebit_hd, _THREEBIT_T),
        threebit_hebb_ok=hebb_rows_correct == _THREEBIT_HEBB_CORRECT,
    )


# ---------------------------------------------------------------------------
# the battery


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


_PIECEWISE = (Rectifier, LeakyRectifier, ExpLin, ScaledExpLin, Step)


def _random_instance(rng: Rng, act, n=4, m=3, t_kind="unit"):
    """A random layer/input/target triple with moderate pre-activations;
    instances whose pre-activations sit inside the kink exclusion zone of a
    piecewise activation are re-drawn."""
    for _ in range(100):
        layer = CenteredLayer(
            rng.uniform_array((n, m), -1.0, 1.0),
            rng.uniform_array((m,), -0.5, 0.5),
            rng.uniform_array((n,), 0.0, 1.0),
            act,
        )
        x = rng.uniform_array((n,), 0.0, 1.0)
        if t_kind == "unit":
            t = rng.uniform_array((m,), 0.05, 0.95)
        elif t_kind == "binary":
            t = rng.bernoulli_array((m,))
        elif t_kind == "pm1":
            t = 2.0 * rng.bernoulli_array((m,)) - 1.0
        elif t_kind == "tanh_range":
            t = rng.uniform_array((m,), -0.9 * act.alpha, 0.9 * act.alpha)
        else:
            raise ValueError(t_kind)
        a, h = layer.forward(x)
        if isinstance(act, _PIECEWISE) and np.min(np.abs(a)) < 1e-3:
            continue
        if t_kind == "pm1" and np.min(np.abs(t * h - 1.0)) < 1e-3:
            continue  # keep clear of the hinge breakpoint
        return layer, x, t
    raise RuntimeError("could not draw a usable random instance")


def _resolvable(upd, floor: float = 2e-3) -> bool:
    """True when every non-zero update entry is large enough for a central
    difference to resolve at the battery tolerance (exact zeros are fine:
    both routes produce them exactly)."""
    parts = [np.abs(upd.dW).ravel(), np.abs(upd.db).ravel()]
    if upd.dc is not None:
        parts.append(np.abs(upd.dc).ravel())
    vals = np.concatenate(parts)
    nz = vals[vals != 0.0]
    return nz.size == 0 or float(nz.min()) >= floor


def _random_autoencoder(rng: Rng, enc_act, dec_act, n=3, m=2):
    ae = TiedAutoEncoder(
        rng.uniform_array((n, m), -1.0, 1.0),
        rng.uniform_array((m,), -0.3, 0.3),
        rng.uniform_array((n,), -0.3, 0.3),
        rng.uniform_array((n,), 0.0, 1.0),
        rng.uniform_array((m,), 0.0, 0.5),
        enc_act,
        dec_act,
    )
    x = rng.uniform_array((n,), 0.0, 1.0)
    return ae, x


def _instance_loop(seed, tag, instances, fn) -> CheckResult:
    """Run fn(rng) per instance; collect the worst observation."""
    name, ok, detail = tag, True, ""
    worst = 0.0
    for i in range(instances):
        inst_seed = derive_seed(seed, zlib.crc32(tag.encode()), i)
        try:
            value = fn(Rng(inst_seed))
        except Exception as exc:  # noqa: BLE001 - report, do not crash the battery
            return CheckResult(name, False, f"seed {inst_seed}: {exc}")
        if value is not None:
            worst = max(worst, value)
    return CheckResult(name, ok, detail or f"worst {worst:.3g} over {instances} instances")


def run_battery(seed: int = 0, instances: int = 100) -> list[CheckResult]:
    """Run every oracle on seeded random instances; returns one result per
    check, in a stable order."""
    results: list[CheckResult] = []

    # the two worked datasets
    rep = check_figure1()
    results.append(
        CheckResult(
            "limitation/doubled-pair dataset",
            rep.doubled_hd_ok and rep.doubled_hebb_ok and rep.doubled_cov_ok,
            f"hd {rep.doubled_hd.tolist()} hebb {rep.doubled_hebb.tolist()}",
        )
    )
    results.append(
        CheckResult(
            "limitation/correlated-3bit dataset",
            rep.threebit_hd_ok and rep.threebit_hebb_ok,
            f"hd {rep.threebit_hd.tolist()} hebb {rep.threebit_hebb.tolist()}",
        )
    )

    # exact equivalences
    def eq_identity(rng):
        layer, x, t = _random_instance(rng, Identity())
        hd = hd_hetero(layer, x, t, Difference())
        gd = gd_hetero(layer, x, t, SquaredError())
        err = max(np.max(np.abs(hd.dW - gd.dW)), np.max(np.abs(hd.db - gd.db)))
        if err > 1e-10:
            raise VerificationError(f"identity equivalence violated by {err}")
        return err

    results.append(_instance_loop(seed, "equivalence/identity hd = gd squared-error", instances, eq_identity))

    def eq_sigmoid_ce(rng):
        layer, x, t = _random_instance(rng, Sigmoid())
        hd = hd_hetero(layer, x, t, Difference())
        gd = gd_hetero(layer, x, t, CrossEntropy())
        err = max(np.max(np.abs(hd.dW - gd.dW)), np.max(np.abs(hd.db - gd.db)))
        if err > 1e-10:
            raise VerificationError(f"sigmoid cross-entropy equivalence violated by {err}")
        return err

    results.append(_instance_loop(seed, "equivalence/sigmoid hd = gd cross-entropy", instances, eq_sigmoid_ce))

    def eq_hebb_cov(rng):
        X = rng.bernoulli_array((8, 5))
        T = rng.uniform_array((8, 4), 0.0, 1.0)
        diff = check_hebb_cov(X, T)
        if diff > 1e-10:
            raise VerificationError(f"epoch sums differ by {diff}")
        return diff

    results.append(_instance_loop(seed, "equivalence/centered-hebb = covariance epoch sum", instances, eq_hebb_cov))

    def eq_decoder_part(rng):
        ae, x = _random_autoencoder(rng, Sigmoid(), Identity())
        hd = hd_auto(ae, x, Difference())
        gdp = gd_auto(ae, x, SquaredError(), decoder_only=True)
        err = max(
            np.max(np.abs(hd.dW - gdp.dW)),
            np.max(np.abs(hd.db - gdp.db)),
            np.max(np.abs(hd.dc - gdp.dc)),
        )
        if err > 1e-12:
            raise VerificationError(f"decoder part differs by {err}")
        return err

    results.append(_instance_loop(seed, "equivalence/decoder part of tied gradient = auto rule", instances, eq_decoder_part))

    def reparam(rng):
        from .model import reparameterize_uncentered

        layer, x, _ = _random_instance(rng, Sigmoid())
        flat = reparameterize_uncentered(layer)
        _, h0 = layer.forward(x)
        _, h1 = flat.forward(x)
        err = float(np.max(np.abs(h0 - h1)))
        if err > 1e-12:
            raise VerificationError(f"reparameterization changed the output by {err}")
        return err

    results.append(_instance_loop(seed, "reparameterization/forward invariance", instances, reparam))

    # gradient-descent rule vs finite differences
    gd_pairs = [
        (Identity(), SquaredError(), "unit"),
        (Sigmoid(), SquaredError(), "unit"),
        (Sigmoid(), CrossEntropy(), "unit"),
        (Softmax(), SquaredError(), "unit"),
        (Softmax(), CrossEntropy(), "unit"),
        (ScaledTanh(1.5), SquaredError(), "tanh_range"),
        (SoftSign(), SquaredError(), "unit"),
        (SoftPlus(), SquaredError(), "unit"),
        (InvSqrt(0.5), SquaredError(), "unit"),
        (ExpLin(), SquaredError(), "unit"),
        (ScaledExpLin(), SquaredError(), "unit"),
        (Rectifier(), SquaredError(), "unit"),
        (LeakyRectifier(), SquaredError(), "unit"),
    ]
    for act, loss, t_kind in gd_pairs:
        def gd_check(rng, act=act, loss=loss, t_kind=t_kind):
            for _ in range(200):
                layer, x, t = _random_instance(rng, act, t_kind=t_kind)
                if _resolvable(gd_hetero(layer, x, t, loss)):
                    break
            err = check_gd_gradient(layer, x, t, loss, eps=BATTERY_FD_EPS)
            if err > 1e-5:
                raise VerificationError(f"max relative error {err}")
            return err

        results.append(
            _instance_loop(seed, f"gd-gradient/{act.name}+{loss.name}", instances, gd_check)
        )

    def gd_step_skipped(rng):
        layer, x, t = _random_instance(rng, Step(), t_kind="binary")
        if check_gd_gradient(layer, x, t, SquaredError()) is not None:
            raise VerificationError("step activation must report non-differentiable")
        return 0.0

    results.append(_instance_loop(seed, "gd-gradient/step skipped (non-differentiable)", instances, gd_step_skipped))

    # descent rule vs finite differences of the catalogued losses
    hd_pairs = [
        (Identity(), Difference(), "unit"),
        (Sigmoid(), Difference(), "unit"),
        (ScaledTanh(1.5), Difference(), "tanh_range"),
        (SoftPlus(), Difference(), "unit"),
        (SoftSign(), Difference(), "unit"),
        (LeakyRectifier(), Difference(), "unit"),
        (ExpLin(), Difference(), "unit"),
        (ScaledExpLin(), Difference(), "unit"),
        (InvSqrt(0.5), Difference(), "unit"),
        (Identity(), SaturatingTanh(1.0, 1.0), "unit"),
        (Identity(), SaturatingTanh(2.0, 0.5), "unit"),
        (Identity(), LeakyHinge(0.01), "pm1"),
        (Sigmoid(), LeakyHinge(0.01), "pm1"),
    ]
    for act, term, t_kind in hd_pairs:
        def hd_check(rng, act=act, term=term, t_kind=t_kind):
            for _ in range(200):
                layer, x, t = _random_instance(rng, act, t_kind=t_kind)
                if _resolvable(hd_hetero(layer, x, t, term)):
                    break
            err = check_hd_loss_gradient(layer, x, t, term, eps=BATTERY_FD_EPS)
            if err > 1e-5:
                raise VerificationError(f"max relative error {err}")
            return err

        label = f"hd-loss-gradient/{act.name}+{term.name}"
        if isinstance(term, SaturatingTanh):
            label += f"(alpha={term.alpha:g},beta={term.beta:g})"
        results.append(_instance_loop(seed, label, instances, hd_check))

    def bernoulli(rng):
        for _ in range(200):
            layer, x, t = _random_instance(rng, Sigmoid(), t_kind="binary")
            if _resolvable(hd_hetero(layer, x, t, Difference())):
                break
        err = check_glm_bernoulli(layer, x, t, eps=BATTERY_FD_EPS)
        if err > 1e-5:
            raise VerificationError(f"max relative error {err}")
        return err

    results.append(_instance_loop(seed, "glm/bernoulli log-likelihood gradient", instances, bernoulli))

    # inner product of update directions
    for act in (Identity(), Sigmoid(), ExpLin(), LeakyRectifier(), SoftPlus(), SoftSign(), InvSqrt(0.5)):
        def ip_check(rng, act=act):
            layer, x, t = _random_instance(rng, act)
            dot, _ = check_inner_product(layer, x, t, Difference())
            if dot <= 0.0:
                raise VerificationError(f"inner product {dot} not positive")
            return 0.0

        results.append(_instance_loop(seed, f"inner-product/{act.name} positive", instances, ip_check))

    def ip_rectifier_case_iv(rng):
        n, m = 4, 3
        layer = CenteredLayer(
            rng.uniform_array((n, m), -1.0, 1.0),
            np.full(m, -10.0),  # drives every pre-activation negative
            rng.uniform_array((n,), 0.0, 1.0),
            Rectifier(),
        )
        x = rng.uniform_array((n,), 0.0, 1.0)
        t = np.ones(m)
        dot, _ = check_inner_product(layer, x, t, Difference())
        hd = hd_hetero(layer, x, t, Difference())
        gd = gd_hetero(layer, x, t, SquaredError())
        if dot != 0.0 or np.any(gd.dW != 0.0) or np.all(hd.dW == 0.0):
            raise VerificationError("expected a zero gradient with a non-zero descent update")
        return 0.0

    results.append(
        _instance_loop(seed, "inner-product/rectifier zero-gradient case", instances, ip_rectifier_case_iv)
    )

    def curl(rng):
        res = check_auto_curl(np.array([1.0, 0.5]), np.array([1.0, 1.0]))
        if abs(res.d12 - 2.0) > 1e-12 or abs(res.d21 - 0.5) > 1e-12:
            raise VerificationError(f"closed forms {res.d12}, {res.d21}")
        if abs(res.fd12 - res.d12) > 1e-5 or abs(res.fd21 - res.d21) > 1e-5:
            raise VerificationError(f"fd {res.fd12}, {res.fd21}")
        w = rng.uniform_array((2,), -1.0, 1.0)
        x = rng.uniform_array((2,), 0.1, 1.0)
        r = check_auto_curl(w, x)
        if abs(r.fd12 - r.d12) > 1e-5 or abs(r.fd21 - r.d21) > 1e-5:
            raise VerificationError(f"fd mismatch at w={w.tolist()} x={x.tolist()}")
        return max(abs(r.fd12 - r.d12), abs(r.fd21 - r.d21))

    results.append(_instance_loop(seed, "auto-curl/cross partials do not commute", instances, curl))

    def auto_fd(rng):
        for _ in range(200):
            ae, x = _random_autoencoder(rng, Sigmoid(), Sigmoid())
            if _resolvable(gd_auto(ae, x, SquaredError())):
                break
        err = check_gd_auto_gradient(ae, x, SquaredError(), eps=BATTERY_FD_EPS)
        if err > 1e-5:
            raise VerificationError(f"max relative error {err}")
        return err

    results.append(_instance_loop(seed, "gd-auto/finite differences", instances, auto_fd))

    return results


def format_tap(results) -> str:
    """TAP-style report: one line per check plus the plan line."""
    lines = [f"1..{len(results)}"]
    for i, res in enumerate(results, start=1):
        status = "ok" if res.ok else "not ok"
        detail = f" # {res.detail}" if res.detail else ""
        lines.append(f"{status} {i} - {res.name}{detail}")
    return "\n".join(lines)
