import numpy as np
import pytest

from conftest import random_layer
from hebbnet.activations import (
    CrossEntropy,
    Difference,
    Identity,
    Rectifier,
    SaturatingTanh,
    Sigmoid,
    SquaredError,
    Step,
)
from hebbnet.matlib import Rng
from hebbnet.model import CenteredLayer, TiedAutoEncoder
from hebbnet.rules import gd_hetero, hd_auto, hd_hetero
from hebbnet.verify import (
    VerificationError,
    check_auto_curl,
    check_figure1,
    check_gd_gradient,
    check_glm_bernoulli,
    check_hd_loss_gradient,
    check_hebb_cov,
    check_inner_product,
    format_tap,
    run_battery,
)


def test_gd_gradient_identity_squared():
    layer = random_layer(1, act=Identity(), n=3, m=2)
    x = Rng(2).uniform_array((3,))
    t = Rng(3).uniform_array((2,))
    assert check_gd_gradient(layer, x, t, SquaredError()) <= 1e-6


def test_gd_gradient_sigmoid_cross_entropy():
    layer = random_layer(4, act=Sigmoid(), n=3, m=2)
    x = Rng(5).uniform_array((3,))
    t = Rng(6).uniform_array((2,), 0.1, 0.9)
    assert check_gd_gradient(layer, x, t, CrossEntropy()) <= 1e-5


def test_gd_gradient_step_skipped():
    layer = random_layer(7, act=Step())
    assert check_gd_gradient(layer, np.zeros(4), np.zeros(3), SquaredError()) is None


def test_hd_loss_gradient_examples():
    layer = random_layer(8, act=Sigmoid())
    x = Rng(9).uniform_array((4,))
    t = Rng(10).uniform_array((3,), 0.1, 0.9)
    assert check_hd_loss_gradient(layer, x, t, Difference()) <= 1e-5

    lin = random_layer(11, act=Identity())
    assert check_hd_loss_gradient(lin, x, t, SaturatingTanh(1.0, 1.0)) <= 1e-5
    # identity + difference reduces to the plain squared-error gradient check
    a = check_hd_loss_gradient(lin, x, t, Difference())
    b = check_gd_gradient(lin, x, t, SquaredError())
    assert abs(a - b) < 1e-10


def test_inner_product_worked_example():
    layer = CenteredLayer(np.zeros((2, 1)), np.zeros(1), np.array([0.5, 0.5]), Sigmoid())
    dot, recomputed = check_inner_product(layer, [1.0, 0.0], [1.0], Difference())
    assert dot == pytest.approx(0.09375, abs=1e-12)
    assert recomputed == pytest.approx(dot, abs=1e-12)


def test_inner_product_zero_at_convergence():
    layer = CenteredLayer(np.zeros((2, 1)), np.zeros(1), np.array([0.5, 0.5]), Sigmoid())
    _, h = layer.forward(np.array([1.0, 0.0]))
    dot, _ = check_inner_product(layer, [1.0, 0.0], h, Difference())
    assert dot == 0.0


def test_inner_product_rectifier_dead_zone():
    # all pre-activations negative: the gradient rule is silent, the
    # descent rule is not, and the inner product is exactly zero
    rng = Rng(12)
    layer = CenteredLayer(rng.uniform_array((4, 3), -1, 1), np.full(3, -8.0),
                          rng.uniform_array((4,)), Rectifier())
    x = rng.uniform_array((4,))
    t = np.ones(3)
    dot, recomputed = check_inner_product(layer, x, t, Difference())
    assert dot == 0.0 and recomputed == 0.0
    assert np.all(gd_hetero(layer, x, t, SquaredError()).dW == 0.0)
    assert np.any(hd_hetero(layer, x, t, Difference()).dW != 0.0)


def test_auto_curl_closed_forms():
    res = check_auto_curl([1.0, 0.5], [1.0, 1.0])
    assert res.d12 == pytest.approx(2.0, abs=1e-12)
    assert res.d21 == pytest.approx(0.5, abs=1e-12)
    assert res.fd12 == pytest.approx(res.d12, abs=1e-5)
    assert res.fd21 == pytest.approx(res.d21, abs=1e-5)


def test_auto_curl_symmetric_special_case():
    res = check_auto_curl([0.7, 0.7], [0.4, 0.4])
    assert res.d12 == pytest.approx(res.d21, abs=1e-12)


def test_auto_curl_matches_the_library_rule():
    # the counterexample update is the negated library rule on the same net
    w = np.array([0.9, -0.4])
    x = np.array([0.6, 0.3])
    ae = TiedAutoEncoder(w.reshape(2, 1), np.zeros(1), np.zeros(2),
                         np.zeros(2), np.zeros(1), Identity(), Identity())
    upd = hd_auto(ae, x, Difference())
    h = float(w @ x)
    G = (w * h - x) * h
    assert np.allclose(upd.dW.ravel(), -G, atol=1e-14)


def test_hebb_cov_epoch_sums():
    rng = Rng(13)
    X = rng.bernoulli_array((10, 6))
    T = rng.uniform_array((10, 4))
    assert check_hebb_cov(X, T) <= 1e-10
    # a single repeated pattern centers to zero exactly
    Xr = np.tile(X[0], (5, 1))
    Tr = np.tile(T[0], (5, 1))
    assert check_hebb_cov(Xr, Tr) == 0.0


def test_uncentered_hebb_differs_from_covariance():
    rng = Rng(14)
    X = rng.bernoulli_array((10, 6))
    T = rng.uniform_array((10, 4))
    layer = CenteredLayer(np.zeros((6, 4)), np.zeros(4), np.zeros(6), Identity())
    from hebbnet.matlib import mean_rows
    from hebbnet.rules import cov_hetero, hebb_hetero

    hebb_sum = sum(hebb_hetero(layer, x, t).dW for x, t in zip(X, T))
    cov_sum = sum(cov_hetero(x, t, mean_rows(X), mean_rows(T)).dW for x, t in zip(X, T))
    assert np.max(np.abs(hebb_sum - cov_sum)) > 0.0


def test_glm_bernoulli_gradient():
    layer = random_layer(15, act=Sigmoid())
    rng = Rng(16)
    x = rng.uniform_array((4,))
    t = rng.bernoulli_array((3,))
    assert check_glm_bernoulli(layer, x, t) <= 1e-5
    # identical functions: cross-entropy is the negative Bernoulli log-likelihood
    hd_err = check_hd_loss_gradient(layer, x, t, Difference())
    glm_err = check_glm_bernoulli(layer, x, t)
    assert abs(hd_err - glm_err) < 1e-6


def test_glm_exact_fit_has_zero_update_and_zero_gradient():
    # with zero weights the output is sigmoid(b); targets set to that value
    # make both the update and the likelihood gradient vanish
    b = np.array([0.4, -0.2, 1.1])
    layer = CenteredLayer(np.zeros((4, 3)), b, np.full(4, 0.3), Sigmoid())
    x = Rng(18).uniform_array((4,))
    _, t = layer.forward(x)
    upd = hd_hetero(layer, x, t, Difference())
    assert np.all(upd.dW == 0.0) and np.all(upd.db == 0.0)
    # the likelihood gradient vanishes too (absolute check: relative error
    # is undefined at an exact optimum)
    from hebbnet.verify import _fd_grads

    def loglik():
        _, h = layer.forward(x)
        return float(np.sum(t * np.log(h) + (1 - t) * np.log(1 - h)))

    fd = _fd_grads(layer, ("W", "b"), loglik, 1e-6)
    assert max(np.max(np.abs(fd["W"])), np.max(np.abs(fd["b"]))) < 1e-9


def test_glm_check_requires_sigmoid():
    layer = random_layer(17, act=Identity())
    with pytest.raises(ValueError):
        check_glm_bernoulli(layer, np.zeros(4), np.zeros(3))


def test_figure1_report():
    rep = check_figure1()
    assert rep.ok
    assert rep.doubled_hd.tolist() == [[0, 1], [1, 0], [1, 1], [1, 1]]
    assert rep.doubled_hebb.tolist() == [[0, 0], [0, 0], [1, 1], [1, 1]]
    assert rep.doubled_cov.tolist() == rep.doubled_hebb.tolist()
    assert rep.threebit_hd.tolist() == [[0, 1, 1], [1, 0, 0], [1, 1, 0], [1, 0, 1]]


def test_battery_small_run_and_tap_format():
    results = run_battery(seed=0, instances=3)
    assert all(r.ok for r in results)
    tap = format_tap(results)
    lines = tap.splitlines()
    assert lines[0] == f"1..{len(results)}"
    assert all(line.startswith("ok") for line in lines[1:])


def test_inner_product_identity_assertion_fires_on_corruption():
    # sanity that the dual route actually guards something: feed a layer
    # whose backprop path is inconsistent with its stated derivative
    class Broken(Sigmoid):
        def chain(self, a, err):
            return err * (self.derivative(a) + 0.1)

    layer = CenteredLayer(np.zeros((2, 1)), np.zeros(1), np.array([0.5, 0.5]), Broken())
    with pytest.raises(VerificationError):
        check_inner_product(layer, [1.0, 0.0], [1.0], Difference())
