import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hebbnet.activations import (
    CrossEntropy,
    Difference,
    DomainError,
    ExpLin,
    HebbianDescentLoss,
    Identity,
    InvSqrt,
    LeakyHinge,
    LeakyRectifier,
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
    UnsupportedLossError,
    activation_from_name,
    error_term_from_name,
    gd_loss,
    hd_loss,
)
from hebbnet.matlib import ShapeError

ALL_ACTS = [
    Identity(), Sigmoid(), Step(), Softmax(), Rectifier(), LeakyRectifier(),
    ExpLin(), ScaledExpLin(), ScaledTanh(1.5), SoftSign(), SoftPlus(), InvSqrt(0.5),
]
PIECEWISE = (Step, Rectifier, LeakyRectifier, ExpLin, ScaledExpLin)


def test_apply_examples():
    assert Sigmoid().apply(np.array([0.0]))[0] == 0.5
    assert np.array_equal(Rectifier().apply(np.array([-2.0, 3.0])), [0.0, 3.0])
    assert abs(Sigmoid().apply(np.array([4.0]))[0] - 0.9820) < 1e-4


def test_derivative_examples():
    assert np.array_equal(Identity().derivative(np.array([7.0, -7.0])), [1.0, 1.0])
    assert np.array_equal(Step().derivative(np.array([0.3, -0.3])), [0.0, 0.0])
    # closed form sigma(4)*(1 - sigma(4))
    assert abs(Sigmoid().derivative(np.array([4.0]))[0] - 0.017663) < 1e-6


def test_step_tie_at_zero_goes_to_one():
    assert Step().apply(np.array([0.0]))[0] == 1.0


@pytest.mark.parametrize("act", ALL_ACTS, ids=lambda a: a.name)
def test_derivative_nonnegative(act):
    a = np.linspace(-10.0, 10.0, 401)
    assert np.all(act.derivative(a) >= 0.0)


@pytest.mark.parametrize("act", ALL_ACTS, ids=lambda a: a.name)
def test_derivative_matches_central_difference(act):
    eps = 1e-6
    grid = np.linspace(-10.0, 10.0, 161)
    if isinstance(act, PIECEWISE):
        grid = grid[np.abs(grid) > 1e-6]  # kink exclusion zone
    if isinstance(act, Step):
        return  # derivative is identically zero away from the jump; trivial
    for a in grid:
        av = np.array([a])
        if isinstance(act, Softmax):
            continue  # vector-coupled; covered by the jacobian test
        fd = (act.apply(av + eps) - act.apply(av - eps)) / (2 * eps)
        assert abs(act.derivative(av)[0] - fd[0]) < 1e-5, (act.name, a)


@given(st.lists(st.floats(-30, 30), min_size=2, max_size=6))
def test_softmax_is_probability_vector(a):
    h = Softmax().apply(np.asarray(a))
    assert np.all(h >= 0.0)
    assert abs(h.sum() - 1.0) < 1e-12


def test_softmax_jacobian_rows_sum_to_zero():
    J = Softmax().jacobian(np.array([0.5, -1.0, 2.0]))
    assert np.allclose(J.sum(axis=1), 0.0, atol=1e-14)
    assert np.allclose(J, J.T)


def test_softmax_bounded_output():
    h = Sigmoid().apply(np.array([800.0, -800.0]))
    assert np.all(np.isfinite(h))
    s = ScaledTanh(2.0).apply(np.array([1e6]))
    assert abs(s[0]) <= 2.0
    t = SoftSign().apply(np.array([1e12]))
    assert abs(t[0]) < 1.0


# --- error terms


def test_difference_examples():
    d = Difference()
    assert np.array_equal(d.value(np.array([0.3, 0.7]), np.array([0.3, 0.7])), [0.0, 0.0])
    assert np.array_equal(d.value(np.array([1.0]), np.array([0.5])), [-0.5])


def test_sat_tanh_zero_and_bound():
    term = SaturatingTanh(alpha=1.0, beta=1.0)
    assert term.value(np.array([0.0]), np.array([0.0]))[0] == 0.0


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_sat_tanh_never_exceeds_alpha(t, h, alpha, beta):
    v = SaturatingTanh(alpha, beta).value(np.array([t]), np.array([h]))
    assert abs(v[0]) <= alpha


def test_leaky_hinge_values():
    term = LeakyHinge(alpha=0.01)
    v = term.value(np.array([1.0, -1.0, 1.0]), np.array([0.2, 0.3, 1.5]))
    assert np.allclose(v, [-1.0, 1.0, 0.01])


def test_error_shape_mismatch():
    with pytest.raises(ShapeError):
        Difference().value(np.array([1.0]), np.array([1.0, 2.0]))


# --- losses


def test_gd_loss_examples():
    sq = SquaredError()
    assert gd_loss(sq, np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 0.0
    assert gd_loss(sq, np.array([1.0]), np.array([0.5])) == 0.125
    ce = CrossEntropy()
    assert abs(gd_loss(ce, np.array([1.0]), np.array([0.5])) - np.log(2.0)) < 1e-12


def test_cross_entropy_domain():
    strict = CrossEntropy(clamp=False)
    with pytest.raises(DomainError):
        strict.value(np.array([1.0]), np.array([1.0]))
    # the default clamps instead of raising
    assert CrossEntropy().value(np.array([1.0]), np.array([1.0])) < 1e-10


def test_hd_loss_examples():
    sig, idn = Sigmoid(), Identity()
    a = np.array([0.0])
    assert hd_loss(sig, Difference(), np.array([1.0]), np.array([1.0]), a) < 1e-9
    got = hd_loss(sig, Difference(), np.array([1.0]), np.array([0.5]), a)
    assert abs(got - np.log(2.0)) < 1e-12
    assert hd_loss(idn, SaturatingTanh(1.0, 1.0), np.array([0.0]), np.array([0.0]), a) == 0.0


def test_hd_loss_unsupported_pairs():
    a = np.array([0.5])
    with pytest.raises(UnsupportedLossError):
        hd_loss(Rectifier(), Difference(), np.array([1.0]), np.array([0.5]), a)
    with pytest.raises(UnsupportedLossError):
        hd_loss(Sigmoid(), SaturatingTanh(), np.array([1.0]), np.array([0.5]), a)
    with pytest.raises(UnsupportedLossError):
        hd_loss(Step(), Difference(), np.array([1.0]), np.array([1.0]), a)


CATALOGUE_DIFF = [
    Identity(), Sigmoid(), ScaledTanh(1.5), SoftPlus(), SoftSign(),
    LeakyRectifier(), ExpLin(), ScaledExpLin(), InvSqrt(0.5),
]


@pytest.mark.parametrize("act", CATALOGUE_DIFF, ids=lambda a: a.name)
def test_hd_loss_gradient_through_h_is_the_error_term(act):
    # d/da of the catalogued loss (anchor frozen) must give back the raw
    # error term, the defining property of the catalogue
    term = Difference()
    a0 = np.array([0.8, -0.6, 0.3])
    if isinstance(act, ScaledTanh):
        t = np.array([0.4, -0.9, 0.2])
    else:
        t = np.array([0.4, 0.1, 0.9])
    h0 = act.apply(a0)
    want = term.value(t, h0)
    eps = 1e-6
    for j in range(3):
        ap = a0.copy(); ap[j] += eps
        am = a0.copy(); am[j] -= eps
        fd = (hd_loss(act, term, t, act.apply(ap), a0) -
              hd_loss(act, term, t, act.apply(am), a0)) / (2 * eps)
        assert abs(fd - want[j]) < 1e-5, (act.name, j)


def test_hd_loss_smooth_huber_value():
    # (alpha/beta) * sum log cosh(beta (h - t))
    term = SaturatingTanh(alpha=2.0, beta=0.5)
    t = np.array([0.0])
    h = np.array([3.0])
    want = (2.0 / 0.5) * np.log(np.cosh(0.5 * 3.0))
    assert abs(hd_loss(Identity(), term, t, h, h) - want) < 1e-12


def test_hebbian_descent_loss_object():
    loss = HebbianDescentLoss(Sigmoid(), Difference())
    a = np.array([0.3])
    h = Sigmoid().apply(a)
    t = np.array([1.0])
    assert abs(loss.value(t, h, a) - hd_loss(Sigmoid(), Difference(), t, h, a)) < 1e-15
    err = loss.error(t, h, a)
    assert np.allclose(err, (h - t) / (h * (1 - h)))
    with pytest.raises(ValueError):
        loss.value(t, h)


def test_name_registries():
    for name in ("identity", "sigmoid", "step", "softmax", "rectifier",
                 "leaky_rectifier", "explin", "scaled_explin", "scaled_tanh",
                 "softsign", "softplus", "invsqrt"):
        assert activation_from_name(name).name == name
    for name in ("difference", "sat_tanh", "leaky_hinge"):
        assert error_term_from_name(name).name == name
    with pytest.raises(ValueError):
        activation_from_name("tanhh")
    with pytest.raises(ValueError):
        error_term_from_name("diff")
