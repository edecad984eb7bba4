import os

import numpy as np
import pytest
from hypothesis import settings

from hebbnet.activations import Sigmoid
from hebbnet.matlib import Rng
from hebbnet.model import CenteredLayer

settings.register_profile("det", derandomize=True, max_examples=60)
settings.load_profile("det")

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def random_layer(seed, act=None, n=4, m=3):
    rng = Rng(seed)
    return CenteredLayer(
        rng.uniform_array((n, m), -1.0, 1.0),
        rng.uniform_array((m,), -0.5, 0.5),
        rng.uniform_array((n,), 0.0, 1.0),
        act or Sigmoid(),
    )


@pytest.fixture
def rng():
    return Rng(1234)


def assert_close(a, b, tol=1e-12):
    assert np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))) <= tol
