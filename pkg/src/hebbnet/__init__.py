"""Centered single-layer associative networks.

One weight matrix, four ways to train it: Hebbian-descent, gradient
descent, Hebb's rule, and the covariance rule, for hetero-associative,
classification, and tied-weight auto-associative learning, plus a numeric
battery that verifies the analytic relationships between the rules.
"""

from .activations import (
    CrossEntropy,
    Difference,
    HebbianDescentLoss,
    LeakyHinge,
    SaturatingTanh,
    SquaredError,
    activation_from_name,
    error_term_from_name,
    gd_loss,
    hd_loss,
)
from .data import Dataset, baseline_mae, gen_rand, gen_randn, load_dense, load_idx, one_hot
from .matlib import Rng, derive_seed, mean_rows
from .metrics import classification_error, mae, per_pattern_mae, per_pattern_recon_mae
from .model import (
    CenteredLayer,
    ParamUpdate,
    TiedAutoEncoder,
    init_autoencoder,
    init_layer,
    load_model,
    reparameterize_uncentered,
    save_model,
)
from .rules import (
    Covariance,
    GradientDescent,
    Hebb,
    HebbianDescent,
    apply_update,
    cov_hetero,
    gd_auto,
    gd_hetero,
    hd_auto,
    hd_hetero,
    hebb_hetero,
)
from .train import (
    BUILTIN_ETA_GRID,
    BUILTIN_OMEGA_GRID,
    GridResult,
    HyperGrid,
    TrainConfig,
    TrainTrace,
    grid_search,
    train_auto,
    train_hetero,
    update_offsets,
)

__version__ = "0.1.0"
