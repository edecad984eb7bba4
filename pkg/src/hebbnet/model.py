"""Centered single-layer network and tied-weight auto-encoder.

Both models are plain dataclasses over float64 arrays. Forward passes
accept a single pattern (1-d) or a batch (2-d, one pattern per row) and
return the pre-activation alongside the activity so update rules never
recompute it. Offsets are state owned by the training loop; forward never
touches them.

Serialization is a flat little-endian binary container:

    magic   4 bytes         b"HDN1"
    n, m    u32 each        input and output/hidden dimension
    acts    u8 each         activation id, second id 0xFF for a plain layer
    params  2 x f64         per present activation (unused slots zero)
    W       n*m f64         row-major
    b       m f64
    c       n f64           auto-encoder only
    mu      n f64
    lam     m f64           auto-encoder only

Activation ids follow the registry order in :mod:`hebbnet.activations`:
identity=0, sigmoid=1, step=2, softmax=3, rectifier=4, leaky_rectifier=5,
explin=6, scaled_explin=7, scaled_tanh=8, softsign=9, softplus=10,
invsqrt=11.

A side note on reparameterization: a centered layer can always be folded
into an uncentered one via ``b' = b - W^T mu`` (see
:func:`reparameterize_uncentered`). The reverse direction that instead
folds the bias into the offsets, ``mu' = mu - (W^T)^{-1} b``, exists only
for invertible ``W^T`` and is not provided as an operation.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .activations import (
    Activation,
    ExpLin,
    InvSqrt,
    LeakyRectifier,
    ScaledExpLin,
    ScaledTanh,
    activation_from_name,
)
from .matlib import Rng, ShapeError

__all__ = [
    "CenteredLayer",
    "TiedAutoEncoder",
    "ParamUpdate",
    "AEState",
    "init_layer",
    "init_autoencoder",
    "reparameterize_uncentered",
    "save_model",
    "load_model",
]

MAGIC = b"HDN1"


@dataclass
class ParamUpdate:
    """Unit-rate update direction; the learning rate is applied later."""

    dW: np.ndarray
    db: np.ndarray
    dc: np.ndarray | None = None


@dataclass
class CenteredLayer:
    W: np.ndarray            # (n, m)
    b: np.ndarray            # (m,)
    mu: np.ndarray           # (n,)
    act: Activation

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.mu = np.asarray(self.mu, dtype=float)
        if self.W.ndim != 2:
            raise ShapeError(f"W must be 2-d, got shape {self.W.shape}")
        n, m = self.W.shape
        if self.mu.shape != (n,):
            raise ShapeError(f"mu has shape {self.mu.shape}, expected ({n},)")
        if self.b.shape != (m,):
            raise ShapeError(f"b has shape {self.b.shape}, expected ({m},)")

    @property
    def n(self) -> int:
        return self.W.shape[0]

    @property
    def m(self) -> int:
        return self.W.shape[1]

    def forward(self, x):
        """Return (a, h) with a = W^T(x - mu) + b and h = act(a)."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ShapeError(f"input has last dimension {x.shape[-1]}, expected {self.n}")
        a = (x - self.mu) @ self.W + self.b
        return a, self.act.apply(a)

    def copy(self) -> "CenteredLayer":
        return CenteredLayer(self.W.copy(), self.b.copy(), self.mu.copy(), self.act)


class AEState(NamedTuple):
    a_enc: np.ndarray
    h: np.ndarray
    a_dec: np.ndarray
    z: np.ndarray


@dataclass
class TiedAutoEncoder:
    W: np.ndarray            # (n, m), shared by encoder and decoder
    b: np.ndarray            # (m,) encoder bias
    c: np.ndarray            # (n,) decoder bias
    mu: np.ndarray           # (n,) input offsets
    lam: np.ndarray          # (m,) hidden offsets
    enc_act: Activation
    dec_act: Activation

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        self.mu = np.asarray(self.mu, dtype=float)
        self.lam = np.asarray(self.lam, dtype=float)
        if self.W.ndim != 2:
            raise ShapeError(f"W must be 2-d, got shape {self.W.shape}")
        n, m = self.W.shape
        for name, arr, want in (
            ("b", self.b, (m,)),
            ("c", self.c, (n,)),
            ("mu", self.mu, (n,)),
            ("lam", self.lam, (m,)),
        ):
            if arr.shape != want:
                raise ShapeError(f"{name} has shape {arr.shape}, expected {want}")

    @property
    def n(self) -> int:
        return self.W.shape[0]

    @property
    def m(self) -> int:
        return self.W.shape[1]

    def forward(self, x) -> AEState:
        """Encode then decode: h = enc(W^T(x-mu)+b), z = dec(W(h-lam)+c)."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ShapeError(f"input has last dimension {x.shape[-1]}, expected {self.n}")
        a_enc = (x - self.mu) @ self.W + self.b
        h = self.enc_act.apply(a_enc)
        a_dec = (h - self.lam) @ self.W.T + self.c
        z = self.dec_act.apply(a_dec)
        return AEState(a_enc, h, a_dec, z)

    def copy(self) -> "TiedAutoEncoder":
        return TiedAutoEncoder(
            self.W.copy(), self.b.copy(), self.c.copy(),
            self.mu.copy(), self.lam.copy(), self.enc_act, self.dec_act,
        )


def _init_weights(n: int, m: int, rng: Rng) -> np.ndarray:
    r = np.sqrt(6.0) / np.sqrt(n + m)
    return rng.uniform_array((n, m), -r, r)


def init_layer(n: int, m: int, act: Activation, mu, rng: Rng) -> CenteredLayer:
    """Uniform +-sqrt(6)/sqrt(n+m) weights, zero bias, offsets as given."""
    if n < 1 or m < 1:
        raise ValueError("layer dimensions must be positive")
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n,):
        raise ShapeError(f"mu has shape {mu.shape}, expected ({n},)")
    return CenteredLayer(_init_weights(n, m, rng), np.zeros(m), mu.copy(), act)


def init_autoencoder(
    n: int,
    m: int,
    enc_act: Activation,
    dec_act: Activation,
    mu,
    rng: Rng,
    lambda_init: float = 0.5,
) -> TiedAutoEncoder:
    """Same weight init as the plain layer; hidden offsets start at 0.5."""
    if n < 1 or m < 1:
        raise ValueError("autoencoder dimensions must be positive")
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n,):
        raise ShapeError(f"mu has shape {mu.shape}, expected ({n},)")
    return TiedAutoEncoder(
        _init_weights(n, m, rng),
        np.zeros(m),
        np.zeros(n),
        mu.copy(),
        np.full(m, float(lambda_init)),
        enc_act,
        dec_act,
    )


def reparameterize_uncentered(layer: CenteredLayer) -> CenteredLayer:
    """Equivalent layer with zero offsets: b' = b - W^T mu."""
    b_prime = layer.b - layer.W.T @ layer.mu
    return CenteredLayer(layer.W.copy(), b_prime, np.zeros(layer.n), layer.act)


# ---------------------------------------------------------------------------
# serialization

_ACT_IDS = {
    "identity": 0,
    "sigmoid": 1,
    "step": 2,
    "softmax": 3,
    "rectifier": 4,
    "leaky_rectifier": 5,
    "explin": 6,
    "scaled_explin": 7,
    "scaled_tanh": 8,
    "softsign": 9,
    "softplus": 10,
    "invsqrt": 11,
}
_ACT_NAMES = {v: k for k, v in _ACT_IDS.items()}
_NO_ACT = 0xFF


def _act_params(act: Activation) -> tuple[float, float]:
    if isinstance(act, LeakyRectifier):
        return act.eps, 0.0
    if isinstance(act, ExpLin):
        return act.alpha, 0.0
    if isinstance(act, ScaledExpLin):
        return act.lam, act.alpha
    if isinstance(act, (ScaledTanh, InvSqrt)):
        return act.alpha, 0.0
    return 0.0, 0.0


def _act_from_id(act_id: int, p0: float, p1: float) -> Activation:
    name = _ACT_NAMES.get(act_id)
    if name is None:
        raise ValueError(f"unknown activation id {act_id}")
    if name == "leaky_rectifier":
        return activation_from_name(name, eps=p0)
    if name == "explin":
        return activation_from_name(name, alpha=p0)
    if name == "scaled_explin":
        return activation_from_name(name, lam=p0, alpha=p1)
    if name in ("scaled_tanh", "invsqrt"):
        return activation_from_name(name, alpha=p0)
    return activation_from_name(name)


def save_model(path, model) -> None:
    """Write a CenteredLayer or TiedAutoEncoder to the binary container."""
    is_ae = isinstance(model, TiedAutoEncoder)
    enc_act = model.enc_act if is_ae else model.act
    dec_id = _ACT_IDS[model.dec_act.name] if is_ae else _NO_ACT
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", model.n, model.m))
        f.write(struct.pack("<BB", _ACT_IDS[enc_act.name], dec_id))
        f.write(struct.pack("<2d", *_act_params(enc_act)))
        if is_ae:
            f.write(struct.pack("<2d", *_act_params(model.dec_act)))
        f.write(model.W.astype("<f8").tobytes(order="C"))
        f.write(model.b.astype("<f8").tobytes())
        if is_ae:
            f.write(model.c.astype("<f8").tobytes())
        f.write(model.mu.astype("<f8").tobytes())
        if is_ae:
            f.write(model.lam.astype("<f8").tobytes())


def load_model(path):
    """Read back a model written by :func:`save_model`."""
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:4] != MAGIC:
        raise ValueError(f"bad magic {blob[:4]!r}, expected {MAGIC!r}")
    n, m = struct.unpack_from("<II", blob, 4)
    enc_id, dec_id = struct.unpack_from("<BB", blob, 12)
    off = 14
    p0, p1 = struct.unpack_from("<2d", blob, off)
    off += 16
    enc_act = _act_from_id(enc_id, p0, p1)
    is_ae = dec_id != _NO_ACT
    if is_ae:
        q0, q1 = struct.unpack_from("<2d", blob, off)
        off += 16
        dec_act = _act_from_id(dec_id, q0, q1)

    def take(count):
        nonlocal off
        arr = np.frombuffer(blob, dtype="<f8", count=count, offset=off).astype(float)
        off += 8 * count
        return arr

    W = take(n * m).reshape(n, m)
    b = take(m)
    if is_ae:
        c = take(n)
    mu = take(n)
    if is_ae:
        lam = take(m)
        return TiedAutoEncoder(W, b, c, mu, lam, enc_act, dec_act)
    return CenteredLayer(W, b, mu, enc_act)
