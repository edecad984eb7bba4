"""Dense float64 array helpers and the seeded random number generator.

All numeric state in this package lives in plain numpy arrays with dtype
float64: vectors are 1-d arrays, matrices are 2-d row-major arrays whose
rows index the input dimension (weight matrices are n_inputs x n_outputs).
The helpers here add the explicit shape checking the rest of the package
relies on.

The random number generator is pinned to one fully specified algorithm so
that every stream reproduces bit-for-bit across runs, platforms, and
independent re-implementations:

* state seeding: four consecutive outputs of splitmix64 started from the
  64-bit seed form the xoshiro state ``s[0..3]``,
* stream: xoshiro256** (Blackman & Vigna),
* doubles: ``(next_u64() >> 11) * 2.0**-53``, uniform in ``[0, 1)``,
* normals: Box-Muller on the uniform pair ``(1 - u1, u2)``, returning
  ``r*cos`` then ``r*sin`` with ``r = sqrt(-2 ln(1-u1))``,
* bounded integers: rejection sampling below the largest multiple of n,
* shuffles: Fisher-Yates from the top index downwards,
* derived seeds: ``h = mix64(h + 0x9E3779B97F4A7C15 + tag)`` per tag,
  where ``mix64`` is the splitmix64 output scramble.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ShapeError",
    "Rng",
    "derive_seed",
    "outer",
    "matvec_t",
    "mean_rows",
]

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class ShapeError(ValueError):
    """Raised when array arguments have inconsistent dimensions."""


def _mix64(z: int) -> int:
    """splitmix64 output scramble (fmix of the incremented state)."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _M64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _M64
    return z ^ (z >> 31)


def derive_seed(seed: int, *tags: int) -> int:
    """Deterministically derive a child seed from ``seed`` and integer tags.

    Folding each tag through one splitmix64 step keeps unrelated streams
    (per-trial inits, shuffle order, dataset draws) statistically
    independent while staying reproducible from a single root seed.
    """
    h = seed & _M64
    for tag in tags:
        h = _mix64((h + _GOLDEN + (tag & _M64)) & _M64)
    return h


class Rng:
    """xoshiro256** generator seeded through splitmix64.

    Single-owner: a generator instance must not be shared between
    concurrent consumers. Use :meth:`derive` to split off independent
    streams instead.
    """

    def __init__(self, seed: int):
        self.seed = seed & _M64
        s = self.seed
        state = []
        for _ in range(4):
            s = (s + _GOLDEN) & _M64
            state.append(_mix64(s))
        if not any(state):  # xoshiro state must never be all zero
            state[0] = 1
        self._s = state

    def derive(self, *tags: int) -> "Rng":
        return Rng(derive_seed(self.seed, *tags))

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (s1 * 5) & _M64
        result = ((result << 7 | result >> 57) & _M64) * 9 & _M64
        t = (s1 << 17) & _M64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = (s3 << 45 | s3 >> 19) & _M64
        self._s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """One double, uniform in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_array(self, shape, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        n = int(np.prod(shape))
        u = np.fromiter((self.uniform() for _ in range(n)), dtype=float, count=n)
        return (low + (high - low) * u).reshape(shape)

    def normal_array(self, shape) -> np.ndarray:
        n = int(np.prod(shape))
        out = np.empty(n, dtype=float)
        for i in range(0, n, 2):
            u1 = 1.0 - self.uniform()  # in (0, 1]: keeps the log finite
            u2 = self.uniform()
            r = np.sqrt(-2.0 * np.log(u1))
            theta = 2.0 * np.pi * u2
            out[i] = r * np.cos(theta)
            if i + 1 < n:
                out[i + 1] = r * np.sin(theta)
        return out.reshape(shape)

    def bernoulli_array(self, shape, p: float = 0.5) -> np.ndarray:
        n = int(np.prod(shape))
        u = np.fromiter(
            (1.0 if self.uniform() < p else 0.0 for _ in range(n)),
            dtype=float,
            count=n,
        )
        return u.reshape(shape)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) // n * n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of range(n)."""
        perm = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = self.randbelow(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def _as_vector(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ShapeError(f"{name} must be 1-d, got shape {v.shape}")
    return v


def _as_matrix(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-d, got shape {m.shape}")
    return m


def outer(u, v) -> np.ndarray:
    """Outer product u v^T of two vectors, shape (len(u), len(v))."""
    return np.outer(_as_vector(u, "u"), _as_vector(v, "v"))


def matvec_t(W, x) -> np.ndarray:
    """W^T x for W of shape (n, m) and x of length n."""
    W = _as_matrix(W, "W")
    x = _as_vector(x, "x")
    if W.shape[0] != x.shape[0]:
        raise ShapeError(f"W has {W.shape[0]} rows but x has length {x.shape[0]}")
    return W.T @ x


def mean_rows(X) -> np.ndarray:
    """Column-wise arithmetic mean of a (d, n) matrix, d >= 1."""
    X = _as_matrix(X, "X")
    if X.shape[0] < 1:
        raise ShapeError("mean_rows needs at least one row")
    return X.mean(axis=0)
