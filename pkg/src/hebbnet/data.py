"""Synthetic dataset generators, file loaders, and the baseline predictor.

Two file formats are supported:

* IDX: the big-endian binary container used for image/label corpora.
  The first two magic bytes are zero, the third is the element type
  (only 0x08, unsigned byte, is accepted), the fourth the number of
  dimensions, followed by that many big-endian u32 sizes and the raw
  data. Images (>= 2 dims) are flattened row-major and divided by 255;
  1-d files are read as class labels.
* dense text: one pattern per line, comma- or whitespace-separated
  decimals, optionally with a trailing integer class label per line.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .matlib import Rng

__all__ = [
    "Dataset",
    "ParseError",
    "gen_rand",
    "gen_randn",
    "load_idx",
    "load_dense",
    "baseline_mae",
    "one_hot",
]

IDX_UBYTE = 0x08


class ParseError(ValueError):
    """Malformed dataset file; the message carries the file location."""


@dataclass
class Dataset:
    X: np.ndarray | None = None
    T: np.ndarray | None = None
    labels: np.ndarray | None = None
    name: str = ""


def gen_rand(d: int, n: int, rng: Rng) -> Dataset:
    """d patterns of n i.i.d. fair coin flips in {0, 1}."""
    if d < 1 or n < 1:
        raise ValueError("dataset dimensions must be positive")
    return Dataset(X=rng.bernoulli_array((d, n), 0.5), name=f"rand:{d}x{n}")


def gen_randn(d: int, n: int, rng: Rng) -> Dataset:
    """Standard normal draws min-max rescaled (globally) to [0, 1]."""
    if d * n < 2:
        raise ValueError("need at least two entries to rescale")
    X = rng.normal_array((d, n))
    lo, hi = X.min(), X.max()
    if hi == lo:
        raise ValueError("degenerate draw: all entries equal, cannot rescale")
    return Dataset(X=(X - lo) / (hi - lo), name=f"randn:{d}x{n}")


def load_idx(path) -> Dataset:
    """Load one IDX file: images become X rows (scaled by 1/255), a 1-d
    file becomes class labels."""
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < 4:
        raise ParseError(f"{path}: truncated header at offset 0 (need 4 bytes)")
    if blob[0] != 0 or blob[1] != 0:
        raise ParseError(f"{path}: bad magic at offset 0 ({blob[0]:#04x} {blob[1]:#04x})")
    if blob[2] != IDX_UBYTE:
        raise ParseError(f"{path}: unsupported element type {blob[2]:#04x} at offset 2")
    ndim = blob[3]
    if ndim < 1:
        raise ParseError(f"{path}: zero dimensions at offset 3")
    header_end = 4 + 4 * ndim
    if len(blob) < header_end:
        raise ParseError(f"{path}: truncated dimension table at offset {len(blob)}")
    dims = struct.unpack(f">{ndim}I", blob[4:header_end])
    count = int(np.prod(dims))
    if len(blob) != header_end + count:
        raise ParseError(
            f"{path}: expected {count} data bytes at offset {header_end}, "
            f"found {len(blob) - header_end}"
        )
    raw = np.frombuffer(blob, dtype=np.uint8, offset=header_end, count=count)
    name = str(path)
    if ndim == 1:
        return Dataset(labels=raw.astype(np.int64), name=name)
    X = raw.reshape(dims[0], -1).astype(float) / 255.0
    return Dataset(X=X, name=name)


def load_dense(path, label_last: bool = False) -> Dataset:
    """Load a dense text file, one pattern per line."""
    rows = []
    labels = []
    width = None
    with open(path, "r") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            try:
                values = [float(tok) for tok in tokens]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-numeric token ({exc})") from None
            if label_last:
                if len(values) < 2:
                    raise ParseError(f"{path}:{lineno}: need at least one value and a label")
                label = values[-1]
                if label != int(label):
                    raise ParseError(f"{path}:{lineno}: label column must be an integer")
                labels.append(int(label))
                values = values[:-1]
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ParseError(
                    f"{path}:{lineno}: ragged row ({len(values)} values, expected {width})"
                )
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    ds = Dataset(X=np.asarray(rows, dtype=float), name=str(path))
    if label_last:
        ds.labels = np.asarray(labels, dtype=np.int64)
    return ds


def baseline_mae(T) -> float:
    """MAE of the constant predictor that always returns the column means."""
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] < 1:
        raise ValueError("baseline_mae needs a matrix with at least one row")
    return float(np.mean(np.abs(T - T.mean(axis=0))))


def one_hot(labels, num_classes: int | None = None) -> np.ndarray:
    """One-hot target rows: 1 for the true class, 0 elsewhere."""
    labels = np.asarray(labels, dtype=np.int64)
    if num_classes is None:
        num_classes = int(labels.max()) + 1
    T = np.zeros((labels.shape[0], num_classes))
    T[np.arange(labels.shape[0]), labels] = 1.0
    return T
