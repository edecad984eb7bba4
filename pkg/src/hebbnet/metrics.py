"""Evaluation measures: mean absolute error, classification error, and
per-pattern recall curves."""

from __future__ import annotations

import numpy as np

from .matlib import ShapeError

__all__ = [
    "mae",
    "classification_error",
    "per_pattern_mae",
    "per_pattern_recon_mae",
    "spearman",
]


def mae(P, T) -> float:
    """Mean over all entries of |P - T|."""
    P = np.asarray(P, dtype=float)
    T = np.asarray(T, dtype=float)
    if P.shape != T.shape:
        raise ShapeError(f"shape mismatch {P.shape} vs {T.shape}")
    return float(np.mean(np.abs(P - T)))


def classification_error(H, labels) -> float:
    """Fraction of rows whose most active unit is not the true class.

    Argmax ties break toward the smallest index.
    """
    H = np.asarray(H, dtype=float)
    labels = np.asarray(labels)
    if H.ndim != 2 or H.shape[0] != labels.shape[0]:
        raise ShapeError(f"outputs {H.shape} do not match {labels.shape[0]} labels")
    return float(np.mean(np.argmax(H, axis=1) != labels))


def per_pattern_mae(layer, X, T) -> np.ndarray:
    """MAE of each pattern's recall under the current model."""
    X = np.asarray(X, dtype=float)
    T = np.asarray(T, dtype=float)
    if X.ndim != 2 or T.ndim != 2 or X.shape[0] != T.shape[0]:
        raise ShapeError("X and T must be matrices with equal row counts")
    _, H = layer.forward(X)
    return np.abs(H - T).mean(axis=1)


def per_pattern_recon_mae(ae, X) -> np.ndarray:
    """Reconstruction MAE of each pattern under a tied auto-encoder."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeError("X must be a matrix")
    st = ae.forward(X)
    return np.abs(st.z - X).mean(axis=1)


def _ranks(v: np.ndarray) -> np.ndarray:
    # average ranks for ties
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v), dtype=float)
    sv = v[order]
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeError("spearman expects two equally long vectors")
    rx = _ranks(x)
    ry = _ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = np.sqrt((rx * rx).sum() * (ry * ry).sum())
    if denom == 0.0:
        return 0.0
    return float((rx * ry).sum() / denom)
