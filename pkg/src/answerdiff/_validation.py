"""Input-validation helpers shared by the estimators and metrics."""

from __future__ import annotations

import numpy as np
from sklearn.exceptions import NotFittedError


def check_feature_matrix(X, n_features: int | None = None, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-D float64 array, optionally pinning the width."""
    try:
        X = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a rectangular numeric matrix") from None
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"{name} has {X.shape[1]} features, expected {n_features}")
    return X


def check_binary_matrix(Y, n_rows: int | None = None, name: str = "Y") -> np.ndarray:
    """Coerce to a 2-D int8 array of 0/1 values; 1-D input becomes one column."""
    Y = np.asarray(Y)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.ndim != 2:
        raise ValueError(f"{name} must be 1- or 2-dimensional, got shape {Y.shape}")
    if n_rows is not None and Y.shape[0] != n_rows:
        raise ValueError(f"{name} has {Y.shape[0]} rows, expected {n_rows}")
    vals = np.unique(Y)
    if not np.isin(vals, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 values")
    return Y.astype(np.int8)


def check_score_label_pair(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    """Validate an aligned (scores, binary labels) pair of equal length."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.ndim != 1 or y.ndim != 1:
        raise ValueError("scores and labels must be 1-dimensional")
    if s.shape[0] != y.shape[0]:
        raise ValueError(f"length mismatch: {s.shape[0]} scores vs {y.shape[0]} labels")
    if not np.isin(np.unique(y), (0, 1)).all():
        raise ValueError("labels must be binary")
    return s, y.astype(np.int64)


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"this {type(estimator).__name__} instance is not fitted yet; call fit first"
        )
