"""Sigmoid linear scorers trained with full-batch gradient descent on
binary cross entropy plus an L2 penalty.

Features are standardized to train-set mean/stdev (zero-variance slots are
dropped to 0); weights start at zero, so training is fully deterministic.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_binary_matrix, check_feature_matrix, check_fitted
from .features import resolve_mask

_CLAMP = 1e-12


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def bce_loss(y, p) -> float:
    """Binary cross entropy -sum(y log p + (1-y) log(1-p)) over the entries.

    Probabilities are clamped to [1e-12, 1 - 1e-12], making the loss total.
    """
    y = np.asarray(y, dtype=np.float64)
    p = np.clip(np.asarray(p, dtype=np.float64), _CLAMP, 1.0 - _CLAMP)
    return float(-np.sum(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def bce_objective(w, b, X, y, l2: float) -> float:
    """Mean BCE of sigmoid(Xw + b) plus (l2 / 2) ||w||^2.

    Uses the logit form softplus(z) - y z, which equals the clamp-free BCE
    and stays stable for large |z|.
    """
    w = np.asarray(w, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    z = X @ w + b
    per_sample = np.logaddexp(0.0, z) - y * z
    return float(per_sample.mean() + 0.5 * l2 * (w @ w))


def bce_gradient(w, b, X, y, l2: float) -> tuple[np.ndarray, float]:
    """Analytic gradient of :func:`bce_objective` w.r.t. (w, b)."""
    w = np.asarray(w, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = X.shape[0]
    residual = sigmoid(X @ w + b) - y
    grad_w = X.T @ residual / n + l2 * w
    grad_b = float(residual.mean())
    return grad_w, grad_b


class ReasonLinearClassifier(BaseEstimator):
    """Independent logistic scorer per label over standardized features."""

    def __init__(
        self,
        learning_rate: float = 0.05,
        epochs: int = 500,
        l2: float = 1e-4,
        seed: int = 0,
        mask: str | None = None,
    ):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2
        self.seed = seed
        self.mask = mask

    def _check_config(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.l2 < 0:
            raise ValueError(f"l2 must be >= 0, got {self.l2}")

    def _check_width(self, X: np.ndarray) -> None:
        if self.mask is not None:
            expected = len(resolve_mask(self.mask))
            if X.shape[1] != expected:
                raise ValueError(
                    f"mask '{self.mask}' expects {expected} features, got {X.shape[1]}"
                )

    def fit(self, X, Y) -> "ReasonLinearClassifier":
        self._check_config()
        X = check_feature_matrix(X)
        self._check_width(X)
        Y = check_binary_matrix(Y, n_rows=X.shape[0]).astype(np.float64)
        n, d = X.shape
        if n < 2:
            raise ValueError("at least 2 training samples required")

        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        keep = scale > 0
        Xs = np.zeros_like(X)
        Xs[:, keep] = (X[:, keep] - mean[keep]) / scale[keep]

        n_labels = Y.shape[1]
        W = np.zeros((d, n_labels), dtype=np.float64)
        b = np.zeros(n_labels, dtype=np.float64)
        for _ in range(self.epochs):
            residual = sigmoid(Xs @ W + b) - Y
            W -= self.learning_rate * (Xs.T @ residual / n + self.l2 * W)
            b -= self.learning_rate * residual.mean(axis=0)

        self.n_features_in_ = d
        self.n_labels_ = n_labels
        self.coef_ = W
        self.intercept_ = b
        self.x_mean_ = mean
        self.x_scale_ = np.where(keep, scale, 1.0)  # dropped slots stay 0 via the mask
        self.active_slots_ = keep
        abs_w = np.abs(W.T)
        totals = abs_w.sum(axis=1, keepdims=True)
        self.feature_importances_ = np.divide(
            abs_w, totals, out=np.zeros_like(abs_w), where=totals > 0
        )
        return self

    def predict_proba(self, X) -> np.ndarray:
        check_fitted(self, "coef_")
        X = check_feature_matrix(X, n_features=self.n_features_in_)
        Xs = np.zeros_like(X)
        keep = self.active_slots_
        Xs[:, keep] = (X[:, keep] - self.x_mean_[keep]) / self.x_scale_[keep]
        return sigmoid(Xs @ self.coef_ + self.intercept_)

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int8)
