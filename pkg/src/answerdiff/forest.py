"""Multi-label random forest built from scratch on the tree module.

One independent forest is trained per label.  Every tree derives its own
64-bit seed from (seed, label_index, tree_index), draws a bootstrap sample
of size n with replacement, and subsamples candidate features at every
split; scores are the mean leaf positive-fraction over trees.  Training is
bitwise reproducible for a fixed configuration regardless of ``n_jobs``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_binary_matrix, check_feature_matrix, check_fitted
from .features import resolve_mask
from .seeding import derive_seed
from .tree import Tree, class_weights, grow_tree, value_codes


def resolve_features_per_split(features_per_split, n_features: int) -> int:
    """Resolve the per-split candidate count; "sqrt" means floor(sqrt(d))."""
    if features_per_split == "sqrt":
        return max(1, int(np.sqrt(n_features)))
    m = int(features_per_split)
    if m < 1:
        raise ValueError(f"features_per_split must be >= 1, got {features_per_split!r}")
    return min(m, n_features)


class ReasonForestClassifier(BaseEstimator):
    """Per-label random forests scoring the 10 disagreement reasons.

    Parameters
    ----------
    n_trees : trees per label forest.
    max_depth : maximum tree depth (root at depth 0).
    class_weight : "balanced" (n / (2 n_c) per class) or "uniform".
    features_per_split : candidate features sampled per split; "sqrt" uses
        floor(sqrt(n_features)).
    min_samples_split : minimum samples (bootstrap multiplicity counted)
        a node needs to be split.
    bootstrap : draw a size-n bootstrap per tree; False trains every tree
        on the full sample.
    seed : master seed; per-tree generators derive from it.
    mask : optional ablation-mask name; when set, fit/predict require the
        matching feature width.
    n_jobs : worker threads for tree building; results are identical for
        any value.
    """

    def __init__(
        self,
        n_trees: int = 1000,
        max_depth: int = 20,
        class_weight: str = "balanced",
        features_per_split="sqrt",
        min_samples_split: int = 2,
        bootstrap: bool = True,
        seed: int = 0,
        mask: str | None = None,
        n_jobs: int = 1,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.class_weight = class_weight
        self.features_per_split = features_per_split
        self.min_samples_split = min_samples_split
        self.bootstrap = bootstrap
        self.seed = seed
        self.mask = mask
        self.n_jobs = n_jobs

    def _check_config(self) -> None:
        if self.n_trees < 1:
            raise ValueError(f"n_trees must be >= 1, got {self.n_trees}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_samples_split < 2:
            raise ValueError(f"min_samples_split must be >= 2, got {self.min_samples_split}")
        if self.class_weight not in ("balanced", "uniform"):
            raise ValueError(f"unknown class_weight {self.class_weight!r}")
        if self.n_jobs < 1:
            raise ValueError(f"n_jobs must be >= 1, got {self.n_jobs}")

    def _check_width(self, X: np.ndarray, fitted: bool) -> None:
        if self.mask is not None:
            expected = len(resolve_mask(self.mask))
            if X.shape[1] != expected:
                raise ValueError(
                    f"mask '{self.mask}' expects {expected} features, got {X.shape[1]}"
                )
        if fitted and X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")

    def fit(self, X, Y) -> "ReasonForestClassifier":
        self._check_config()
        X = check_feature_matrix(X)
        self._check_width(X, fitted=False)
        Y = check_binary_matrix(Y, n_rows=X.shape[0])
        n, d = X.shape
        if n < 2:
            raise ValueError("at least 2 training samples required")
        n_labels = Y.shape[1]
        m = resolve_features_per_split(self.features_per_split, d)

        codes, values, _ = value_codes(X)
        scorers: list = [None] * n_labels
        importances = np.zeros((n_labels, d), dtype=np.float64)
        tasks = []  # (label, tree_index, y, sample_weight)
        for lab in range(n_labels):
            y = Y[:, lab].astype(np.float64)
            n_pos = int(y.sum())
            if n_pos == 0:
                scorers[lab] = ("constant", 0.0)
                continue
            if n_pos == n:
                scorers[lab] = ("constant", 1.0)
                continue
            w_pos, w_neg = class_weights(y, self.class_weight)
            sw = np.where(y == 1.0, w_pos, w_neg)
            scorers[lab] = ("trees", [None] * self.n_trees)
            for t in range(self.n_trees):
                tasks.append((lab, t, y, sw))

        def build(task):
            lab, t, y, sw = task
            rng = np.random.default_rng(derive_seed(self.seed, lab, t))
            rows = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            return grow_tree(
                codes,
                values,
                y,
                sw,
                rows,
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                max_features=m,
                rng=rng,
            )

        if self.n_jobs == 1 or not tasks:
            results = [build(task) for task in tasks]
        else:
            with ThreadPoolExecutor(max_workers=self.n_jobs) as pool:
                results = list(pool.map(build, tasks))

        raw_importance: dict[int, list[np.ndarray]] = {}
        for (lab, t, _, _), (tree, imp) in zip(tasks, results):
            scorers[lab][1][t] = tree
            raw_importance.setdefault(lab, []).append(imp)
        for lab, imps in raw_importance.items():
            mean_imp = np.mean(imps, axis=0)
            total = mean_imp.sum()
            importances[lab] = mean_imp / total if total > 0 else 0.0

        self.n_features_in_ = d
        self.n_labels_ = n_labels
        self.label_scorers_ = scorers
        self.feature_importances_ = importances
        return self

    def predict_proba(self, X) -> np.ndarray:
        """Scores in [0, 1] per (record, label): mean leaf fraction over trees."""
        check_fitted(self, "label_scorers_")
        X = check_feature_matrix(X, n_features=self.n_features_in_)
        out = np.empty((X.shape[0], self.n_labels_), dtype=np.float64)
        for lab, scorer in enumerate(self.label_scorers_):
            kind, payload = scorer
            if kind == "constant":
                out[:, lab] = payload
            else:
                acc = np.zeros(X.shape[0], dtype=np.float64)
                for tree in payload:
                    acc += tree.predict(X)
                out[:, lab] = acc / len(payload)
        return out

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int8)


def forest_trees(model: ReasonForestClassifier, label: int) -> list[Tree]:
    """The per-label tree list, or [] for a constant scorer."""
    kind, payload = model.label_scorers_[label]
    return payload if kind == "trees" else []
