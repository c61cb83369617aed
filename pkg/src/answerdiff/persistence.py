"""Versioned JSON model files with a content checksum.

Format version 1 stores the estimator kind, its constructor params, label
and feature names, and explicit per-label scorer payloads (node arrays for
forests, weight vectors for the linear model).  Floats round-trip exactly
through JSON's repr encoding, so a loaded model reproduces bitwise-equal
scores.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .forest import ReasonForestClassifier
from .labels import REASON_CODES
from .linear import ReasonLinearClassifier
from .tree import Tree

FORMAT_VERSION = 1


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _checksum(payload: dict) -> str:
    return hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()


def _tree_to_obj(tree: Tree) -> dict:
    return {
        "feature": tree.feature.tolist(),
        "threshold": tree.threshold.tolist(),
        "left": tree.left.tolist(),
        "right": tree.right.tolist(),
        "value": tree.value.tolist(),
    }


def _tree_from_obj(obj: dict) -> Tree:
    return Tree(
        feature=np.asarray(obj["feature"], dtype=np.int32),
        threshold=np.asarray(obj["threshold"], dtype=np.float64),
        left=np.asarray(obj["left"], dtype=np.int32),
        right=np.asarray(obj["right"], dtype=np.int32),
        value=np.asarray(obj["value"], dtype=np.float64),
    )


def _forest_payload(model: ReasonForestClassifier) -> dict:
    scorers = []
    for kind, payload in model.label_scorers_:
        if kind == "constant":
            scorers.append({"kind": "constant", "value": payload})
        else:
            scorers.append({"kind": "trees", "trees": [_tree_to_obj(t) for t in payload]})
    return {"scorers": scorers}


def _linear_payload(model: ReasonLinearClassifier) -> dict:
    return {
        "coef": model.coef_.tolist(),
        "intercept": model.intercept_.tolist(),
        "x_mean": model.x_mean_.tolist(),
        "x_scale": model.x_scale_.tolist(),
        "active_slots": [bool(v) for v in model.active_slots_],
    }


def save_model(model, path, feature_names=None) -> None:
    """Write a fitted estimator to a versioned, checksummed JSON file."""
    if not isinstance(model, (ReasonForestClassifier, ReasonLinearClassifier)):
        raise TypeError(f"cannot save model of type {type(model).__name__}")
    if not hasattr(model, "n_features_in_"):
        raise ValueError("model is not fitted")
    if isinstance(model, ReasonForestClassifier):
        kind = "forest"
        body = _forest_payload(model)
    else:
        kind = "linear"
        body = _linear_payload(model)
    if feature_names is not None and len(feature_names) != model.n_features_in_:
        raise ValueError("feature_names length does not match the model width")

    label_names = (
        list(REASON_CODES) if model.n_labels_ == len(REASON_CODES) else
        [f"label_{i}" for i in range(model.n_labels_)]
    )
    payload = {
        "kind": kind,
        "params": model.get_params(),
        "mask": model.mask,
        "n_features": model.n_features_in_,
        "n_labels": model.n_labels_,
        "label_names": label_names,
        "feature_names": list(feature_names) if feature_names is not None else None,
        "feature_importances": model.feature_importances_.tolist(),
        **body,
    }
    document = {
        "format_version": FORMAT_VERSION,
        "checksum": _checksum(payload),
        "payload": payload,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path):
    """Load a model file, verifying version and checksum.

    Returns the rebuilt estimator; the stored feature names, if any, are
    attached as ``feature_names_``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        document = json.load(fh)
    for field in ("format_version", "checksum", "payload"):
        if field not in document:
            raise ValueError(f"{path}: model file missing field '{field}'")
    version = document["format_version"]
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format_version {version!r}")
    payload = document["payload"]
    if _checksum(payload) != document["checksum"]:
        raise ValueError(f"{path}: model file checksum mismatch")

    kind = payload["kind"]
    params = payload["params"]
    if kind == "forest":
        model = ReasonForestClassifier(**params)
        scorers = []
        for entry in payload["scorers"]:
            if entry["kind"] == "constant":
                scorers.append(("constant", float(entry["value"])))
            else:
                scorers.append(("trees", [_tree_from_obj(t) for t in entry["trees"]]))
        model.label_scorers_ = scorers
    elif kind == "linear":
        model = ReasonLinearClassifier(**params)
        model.coef_ = np.asarray(payload["coef"], dtype=np.float64)
        model.intercept_ = np.asarray(payload["intercept"], dtype=np.float64)
        model.x_mean_ = np.asarray(payload["x_mean"], dtype=np.float64)
        model.x_scale_ = np.asarray(payload["x_scale"], dtype=np.float64)
        model.active_slots_ = np.asarray(payload["active_slots"], dtype=bool)
    else:
        raise ValueError(f"{path}: unknown model kind {kind!r}")

    model.n_features_in_ = int(payload["n_features"])
    model.n_labels_ = int(payload["n_labels"])
    model.feature_importances_ = np.asarray(payload["feature_importances"], dtype=np.float64)
    model.feature_names_ = (
        tuple(payload["feature_names"]) if payload.get("feature_names") else None
    )
    model.label_names_ = tuple(payload["label_names"])
    return model
