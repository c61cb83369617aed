"""Ranking metrics: step average precision, precision-recall curves, and
experiment reports.

Average precision uses the step definition: sort by score descending (ties
broken by stable original index), then AP = sum over positives of the
precision at each positive's rank, divided by the positive count.  Labels
with no positives report None and are excluded from mean AP rather than
deflating it.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_score_label_pair
from .labels import REASON_CODES


def average_precision(scores, labels) -> float | None:
    """Step AP of one label's score ranking; None if no positive labels."""
    s, y = check_score_label_pair(scores, labels)
    n_pos = int(y.sum())
    if n_pos == 0:
        return None
    order = np.argsort(-s, kind="stable")
    ys = y[order]
    ranks = np.arange(1, ys.shape[0] + 1)
    tp = np.cumsum(ys)
    hit = ys == 1
    return float(np.sum(tp[hit] / ranks[hit]) / n_pos)


@dataclass(frozen=True)
class PRCurve:
    """One (recall, precision) point per distinct score threshold, in
    descending score order."""

    thresholds: tuple[float, ...]
    precisions: tuple[float, ...]
    recalls: tuple[float, ...]

    @property
    def points(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.recalls, self.precisions))


def pr_curve(scores, labels) -> PRCurve:
    """Precision-recall curve of one label's ranking.

    With tied scores a whole tie block enters at once, so the implied step
    area matches :func:`average_precision` exactly only when scores are
    distinct.
    """
    s, y = check_score_label_pair(scores, labels)
    n_pos = int(y.sum())
    if n_pos == 0:
        raise ValueError("precision-recall curve requires at least one positive")
    order = np.argsort(-s, kind="stable")
    ss = s[order]
    ys = y[order]
    cuts = np.append(np.nonzero(np.diff(ss))[0], ss.shape[0] - 1)  # inclusive per threshold
    tp = np.cumsum(ys)[cuts]
    k = cuts + 1
    return PRCurve(
        thresholds=tuple(float(v) for v in ss[cuts]),
        precisions=tuple(float(v) for v in tp / k),
        recalls=tuple(float(v) for v in tp / n_pos),
    )


@dataclass(frozen=True)
class EvaluationReport:
    """Per-label APs plus context for one model on one split."""

    model: str
    mask: str | None
    split: str
    threshold: int
    n_test: int
    per_label_ap: tuple[float | None, ...]
    label_names: tuple[str, ...] = field(default=REASON_CODES)

    @property
    def mean_ap(self) -> float | None:
        defined = [ap for ap in self.per_label_ap if ap is not None]
        if not defined:
            return None
        return float(np.mean(defined))

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "mask": self.mask,
            "split": self.split,
            "threshold": self.threshold,
            "n_test": self.n_test,
            "label_names": list(self.label_names),
            "per_label_ap": list(self.per_label_ap),
            "mean_ap": self.mean_ap,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "EvaluationReport":
        return cls(
            model=obj["model"],
            mask=obj.get("mask"),
            split=obj["split"],
            threshold=obj["threshold"],
            n_test=obj["n_test"],
            per_label_ap=tuple(obj["per_label_ap"]),
            label_names=tuple(obj.get("label_names", REASON_CODES)),
        )


def evaluate(
    scores,
    ground_truth,
    *,
    model: str,
    mask: str | None = None,
    split: str = "test",
    threshold: int = 2,
    label_names: Sequence[str] = REASON_CODES,
) -> EvaluationReport:
    """Per-label AP of a score matrix against aligned binary ground truth."""
    S = np.asarray(scores, dtype=np.float64)
    G = np.asarray(ground_truth)
    if S.ndim != 2 or G.shape != S.shape:
        raise ValueError(f"scores {S.shape} and ground truth {G.shape} must align")
    if S.shape[0] == 0:
        raise ValueError("empty test set")
    per_label = tuple(average_precision(S[:, j], G[:, j]) for j in range(S.shape[1]))
    return EvaluationReport(
        model=model,
        mask=mask,
        split=split,
        threshold=threshold,
        n_test=S.shape[0],
        per_label_ap=per_label,
        label_names=tuple(label_names),
    )


def _delta(value: float | None, base: float | None) -> float | None:
    if value is None or base is None:
        return None
    return value - base


def compare(reports: Sequence[EvaluationReport], baseline_model: str | None = None) -> list[dict]:
    """Tabulate reports against a designated baseline row.

    Every row gets the overall and per-label values, deltas versus the
    baseline, and a list of the cells where the model underperforms it.
    All reports must share split and threshold.
    """
    if not reports:
        raise ValueError("no reports to compare")
    contexts = {(r.split, r.threshold) for r in reports}
    if len(contexts) != 1:
        raise ValueError(f"mismatched splits/thresholds across reports: {sorted(contexts)}")
    names = {(r.label_names) for r in reports}
    if len(names) != 1:
        raise ValueError("reports use different label vocabularies")

    if baseline_model is None:
        base = reports[0]
    else:
        matches = [r for r in reports if r.model == baseline_model]
        if not matches:
            raise ValueError(f"baseline model {baseline_model!r} not among the reports")
        base = matches[0]

    rows = []
    for r in reports:
        below = []
        overall_delta = _delta(r.mean_ap, base.mean_ap)
        if overall_delta is not None and overall_delta < 0:
            below.append("Overall")
        row: dict = {
            "model": r.model,
            "mask": r.mask,
            "overall": r.mean_ap,
            "overall_delta": overall_delta,
        }
        for code, ap, base_ap in zip(r.label_names, r.per_label_ap, base.per_label_ap):
            d = _delta(ap, base_ap)
            row[code] = ap
            row[f"{code}_delta"] = d
            if d is not None and d < 0:
                below.append(code)
        row["below_baseline"] = tuple(below)
        rows.append(row)
    return rows
