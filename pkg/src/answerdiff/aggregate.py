"""Ground-truth aggregation of worker annotations and descriptive tallies.

A reason counts as ground truth for a record when at least ``k`` of the five
workers selected it (the validity threshold; k=1 trusts any single worker,
k=5 requires full consensus).
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .labels import (
    N_REASONS,
    REASON_INDEX,
    VisualQuestionRecord,
    WorkerAnnotation,
)

_QI_INDICES = tuple(range(0, 6))
_ANSWER_INDICES = tuple(range(6, 9))


@dataclass(frozen=True)
class GroundTruthVector:
    """Binary reason flags for one record at a validity threshold."""

    bits: tuple[int, ...]
    threshold: int


class SourceType(enum.Enum):
    QI_ONLY = "qi_only"
    A_ONLY = "a_only"
    BOTH = "both"
    NEITHER = "neither"


def aggregate_ground_truth(annotations: Sequence[WorkerAnnotation], k: int) -> GroundTruthVector:
    """Threshold worker selections into one binary vector.

    Bit d is set iff at least ``k`` workers selected reason d.  At k=1 this
    is the union of the workers' label sets, at k=5 their intersection.
    """
    if not 1 <= k <= 5:
        raise ValueError(f"validity threshold must be in 1..5, got {k}")
    counts = [0] * N_REASONS
    for ann in annotations:
        for reason in ann.labels:
            counts[REASON_INDEX[reason]] += 1
    return GroundTruthVector(bits=tuple(int(c >= k) for c in counts), threshold=k)


def ground_truth_matrix(records: Sequence[VisualQuestionRecord], k: int) -> np.ndarray:
    """(n_records, 10) 0/1 matrix of ground truth at threshold ``k``."""
    return np.array(
        [aggregate_ground_truth(r.annotations, k).bits for r in records], dtype=np.int8
    ).reshape(len(records), N_REASONS)


def bits_matrix(gtvs) -> np.ndarray:
    """Coerce ground-truth vectors (or any 0/1 rows) to an (n, 10) int array."""
    if isinstance(gtvs, np.ndarray):
        arr = gtvs.astype(np.int64)
    else:
        rows = [g.bits if isinstance(g, GroundTruthVector) else g for g in gtvs]
        arr = np.asarray(rows, dtype=np.int64)
    if arr.size == 0:
        return arr.reshape(0, N_REASONS)
    if arr.ndim != 2 or arr.shape[1] != N_REASONS:
        raise ValueError(f"expected shape (n, {N_REASONS}), got {arr.shape}")
    return arr


def source_type(gtv: GroundTruthVector) -> SourceType:
    """Classify which side the set reasons blame; OTH is ignored."""
    bits = gtv.bits if isinstance(gtv, GroundTruthVector) else tuple(gtv)
    qi = any(bits[i] for i in _QI_INDICES)
    ans = any(bits[i] for i in _ANSWER_INDICES)
    if qi and ans:
        return SourceType.BOTH
    if qi:
        return SourceType.QI_ONLY
    if ans:
        return SourceType.A_ONLY
    return SourceType.NEITHER


def unique_reason_count(gtv: GroundTruthVector) -> int:
    bits = gtv.bits if isinstance(gtv, GroundTruthVector) else tuple(gtv)
    return sum(bits)


def label_frequency(gtvs) -> np.ndarray:
    """Per-label fraction of records with the bit set (canonical order)."""
    B = bits_matrix(gtvs)
    if B.shape[0] == 0:
        raise ValueError("empty ground-truth list")
    return B.sum(axis=0) / B.shape[0]


def source_type_distribution(gtvs) -> dict[SourceType, float]:
    """Fractions of records per source type; the four values sum to 1."""
    B = bits_matrix(gtvs)
    n = B.shape[0]
    if n == 0:
        raise ValueError("empty ground-truth list")
    qi = B[:, list(_QI_INDICES)].any(axis=1)
    ans = B[:, list(_ANSWER_INDICES)].any(axis=1)
    counts = {
        SourceType.BOTH: int(np.count_nonzero(qi & ans)),
        SourceType.QI_ONLY: int(np.count_nonzero(qi & ~ans)),
        SourceType.A_ONLY: int(np.count_nonzero(~qi & ans)),
        SourceType.NEITHER: int(np.count_nonzero(~qi & ~ans)),
    }
    return {st: counts[st] / n for st in SourceType}


def unique_reason_histogram(gtvs) -> np.ndarray:
    """Fractions of records having 0..10 unique reasons (length-11 array)."""
    B = bits_matrix(gtvs)
    n = B.shape[0]
    if n == 0:
        raise ValueError("empty ground-truth list")
    counts = np.bincount(B.sum(axis=1), minlength=N_REASONS + 1)
    return counts / n
