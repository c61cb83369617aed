"""Co-occurrence, clarity, and worker-worker similarity (WWS) statistics.

Co-occurrence of reasons d_i and d_j is a causal-power-style measure,

    (P(d_j | d_i) - P(d_j | not d_i)) / (1 - P(d_j | not d_i)),

computed over ground-truth vectors at a chosen validity threshold.  Clarity
of a reason is how often it occurs alone.  The WWS metrics compare two
workers' raw annotations over the records both annotated: common-label
ratio, mean task-vector cosine, and Cohen's kappa over their pooled binary
decisions.

Undefined values (zero denominators, no shared records) propagate as None
and are excluded, not zero-filled, from averages.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .aggregate import bits_matrix
from .labels import N_REASONS, REASON_CODES, REASON_INDEX, Reason, VisualQuestionRecord, task_vector


def _reason_index(d) -> int:
    if isinstance(d, Reason):
        return REASON_INDEX[d]
    if isinstance(d, str):
        return REASON_INDEX[Reason.parse(d)]
    return int(d)


def co_occurrence(d_i, d_j, gtvs) -> float | None:
    """How often reason d_j arises when d_i occurs, relative to its base rate.

    Returns None when no record has d_i, no record lacks d_i, or d_j is
    present in every record lacking d_i (denominator zero).  The value is an
    exact integer ratio evaluated in one float division.
    """
    i = _reason_index(d_i)
    j = _reason_index(d_j)
    if i == j:
        raise ValueError("co-occurrence of a reason with itself is not defined")
    B = bits_matrix(gtvs)
    if B.shape[0] == 0:
        raise ValueError("empty ground-truth list")
    has_i = B[:, i] == 1
    n1 = int(np.count_nonzero(has_i))
    n0 = B.shape[0] - n1
    if n1 == 0 or n0 == 0:
        return None
    n11 = int(B[has_i, j].sum())  # d_j present where d_i present
    n01 = int(B[~has_i, j].sum())  # d_j present where d_i absent
    if n01 == n0:  # P(d_j | not d_i) = 1
        return None
    return (n11 * n0 - n01 * n1) / (n1 * (n0 - n01))


@dataclass(frozen=True)
class CoOccurrenceMatrix:
    """10x10 pairwise co-occurrence values; None on the diagonal and wherever
    the measure is undefined."""

    codes: tuple[str, ...]
    values: tuple[tuple[float | None, ...], ...]
    threshold: int


def co_occurrence_matrix(gtvs, threshold: int | None = None) -> CoOccurrenceMatrix:
    B = bits_matrix(gtvs)
    if threshold is None:
        ks = {g.threshold for g in gtvs if hasattr(g, "threshold")}
        if len(ks) != 1:
            raise ValueError("threshold not supplied and not inferable from inputs")
        threshold = ks.pop()
    rows = []
    for i in range(N_REASONS):
        rows.append(
            tuple(None if i == j else co_occurrence(i, j, B) for j in range(N_REASONS))
        )
    return CoOccurrenceMatrix(codes=REASON_CODES, values=tuple(rows), threshold=threshold)


def clarity(d, gtvs) -> float | None:
    """Fraction of records containing d where d is the only reason set."""
    i = _reason_index(d)
    B = bits_matrix(gtvs)
    has_d = B[:, i] == 1
    n_d = int(np.count_nonzero(has_d))
    if n_d == 0:
        return None
    alone = int(np.count_nonzero(has_d & (B.sum(axis=1) == 1)))
    return alone / n_d


# ---------------------------------------------------------------------------
# Worker-worker similarity over raw annotations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WorkerPairStats:
    worker_i: str
    worker_j: str
    shared_tasks: int
    wws_common: float | None
    wws_cosine: float | None
    wws_kappa: float | None


@dataclass(frozen=True)
class WorkerSummary:
    worker_id: str
    mean_common: float | None
    mean_cosine: float | None
    mean_kappa: float | None
    pair_count: int


def _worker_index(records: Sequence[VisualQuestionRecord]) -> dict[str, dict[str, np.ndarray]]:
    """worker id -> {record id -> 10-bit task vector}."""
    index: dict[str, dict[str, np.ndarray]] = {}
    for record in records:
        for ann in record.annotations:
            index.setdefault(ann.worker_id, {})[record.id] = np.asarray(
                task_vector(ann), dtype=np.float64
            )
    return index


def _shared_ids(index, w_i: str, w_j: str) -> list[str]:
    tasks_i = index.get(w_i, {})
    tasks_j = index.get(w_j, {})
    return sorted(set(tasks_i) & set(tasks_j))


def _cosine(vi: np.ndarray, vj: np.ndarray) -> float:
    # single sqrt of the norm product keeps cos(v, v) exactly 1.0
    return float(vi @ vj) / math.sqrt(float(vi @ vi) * float(vj @ vj))


def wws_common_labels(w_i: str, w_j: str, records) -> float | None:
    """Common-label ratio over shared records, normalized by w_i's own
    selection counts (asymmetric in the pair order)."""
    index = _worker_index(records)
    shared = _shared_ids(index, w_i, w_j)
    if not shared:
        return None
    common = 0
    own = 0
    for rid in shared:
        vi = index[w_i][rid]
        vj = index[w_j][rid]
        common += int((vi * vj).sum())
        own += int(vi.sum())
    return common / own


def wws_cosine(w_i: str, w_j: str, records) -> float | None:
    """Mean cosine similarity between the pair's task vectors on shared records."""
    index = _worker_index(records)
    shared = _shared_ids(index, w_i, w_j)
    if not shared:
        return None
    sims = [_cosine(index[w_i][rid], index[w_j][rid]) for rid in shared]
    return float(np.mean(sims))


def pooled_kappa(x, y) -> float | None:
    """Cohen's kappa over two aligned binary decision streams.

    p_o is the observed agreement fraction; p_e the chance agreement from the
    marginal positive rates.  None when p_e = 1 (both streams constant and
    equal), where kappa is undefined.
    """
    x = np.asarray(x, dtype=np.int64).ravel()
    y = np.asarray(y, dtype=np.int64).ravel()
    if x.size == 0 or x.size != y.size:
        raise ValueError("streams must be aligned and non-empty")
    n = x.size
    p_o = int(np.count_nonzero(x == y)) / n
    p_x = int(x.sum()) / n
    p_y = int(y.sum()) / n
    p_e = p_x * p_y + (1.0 - p_x) * (1.0 - p_y)
    if p_e == 1.0:
        return None
    return (p_o - p_e) / (1.0 - p_e)


def wws_kappa(w_i: str, w_j: str, records) -> float | None:
    """Cohen's kappa over the pair's pooled per-label decisions.

    All 10 label decisions on every shared record form one pair of binary
    streams; None with no shared records or when kappa is undefined.
    """
    index = _worker_index(records)
    shared = _shared_ids(index, w_i, w_j)
    if not shared:
        return None
    x = np.concatenate([index[w_i][rid] for rid in shared])
    y = np.concatenate([index[w_j][rid] for rid in shared])
    return pooled_kappa(x, y)


def worker_pair_stats(w_i: str, w_j: str, records) -> WorkerPairStats:
    index = _worker_index(records)
    shared = _shared_ids(index, w_i, w_j)
    return WorkerPairStats(
        worker_i=w_i,
        worker_j=w_j,
        shared_tasks=len(shared),
        wws_common=wws_common_labels(w_i, w_j, records),
        wws_cosine=wws_cosine(w_i, w_j, records),
        wws_kappa=wws_kappa(w_i, w_j, records),
    )


def worker_summary(records) -> list[WorkerSummary]:
    """Per-worker mean WWS over all partners sharing at least one record.

    For each worker w the asymmetric common-label metric uses w as the first
    argument.  Undefined pairings are excluded from each metric's mean;
    workers with no defined pairing for a metric report None for it.
    """
    index = _worker_index(records)
    workers = sorted(index)
    summaries = []
    for w in workers:
        commons: list[float] = []
        cosines: list[float] = []
        kappas: list[float] = []
        pair_count = 0
        for other in workers:
            if other == w:
                continue
            shared = _shared_ids(index, w, other)
            if not shared:
                continue
            pair_count += 1
            common = 0
            own = 0
            sims = []
            for rid in shared:
                vi = index[w][rid]
                vj = index[other][rid]
                common += int((vi * vj).sum())
                own += int(vi.sum())
                sims.append(_cosine(vi, vj))
            commons.append(common / own)
            cosines.append(float(np.mean(sims)))
            kappa = pooled_kappa(
                np.concatenate([index[w][rid] for rid in shared]),
                np.concatenate([index[other][rid] for rid in shared]),
            )
            if kappa is not None:
                kappas.append(kappa)
        summaries.append(
            WorkerSummary(
                worker_id=w,
                mean_common=float(np.mean(commons)) if commons else None,
                mean_cosine=float(np.mean(cosines)) if cosines else None,
                mean_kappa=float(np.mean(kappas)) if kappas else None,
                pair_count=pair_count,
            )
        )
    return summaries
