import math
from fractions import Fraction

import numpy as np
import pytest

from answerdiff.agreement import (
    clarity,
    co_occurrence,
    co_occurrence_matrix,
    pooled_kappa,
    worker_pair_stats,
    worker_summary,
    wws_common_labels,
    wws_cosine,
    wws_kappa,
)
from answerdiff.labels import REASON_CODES

from conftest import annotation, record


def idx(code):
    return REASON_CODES.index(code)


def bits(*codes):
    row = [0] * 10
    for c in codes:
        row[idx(c)] = 1
    return row


# ---------------------------------------------------------------------------
# co-occurrence and clarity
# ---------------------------------------------------------------------------


def test_co_occurrence_perfect_implication():
    gtvs = np.array([bits("AMB", "SYN"), bits("AMB", "SYN"), bits()])
    assert co_occurrence("AMB", "SYN", gtvs) == 1.0


def test_co_occurrence_independence():
    gtvs = np.array([bits("AMB", "SYN"), bits("AMB"), bits("SYN"), bits()])
    assert co_occurrence("AMB", "SYN", gtvs) == 0.0


def test_co_occurrence_hand_enumeration():
    # records: {A,B}, {A,B}, {A}, {B}, {} with A=AMB, B=SYN
    gtvs = np.array([bits("AMB", "SYN"), bits("AMB", "SYN"), bits("AMB"), bits("SYN"), bits()])
    # P(B|A) = 2/3, P(B|~A) = 1/2 -> (2/3 - 1/2) / (1/2) = 1/3
    assert co_occurrence("AMB", "SYN", gtvs) == pytest.approx(1 / 3, abs=0)
    assert co_occurrence("AMB", "SYN", gtvs) == float(Fraction(1, 3))


def test_co_occurrence_guards():
    every = np.array([bits("AMB", "SYN"), bits("SYN")])
    assert co_occurrence("AMB", "SYN", every) is None  # P(SYN | ~AMB) = 1
    no_di = np.array([bits("SYN"), bits()])
    assert co_occurrence("AMB", "SYN", no_di) is None
    all_di = np.array([bits("AMB"), bits("AMB")])
    assert co_occurrence("AMB", "SYN", all_di) is None
    with pytest.raises(ValueError, match="itself"):
        co_occurrence("AMB", "AMB", every)


def test_co_occurrence_bounded_by_one():
    rng = np.random.default_rng(3)
    B = (rng.random((200, 10)) < 0.4).astype(int)
    for i in range(10):
        for j in range(10):
            if i == j:
                continue
            value = co_occurrence(i, j, B)
            if value is not None:
                assert value <= 1.0


def test_co_occurrence_matrix_diagonal_none():
    rng = np.random.default_rng(4)
    B = (rng.random((50, 10)) < 0.3).astype(int)
    matrix = co_occurrence_matrix(B, threshold=2)
    assert matrix.threshold == 2
    for i in range(10):
        assert matrix.values[i][i] is None
        for j in range(10):
            if i != j:
                assert matrix.values[i][j] == co_occurrence(i, j, B)


def test_clarity_endpoints():
    alone = np.array([bits("SPM"), bits("SPM")])
    assert clarity("SPM", alone) == 1.0
    together = np.array([bits("SPM", "AMB"), bits("SPM", "SYN")])
    assert clarity("SPM", together) == 0.0
    assert clarity("AMB", np.array([bits("SYN")])) is None


def test_clarity_count():
    gtvs = np.array(
        [bits("DFF"), bits("DFF", "AMB"), bits("DFF", "SYN"), bits("DFF", "GRN"), bits("AMB")]
    )
    assert clarity("DFF", gtvs) == 0.25


# ---------------------------------------------------------------------------
# WWS metrics
# ---------------------------------------------------------------------------


def two_worker_records(pairs):
    """Records annotated by workers a and b with given label sets, padded
    with three filler workers so each record stays valid."""
    records = []
    for i, (labels_a, labels_b) in enumerate(pairs):
        anns = [
            annotation("a", *labels_a),
            annotation("b", *labels_b),
            annotation(f"f{i}a", "OTH"),
            annotation(f"f{i}b", "OTH"),
            annotation(f"f{i}c", "OTH"),
        ]
        records.append(record(rid=f"q{i}", annotations=anns))
    return records


def test_wws_common_identical_and_disjoint():
    identical = two_worker_records([(("AMB", "SYN"), ("AMB", "SYN"))] * 3)
    assert wws_common_labels("a", "b", identical) == 1.0
    disjoint = two_worker_records([(("AMB",), ("SYN",))] * 2)
    assert wws_common_labels("a", "b", disjoint) == 0.0


def test_wws_common_asymmetry():
    records = two_worker_records([(("AMB", "SYN"), ("AMB",))])
    assert wws_common_labels("a", "b", records) == 0.5
    assert wws_common_labels("b", "a", records) == 1.0


def test_wws_common_no_shared_tasks():
    records = two_worker_records([(("AMB",), ("AMB",))])
    assert wws_common_labels("a", "zzz", records) is None


def test_wws_cosine_cases():
    identical = two_worker_records([(("AMB", "SYN"), ("AMB", "SYN"))])
    assert wws_cosine("a", "b", identical) == 1.0
    disjoint = two_worker_records([(("AMB",), ("SYN",))])
    assert wws_cosine("a", "b", disjoint) == 0.0
    partial = two_worker_records([(("AMB", "SYN"), ("AMB",))])
    assert abs(wws_cosine("a", "b", partial) - 1 / math.sqrt(2)) <= 1e-12


def test_pooled_kappa_exact_cases():
    assert pooled_kappa([1, 1, 0, 0], [1, 0, 1, 0]) == 0.0
    assert pooled_kappa([1, 0, 1, 0], [1, 0, 1, 0]) == 1.0
    assert pooled_kappa([1, 1, 1], [1, 1, 1]) is None  # both constant, p_e = 1
    assert pooled_kappa([0, 0], [0, 0]) is None


def test_wws_kappa_on_records():
    identical = two_worker_records([(("AMB", "SYN"), ("AMB", "SYN"))] * 2)
    assert wws_kappa("a", "b", identical) == 1.0
    all_ten = two_worker_records([(REASON_CODES, REASON_CODES)])
    assert wws_kappa("a", "b", all_ten) is None  # constant-positive streams
    assert wws_kappa("a", "nobody", identical) is None


def test_worker_pair_stats_counts_shared_tasks():
    records = two_worker_records([(("AMB",), ("AMB",)), (("SYN",), ("GRN",))])
    stats = worker_pair_stats("a", "b", records)
    assert stats.shared_tasks == 2
    assert stats.wws_common == 0.5


def test_worker_summary_single_worker_reports_none():
    records = two_worker_records([(("AMB",), ("AMB",))])
    rows = {s.worker_id: s for s in worker_summary(records)}
    # filler workers share tasks only via this single record
    lone = rows["f0a"]
    assert lone.pair_count > 0
    assert rows["a"].mean_common is not None


def test_worker_summary_identical_pair():
    records = two_worker_records([(("AMB", "SYN"), ("AMB", "SYN"))] * 2)
    rows = {s.worker_id: s for s in worker_summary(records)}
    # a's partners: b (identical) plus four filler workers with OTH-only sets
    assert rows["b"].mean_common is not None
    pair_only = [
        record(
            rid=f"p{i}",
            annotations=[
                annotation("x", "AMB", "SYN"),
                annotation("y", "AMB", "SYN"),
                annotation(f"g{i}a", "OTH"),
                annotation(f"g{i}b", "OTH"),
                annotation(f"g{i}c", "OTH"),
            ],
        )
        for i in range(2)
    ]
    rows = {s.worker_id: s for s in worker_summary(pair_only)}
    assert rows["x"].mean_cosine is not None


def test_worker_summary_three_worker_bruteforce():
    # three focal workers annotate the same two records (plus per-record filler)
    sets = {
        "a": [("AMB", "SYN"), ("AMB",)],
        "b": [("AMB",), ("AMB", "GRN")],
        "c": [("SYN",), ("GRN",)],
    }
    records = []
    for i in range(2):
        anns = [annotation(w, *sets[w][i]) for w in ("a", "b", "c")]
        anns += [annotation(f"z{i}a", "OTH"), annotation(f"z{i}b", "OTH")]
        records.append(record(rid=f"q{i}", annotations=anns))

    all_workers = sorted({ann.worker_id for r in records for ann in r.annotations})
    partners = [w for w in all_workers if w != "a"]  # sorted, matching summary order
    rows = {s.worker_id: s for s in worker_summary(records)}

    commons = [wws_common_labels("a", w, records) for w in partners]
    assert rows["a"].mean_common == np.mean([v for v in commons if v is not None])
    cosines = [wws_cosine("a", w, records) for w in partners]
    assert rows["a"].mean_cosine == np.mean([v for v in cosines if v is not None])
    kappas = [wws_kappa("a", w, records) for w in partners]
    assert rows["a"].mean_kappa == np.mean([v for v in kappas if v is not None])
    assert rows["a"].pair_count == len(partners)


def test_wws_cosine_task_order_invariance():
    pairs = [(("AMB", "SYN"), ("AMB",)), (("GRN",), ("GRN", "SPM")), (("LQI",), ("LQI",))]
    forward = two_worker_records(pairs)
    backward = list(reversed(forward))
    assert wws_cosine("a", "b", forward) == wws_cosine("a", "b", backward)
    assert wws_common_labels("a", "b", forward) == wws_common_labels("a", "b", backward)


def test_wws_self_consistency_on_duplicated_data():
    records = two_worker_records([(("AMB", "SYN"), ("AMB",))] * 2)
    assert wws_common_labels("a", "a", records) == 1.0
    assert wws_cosine("a", "a", records) == 1.0
