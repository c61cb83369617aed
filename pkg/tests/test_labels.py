import pytest
from hypothesis import given
from hypothesis import strategies as st

from answerdiff.labels import (
    ANSWER_REASONS,
    CANONICAL_ORDER,
    N_REASONS,
    QI_REASONS,
    REASON_CODES,
    Reason,
    Side,
    WorkerAnnotation,
    parse_record,
    record_to_mapping,
    task_vector,
    validate_record,
)

from conftest import annotation, record


def test_canonical_order():
    assert REASON_CODES == ("LQI", "IVE", "INV", "DFF", "AMB", "SBJ", "SYN", "GRN", "SPM", "OTH")
    assert N_REASONS == 10


def test_side_grouping():
    assert {r.value for r in QI_REASONS} == {"LQI", "IVE", "INV", "DFF", "AMB", "SBJ"}
    assert {r.value for r in ANSWER_REASONS} == {"SYN", "GRN", "SPM"}
    assert Reason.OTH.side is Side.UNGROUPED


def test_parse_case_insensitive():
    assert Reason.parse("amb") is Reason.AMB
    assert Reason.parse(" Syn ") is Reason.SYN
    with pytest.raises(ValueError, match="unknown label code"):
        Reason.parse("XYZ")


def test_task_vector_appendix_example():
    ann = annotation("w", "LQI", "AMB", "SBJ")
    assert task_vector(ann) == (1, 0, 0, 0, 1, 1, 0, 0, 0, 0)


def test_task_vector_single_and_full():
    assert task_vector(annotation("w", "OTH")) == (0,) * 9 + (1,)
    assert task_vector(annotation("w", *REASON_CODES)) == (1,) * 10


@given(st.sets(st.sampled_from(REASON_CODES), min_size=1))
def test_task_vector_popcount_matches_label_count(codes):
    ann = annotation("w", *codes)
    vec = task_vector(ann)
    assert sum(vec) == len(ann.labels)
    # injective: the set is recoverable from the vector
    recovered = {CANONICAL_ORDER[i].value for i, bit in enumerate(vec) if bit}
    assert recovered == codes


def test_validate_well_formed_record():
    assert validate_record(record()) == []


def test_validate_answer_count():
    bad = record(answers=["a"] * 9)
    assert validate_record(bad) == ["answers: expected 10, got 9"]


def test_validate_empty_label_set():
    anns = [annotation(f"w{i}", "AMB") for i in range(5)]
    anns[2] = WorkerAnnotation(worker_id="w2", labels=frozenset())
    assert validate_record(record(annotations=anns)) == ["annotation[2]: empty label set"]


def test_validate_duplicate_worker_id():
    anns = [annotation("w0", "AMB")] + [annotation(f"w{i}", "AMB") for i in range(4)]
    violations = validate_record(record(annotations=anns))
    assert violations == ["annotations: duplicate worker id 'w0'"]


def test_validate_mapping_unknown_code_and_duplicates():
    obj = record_to_mapping(record())
    obj["annotations"][1]["labels"] = ["AMB", "amb", "XYZ"]
    violations = validate_record(obj)
    assert "annotation[1]: unknown label code 'XYZ'" in violations
    assert "annotation[1]: duplicate label 'AMB'" in violations


def test_validate_mapping_missing_field():
    obj = record_to_mapping(record())
    del obj["answers"]
    assert "missing field 'answers'" in validate_record(obj)


def test_parse_record_roundtrip():
    original = record(annotations=[annotation(f"w{i}", "AMB", "SYN") for i in range(5)])
    rebuilt = parse_record(record_to_mapping(original))
    assert rebuilt == original


def test_parse_record_rejects_invalid():
    obj = record_to_mapping(record())
    obj["answers"] = obj["answers"][:4]
    with pytest.raises(ValueError, match="answers: expected 10, got 4"):
        parse_record(obj)
