import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from answerdiff.dataio import (
    Split,
    dump_records,
    generate_split,
    load_image_features,
    load_records,
    load_relevance_scores,
    load_split_manifest,
    sidecar_coverage,
)
from answerdiff.labels import record_to_mapping

from conftest import record


def write_lines(path, objs):
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objs:
            fh.write(json.dumps(obj) + "\n")


@pytest.fixture
def records_file(tmp_path):
    objs = [record_to_mapping(record(rid=f"q{i}")) for i in range(3)]
    path = tmp_path / "records.jsonl"
    write_lines(path, objs)
    return path


def test_load_records_in_order(records_file):
    records = load_records(records_file)
    assert [r.id for r in records] == ["q0", "q1", "q2"]


def test_load_records_missing_answers_names_line(tmp_path):
    objs = [record_to_mapping(record(rid=f"q{i}")) for i in range(3)]
    del objs[1]["answers"]
    path = tmp_path / "records.jsonl"
    write_lines(path, objs)
    with pytest.raises(ValueError, match="line 2"):
        load_records(path)


def test_load_records_duplicate_id(tmp_path):
    objs = [record_to_mapping(record(rid="q1")), record_to_mapping(record(rid="q1"))]
    path = tmp_path / "records.jsonl"
    write_lines(path, objs)
    with pytest.raises(ValueError, match="duplicate id 'q1'"):
        load_records(path)


def test_load_records_lenient_skips_and_counts(tmp_path):
    objs = [record_to_mapping(record(rid=f"q{i}")) for i in range(3)]
    objs[1]["answers"] = objs[1]["answers"][:3]
    path = tmp_path / "records.jsonl"
    write_lines(path, objs)
    errors = []
    records = load_records(path, lenient=True, errors=errors)
    assert [r.id for r in records] == ["q0", "q2"]
    assert len(errors) == 1 and errors[0][0] == 2


def test_roundtrip_dump_load(tmp_path, records_file):
    records = load_records(records_file)
    out = tmp_path / "again.jsonl"
    dump_records(records, out)
    assert load_records(out) == records


def test_malformed_json_line_number(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "q1"}\n{broken\n', encoding="utf-8")
    with pytest.raises(ValueError, match="line 1"):
        load_records(path)  # first line is schema-invalid already
    path.write_text(
        json.dumps(record_to_mapping(record(rid="q0"))) + "\n{broken\n", encoding="utf-8"
    )
    with pytest.raises(ValueError, match="line 2: malformed JSON"):
        load_records(path)


def test_load_image_features(tmp_path):
    path = tmp_path / "img.jsonl"
    write_lines(
        path,
        [{"image_id": "i1", "num_categories": 2, "num_tags": 7, "num_colors": 3, "num_faces": 0}],
    )
    feats = load_image_features(path)
    assert feats["i1"].num_tags == 7


def test_load_image_features_negative_count(tmp_path):
    path = tmp_path / "img.jsonl"
    write_lines(
        path,
        [{"image_id": "i1", "num_categories": 2, "num_tags": -1, "num_colors": 3, "num_faces": 0}],
    )
    with pytest.raises(ValueError, match="negative count"):
        load_image_features(path)


def test_load_image_features_empty_file(tmp_path):
    path = tmp_path / "img.jsonl"
    path.write_text("", encoding="utf-8")
    assert load_image_features(path) == {}


def test_load_image_features_duplicate(tmp_path):
    path = tmp_path / "img.jsonl"
    row = {"image_id": "i1", "num_categories": 0, "num_tags": 0, "num_colors": 0, "num_faces": 0}
    write_lines(path, [row, row])
    with pytest.raises(ValueError, match="duplicate image_id"):
        load_image_features(path)


def test_relevance_scores(tmp_path):
    path = tmp_path / "rel.jsonl"
    write_lines(path, [{"id": "q1", "relevance": 0.7}])
    assert load_relevance_scores(path) == {"q1": 0.7}
    write_lines(path, [{"id": "q1", "relevance": 1.5}])
    with pytest.raises(ValueError, match="outside"):
        load_relevance_scores(path)


# ---------------------------------------------------------------------------
# generate_split
# ---------------------------------------------------------------------------


def test_generate_split_20_ids_seed7_sizes_and_stability():
    ids = [f"q{i:02d}" for i in range(20)]
    assignment = generate_split(ids, (0.65, 0.10, 0.25), seed=7)
    sizes = {s: sum(1 for v in assignment.values() if v is s) for s in Split}
    assert sizes == {Split.TRAIN: 13, Split.VAL: 2, Split.TEST: 5}
    assert assignment == generate_split(ids, (0.65, 0.10, 0.25), seed=7)

    # independent seeded-shuffle oracle: stdlib shuffle over the sorted ids
    expected_order = sorted(ids)
    random.Random(7).shuffle(expected_order)
    expected = {}
    for rid in expected_order[:13]:
        expected[rid] = Split.TRAIN
    for rid in expected_order[13:15]:
        expected[rid] = Split.VAL
    for rid in expected_order[15:]:
        expected[rid] = Split.TEST
    assert assignment == expected


def test_generate_split_single_id_goes_to_train():
    assert generate_split(["only"], (0.65, 0.10, 0.25), seed=3) == {"only": Split.TRAIN}


def test_generate_split_input_order_invariant():
    ids = [f"r{i}" for i in range(37)]
    a = generate_split(ids, (0.65, 0.10, 0.25), seed=5)
    b = generate_split(list(reversed(ids)), (0.65, 0.10, 0.25), seed=5)
    assert a == b


def test_generate_split_rejects_bad_inputs():
    with pytest.raises(ValueError, match="empty"):
        generate_split([], (0.65, 0.10, 0.25), seed=0)
    with pytest.raises(ValueError, match="sum to 1"):
        generate_split(["a"], (0.6, 0.1, 0.2), seed=0)
    with pytest.raises(ValueError, match="unique"):
        generate_split(["a", "a"], (0.65, 0.10, 0.25), seed=0)


@settings(max_examples=50, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=200),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_generate_split_partition_property(n, seed):
    ids = [f"id{i}" for i in range(n)]
    assignment = generate_split(ids, (0.65, 0.10, 0.25), seed=seed)
    assert set(assignment) == set(ids)
    for proportion, split in zip((0.65, 0.10, 0.25), Split):
        size = sum(1 for v in assignment.values() if v is split)
        assert abs(size - n * proportion) <= 1


# ---------------------------------------------------------------------------
# split manifest
# ---------------------------------------------------------------------------


def test_split_manifest_roundtrip(tmp_path):
    path = tmp_path / "split.jsonl"
    write_lines(
        path,
        [
            {"id": "q1", "split": "train"},
            {"id": "q2", "split": "val"},
            {"id": "q3", "split": "test"},
        ],
    )
    assignment = load_split_manifest(path, ["q1", "q2", "q3"])
    assert assignment == {"q1": Split.TRAIN, "q2": Split.VAL, "q3": Split.TEST}


def test_split_manifest_missing_id(tmp_path):
    path = tmp_path / "split.jsonl"
    write_lines(path, [{"id": "q1", "split": "train"}])
    with pytest.raises(ValueError, match="missing record ids: q2"):
        load_split_manifest(path, ["q1", "q2"])


def test_split_manifest_unknown_split(tmp_path):
    path = tmp_path / "split.jsonl"
    write_lines(path, [{"id": "q1", "split": "dev"}])
    with pytest.raises(ValueError, match="unknown split name 'dev'"):
        load_split_manifest(path, ["q1"])


def test_sidecar_coverage():
    records = [record(rid=f"q{i}", image_id=f"i{i}") for i in range(4)]
    sidecar = {"i0": None, "i2": None}
    assert sidecar_coverage(records, sidecar) == 0.5
