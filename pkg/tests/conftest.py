"""Shared builders for hand-made records and annotations."""

import pytest

from answerdiff.labels import Reason, VisualQuestionRecord, WorkerAnnotation


def annotation(worker_id, *codes):
    return WorkerAnnotation(
        worker_id=worker_id, labels=frozenset(Reason.parse(c) for c in codes)
    )


def record(rid="q1", annotations=None, question="what is this?", answers=None,
           image_id="img1", dataset="test"):
    if annotations is None:
        annotations = [annotation(f"w{i}", "AMB") for i in range(5)]
    if answers is None:
        answers = [f"answer {i}" for i in range(10)]
    return VisualQuestionRecord(
        id=rid,
        dataset=dataset,
        question=question,
        image_id=image_id,
        answers=tuple(answers),
        annotations=tuple(annotations),
    )


@pytest.fixture
def make_annotation():
    return annotation


@pytest.fixture
def make_record():
    return record
