"""Label vocabulary and core record types.

Ten reason codes explain why the crowdsourced answers to a visual question
differ.  Six concern the question-image pair (LQI, IVE, INV, DFF, AMB, SBJ),
three concern the answers themselves (SYN, GRN, SPM), and OTH is an ungrouped
catch-all.  ``CANONICAL_ORDER`` fixes the slot order used by every serialized
vector, CSV column set, and model output in this package.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass


class Side(enum.Enum):
    """Which part of a visual question a reason blames."""

    QI = "qi"
    ANSWER = "answer"
    UNGROUPED = "ungrouped"


class Reason(enum.Enum):
    LQI = "LQI"  # low quality image
    IVE = "IVE"  # insufficient visual evidence
    INV = "INV"  # invalid question
    DFF = "DFF"  # difficult
    AMB = "AMB"  # ambiguous
    SBJ = "SBJ"  # subjective
    SYN = "SYN"  # synonymous answers
    GRN = "GRN"  # answer granularity
    SPM = "SPM"  # spam
    OTH = "OTH"  # other

    @property
    def side(self) -> Side:
        return _SIDES[self]

    @classmethod
    def parse(cls, code: str) -> "Reason":
        """Look up a reason by its 3-letter code, case-insensitively."""
        try:
            return cls[code.strip().upper()]
        except (KeyError, AttributeError):
            raise ValueError(f"unknown label code {code!r}") from None

    def __str__(self) -> str:  # uppercase code on output
        return self.value


CANONICAL_ORDER: tuple[Reason, ...] = tuple(Reason)
REASON_CODES: tuple[str, ...] = tuple(r.value for r in CANONICAL_ORDER)
N_REASONS = len(CANONICAL_ORDER)
REASON_INDEX: dict[Reason, int] = {r: i for i, r in enumerate(CANONICAL_ORDER)}

_SIDES = {
    Reason.LQI: Side.QI,
    Reason.IVE: Side.QI,
    Reason.INV: Side.QI,
    Reason.DFF: Side.QI,
    Reason.AMB: Side.QI,
    Reason.SBJ: Side.QI,
    Reason.SYN: Side.ANSWER,
    Reason.GRN: Side.ANSWER,
    Reason.SPM: Side.ANSWER,
    Reason.OTH: Side.UNGROUPED,
}

QI_REASONS: frozenset[Reason] = frozenset(r for r in Reason if r.side is Side.QI)
ANSWER_REASONS: frozenset[Reason] = frozenset(r for r in Reason if r.side is Side.ANSWER)

ANSWERS_PER_RECORD = 10
WORKERS_PER_RECORD = 5


@dataclass(frozen=True)
class WorkerAnnotation:
    """One worker's reason selection for one record.

    ``labels`` is a non-empty set; the annotation interface forces workers to
    pick at least one reason.
    """

    worker_id: str
    labels: frozenset[Reason]


@dataclass(frozen=True)
class VisualQuestionRecord:
    """A visual question with its 10 answers and 5 worker annotations."""

    id: str
    dataset: str
    question: str
    image_id: str
    answers: tuple[str, ...]
    annotations: tuple[WorkerAnnotation, ...]


def task_vector(annotation: WorkerAnnotation) -> tuple[int, ...]:
    """10-bit indicator of the labels one worker selected, canonical order."""
    return tuple(1 if r in annotation.labels else 0 for r in CANONICAL_ORDER)


def validate_record(record) -> list[str]:
    """Collect every invariant violation for one record.

    Accepts either a :class:`VisualQuestionRecord` or the raw JSON mapping
    shape used by the JSONL loaders.  Returns a deterministically ordered
    list of human-readable violations; an empty list means the record is
    valid and every downstream operation will accept it.
    """
    if isinstance(record, VisualQuestionRecord):
        return _validate_typed(record)
    if isinstance(record, Mapping):
        return _validate_mapping(record)
    return ["record: expected a JSON object"]


def _validate_typed(record: VisualQuestionRecord) -> list[str]:
    violations = []
    if len(record.answers) != ANSWERS_PER_RECORD:
        violations.append(f"answers: expected {ANSWERS_PER_RECORD}, got {len(record.answers)}")
    if len(record.annotations) != WORKERS_PER_RECORD:
        violations.append(
            f"annotations: expected {WORKERS_PER_RECORD}, got {len(record.annotations)}"
        )
    for i, ann in enumerate(record.annotations):
        if not ann.labels:
            violations.append(f"annotation[{i}]: empty label set")
    seen: set[str] = set()
    for ann in record.annotations:
        if ann.worker_id in seen:
            violations.append(f"annotations: duplicate worker id '{ann.worker_id}'")
        seen.add(ann.worker_id)
    return violations


def _validate_mapping(obj: Mapping) -> list[str]:
    violations = []
    for name in ("id", "dataset", "question", "image_id"):
        if name not in obj:
            violations.append(f"missing field '{name}'")
        elif not isinstance(obj[name], str):
            violations.append(f"field '{name}': expected string")

    answers = obj.get("answers")
    if answers is None:
        violations.append("missing field 'answers'")
    elif not isinstance(answers, list):
        violations.append("field 'answers': expected array")
    else:
        if len(answers) != ANSWERS_PER_RECORD:
            violations.append(f"answers: expected {ANSWERS_PER_RECORD}, got {len(answers)}")
        for i, a in enumerate(answers):
            if not isinstance(a, str):
                violations.append(f"answers[{i}]: expected string")

    annotations = obj.get("annotations")
    if annotations is None:
        violations.append("missing field 'annotations'")
    elif not isinstance(annotations, list):
        violations.append("field 'annotations': expected array")
    else:
        if len(annotations) != WORKERS_PER_RECORD:
            violations.append(
                f"annotations: expected {WORKERS_PER_RECORD}, got {len(annotations)}"
            )
        worker_ids: set[str] = set()
        for i, ann in enumerate(annotations):
            if not isinstance(ann, Mapping):
                violations.append(f"annotation[{i}]: expected object")
                continue
            wid = ann.get("worker_id")
            if wid is None:
                violations.append(f"annotation[{i}]: missing field 'worker_id'")
            elif not isinstance(wid, str):
                violations.append(f"annotation[{i}]: field 'worker_id': expected string")
            else:
                if wid in worker_ids:
                    violations.append(f"annotations: duplicate worker id '{wid}'")
                worker_ids.add(wid)
            labels = ann.get("labels")
            if labels is None:
                violations.append(f"annotation[{i}]: missing field 'labels'")
            elif not isinstance(labels, list):
                violations.append(f"annotation[{i}]: field 'labels': expected array")
            else:
                if not labels:
                    violations.append(f"annotation[{i}]: empty label set")
                seen_codes: set[str] = set()
                for raw in labels:
                    if not isinstance(raw, str):
                        violations.append(f"annotation[{i}]: unknown label code {raw!r}")
                        continue
                    code = raw.strip().upper()
                    if code not in Reason.__members__:
                        violations.append(f"annotation[{i}]: unknown label code '{raw}'")
                    elif code in seen_codes:
                        violations.append(f"annotation[{i}]: duplicate label '{code}'")
                    else:
                        seen_codes.add(code)
    return violations


def parse_record(obj: Mapping) -> VisualQuestionRecord:
    """Build a typed record from a JSONL mapping, raising on any violation."""
    violations = validate_record(obj)
    if violations:
        raise ValueError("; ".join(violations))
    annotations = tuple(
        WorkerAnnotation(
            worker_id=ann["worker_id"],
            labels=frozenset(Reason.parse(code) for code in ann["labels"]),
        )
        for ann in obj["annotations"]
    )
    return VisualQuestionRecord(
        id=obj["id"],
        dataset=obj["dataset"],
        question=obj["question"],
        image_id=obj["image_id"],
        answers=tuple(obj["answers"]),
        annotations=annotations,
    )


def record_to_mapping(record: VisualQuestionRecord) -> dict:
    """Serialize a record back to its JSONL object shape.

    Label sets are written as uppercase codes in canonical order.
    """
    return {
        "id": record.id,
        "dataset": record.dataset,
        "question": record.question,
        "image_id": record.image_id,
        "answers": list(record.answers),
        "annotations": [
            {
                "worker_id": ann.worker_id,
                "labels": [r.value for r in CANONICAL_ORDER if r in ann.labels],
            }
            for ann in record.annotations
        ],
    }
