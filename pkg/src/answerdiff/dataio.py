"""JSONL ingestion: records, image-feature sidecars, split manifests, relevance scores.

All files are UTF-8, one JSON object per line.  Loading is strict by default
(fail on the first offending line); record loading also supports a lenient
mode that skips and counts bad lines.
"""

from __future__ import annotations

import enum
import json
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .labels import VisualQuestionRecord, parse_record, record_to_mapping, validate_record


@dataclass(frozen=True)
class ImageFeatures:
    """Precomputed per-image counts from a vision-API sidecar file."""

    image_id: str
    num_categories: int
    num_tags: int
    num_colors: int
    num_faces: int


class Split(str, enum.Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"


def _iter_jsonl(path) -> Iterable[tuple[int, object]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: malformed JSON: {exc.msg}") from None
            yield lineno, obj


def load_records(path, *, lenient: bool = False, errors: list | None = None) -> list[VisualQuestionRecord]:
    """Load records from JSONL, validating each line.

    Strict mode raises ``ValueError`` naming the first offending line.  With
    ``lenient=True`` bad lines are skipped; if ``errors`` is a list, a
    ``(line_number, message)`` tuple is appended per skipped line so callers
    can report the tally.
    """
    records: list[VisualQuestionRecord] = []
    first_seen: dict[str, int] = {}

    def fail(lineno: int, message: str) -> bool:
        if lenient:
            if errors is not None:
                errors.append((lineno, message))
            return True
        raise ValueError(f"{path}: line {lineno}: {message}")

    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                fail(lineno, f"malformed JSON: {exc.msg}")
                continue
            violations = validate_record(obj)
            if violations:
                fail(lineno, "; ".join(violations))
                continue
            rid = obj["id"]
            if rid in first_seen:
                fail(lineno, f"duplicate id '{rid}' (first seen line {first_seen[rid]})")
                continue
            first_seen[rid] = lineno
            records.append(parse_record(obj))
    return records


def dump_records(records: Iterable[VisualQuestionRecord], path) -> None:
    """Write records as JSONL; loading the result reproduces the input records."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_mapping(record), ensure_ascii=False))
            fh.write("\n")


_IMAGE_COUNT_FIELDS = ("num_categories", "num_tags", "num_colors", "num_faces")


def load_image_features(path) -> dict[str, ImageFeatures]:
    """Load an image-feature sidecar keyed by image id."""
    out: dict[str, ImageFeatures] = {}
    for lineno, obj in _iter_jsonl(path):
        if not isinstance(obj, Mapping):
            raise ValueError(f"{path}: line {lineno}: expected object")
        image_id = obj.get("image_id")
        if not isinstance(image_id, str):
            raise ValueError(f"{path}: line {lineno}: missing or non-string 'image_id'")
        counts = {}
        for name in _IMAGE_COUNT_FIELDS:
            value = obj.get(name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"{path}: line {lineno}: field '{name}': expected integer")
            if value < 0:
                raise ValueError(f"{path}: line {lineno}: field '{name}': negative count {value}")
            counts[name] = value
        if image_id in out:
            raise ValueError(f"{path}: line {lineno}: duplicate image_id '{image_id}'")
        out[image_id] = ImageFeatures(image_id=image_id, **counts)
    return out


def load_relevance_scores(path) -> dict[str, float]:
    """Load a question-image relevance sidecar: record id -> probability."""
    out: dict[str, float] = {}
    for lineno, obj in _iter_jsonl(path):
        if not isinstance(obj, Mapping):
            raise ValueError(f"{path}: line {lineno}: expected object")
        rid = obj.get("id")
        if not isinstance(rid, str):
            raise ValueError(f"{path}: line {lineno}: missing or non-string 'id'")
        rel = obj.get("relevance")
        if not isinstance(rel, (int, float)) or isinstance(rel, bool):
            raise ValueError(f"{path}: line {lineno}: field 'relevance': expected number")
        if not 0.0 <= rel <= 1.0:
            raise ValueError(f"{path}: line {lineno}: relevance {rel} outside [0, 1]")
        if rid in out:
            raise ValueError(f"{path}: line {lineno}: duplicate id '{rid}'")
        out[rid] = float(rel)
    return out


def load_split_manifest(path, record_ids: Iterable[str]) -> dict[str, Split]:
    """Load a split manifest and check it exactly covers ``record_ids``."""
    wanted = set(record_ids)
    out: dict[str, Split] = {}
    for lineno, obj in _iter_jsonl(path):
        if not isinstance(obj, Mapping):
            raise ValueError(f"{path}: line {lineno}: expected object")
        rid = obj.get("id")
        if not isinstance(rid, str):
            raise ValueError(f"{path}: line {lineno}: missing or non-string 'id'")
        raw_split = obj.get("split")
        try:
            split = Split(raw_split)
        except ValueError:
            raise ValueError(f"{path}: line {lineno}: unknown split name {raw_split!r}") from None
        if rid in out:
            raise ValueError(f"{path}: line {lineno}: duplicate id '{rid}'")
        if rid not in wanted:
            raise ValueError(f"{path}: line {lineno}: unknown record id '{rid}'")
        out[rid] = split
    missing = sorted(wanted - out.keys())
    if missing:
        shown = ", ".join(missing[:5])
        more = "" if len(missing) <= 5 else f" (+{len(missing) - 5} more)"
        raise ValueError(f"{path}: manifest missing record ids: {shown}{more}")
    return out


def generate_split(
    record_ids: Sequence[str],
    proportions: tuple[float, float, float] = (0.65, 0.10, 0.25),
    seed: int = 0,
) -> dict[str, Split]:
    """Deterministic seeded train/val/test assignment.

    Ids are sorted lexicographically before a seeded Fisher-Yates shuffle
    (``random.Random(seed).randrange``), so the assignment is invariant to
    input ordering.  Base sizes are ``floor(n * p)`` per split; remainder
    records go to train, then val, then test, in shuffled order.
    """
    ids = list(record_ids)
    if not ids:
        raise ValueError("empty id list")
    if len(set(ids)) != len(ids):
        raise ValueError("record ids must be unique")
    if len(proportions) != 3 or any(p <= 0 for p in proportions):
        raise ValueError(f"proportions must be three positive values, got {proportions!r}")
    if abs(sum(proportions) - 1.0) > 1e-9:
        raise ValueError(f"proportions must sum to 1, got {sum(proportions)!r}")

    order = sorted(ids)
    rnd = random.Random(seed)
    for i in range(len(order) - 1, 0, -1):
        j = rnd.randrange(i + 1)
        order[i], order[j] = order[j], order[i]

    n = len(order)
    base = [int(n * p) for p in proportions]
    remainder = n - sum(base)
    for k in range(remainder):  # train, then val, then test
        base[k] += 1

    assignment: dict[str, Split] = {}
    cursor = 0
    for count, split in zip(base, (Split.TRAIN, Split.VAL, Split.TEST)):
        for rid in order[cursor : cursor + count]:
            assignment[rid] = split
        cursor += count
    return assignment


def split_ids(assignment: Mapping[str, Split], split: Split) -> list[str]:
    """Ids assigned to one split, sorted for reproducible downstream order."""
    return sorted(rid for rid, s in assignment.items() if s is split)


def dump_split_manifest(assignment: Mapping[str, Split], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rid in sorted(assignment):
            fh.write(json.dumps({"id": rid, "split": assignment[rid].value}))
            fh.write("\n")


def dump_image_features(features: Iterable[ImageFeatures], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for feat in features:
            fh.write(
                json.dumps(
                    {
                        "image_id": feat.image_id,
                        "num_categories": feat.num_categories,
                        "num_tags": feat.num_tags,
                        "num_colors": feat.num_colors,
                        "num_faces": feat.num_faces,
                    }
                )
            )
            fh.write("\n")


def sidecar_coverage(records: Sequence[VisualQuestionRecord], sidecar: Mapping[str, ImageFeatures]) -> float:
    """Fraction of records whose image id has a sidecar entry."""
    if not records:
        raise ValueError("no records")
    covered = sum(1 for r in records if r.image_id in sidecar)
    return covered / len(records)
