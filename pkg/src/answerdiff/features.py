"""Handcrafted feature extraction from records and image sidecars.

The 20-slot vector layout (canonical order):

    slots  1-4   I:  num_categories, num_tags, num_colors, num_faces
    slots  5-6   Q:  word_count, has_color_word
    slots  7-10  Q:  answer-type one-hot (numeric, yesno, other, unanswerable)
    slots 11-20  A:  word count of each of the 10 answers, record order

Ablation masks select the documented slot subsets: QIA (all), QI (1-10),
Q (5-10), I (1-4), A (11-20).
"""

from __future__ import annotations

import enum
import string
from collections import Counter
from collections.abc import Mapping, Sequence

import numpy as np

from .dataio import ImageFeatures
from .labels import VisualQuestionRecord


class AnswerType(enum.Enum):
    NUMERIC = "numeric"
    YESNO = "yesno"
    UNANSWERABLE = "unanswerable"
    OTHER = "other"


FEATURE_NAMES: tuple[str, ...] = (
    "I:num_categories",
    "I:num_tags",
    "I:num_colors",
    "I:num_faces",
    "Q:word_count",
    "Q:has_color_word",
    "Q:atype_numeric",
    "Q:atype_yesno",
    "Q:atype_other",
    "Q:atype_unanswerable",
) + tuple(f"A{i}:word_count" for i in range(1, 11))

N_FEATURES = len(FEATURE_NAMES)

# slot position of each answer type in the one-hot block
_ATYPE_SLOT = {
    AnswerType.NUMERIC: 6,
    AnswerType.YESNO: 7,
    AnswerType.OTHER: 8,
    AnswerType.UNANSWERABLE: 9,
}

# ties in the plurality vote favour the rarer classes
_TIE_PRIORITY = (AnswerType.UNANSWERABLE, AnswerType.YESNO, AnswerType.NUMERIC, AnswerType.OTHER)

MASKS: dict[str, tuple[int, ...]] = {
    "QIA": tuple(range(20)),
    "QI": tuple(range(10)),
    "Q": tuple(range(4, 10)),
    "I": tuple(range(4)),
    "A": tuple(range(10, 20)),
}

_COLOR_WORDS = frozenset({"color", "colour", "colors", "colours"})
_UNANSWERABLE_TEXTS = frozenset({"unanswerable", "unsuitable", "unsuitable image"})
_NUMBER_WORDS = frozenset(
    """zero one two three four five six seven eight nine ten eleven twelve thirteen
    fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty forty fifty
    sixty seventy eighty ninety hundred thousand million billion""".split()
)


def word_count(text: str) -> int:
    """Number of maximal whitespace-separated tokens."""
    return len(text.split())


def has_color_word(question: str) -> int:
    """1 iff some token, punctuation-stripped and lowercased, is colo(u)r(s)."""
    for token in question.split():
        if token.strip(string.punctuation).lower() in _COLOR_WORDS:
            return 1
    return 0


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def classify_answer_type(answer: str) -> AnswerType:
    """Total classification of an answer string into one of four types."""
    text = answer.strip().lower()
    if text in ("yes", "no"):
        return AnswerType.YESNO
    if text in _UNANSWERABLE_TEXTS:
        return AnswerType.UNANSWERABLE
    if _is_number(text):
        return AnswerType.NUMERIC
    tokens = [t.strip(string.punctuation) for t in text.split()]
    tokens = [t for t in tokens if t]
    if tokens and all(t in _NUMBER_WORDS or _is_number(t) for t in tokens):
        return AnswerType.NUMERIC
    return AnswerType.OTHER


def most_common_answer_type(answers: Sequence[str]) -> AnswerType:
    """Plurality answer type; ties favour unanswerable > yes/no > numeric > other."""
    if not answers:
        raise ValueError("no answers")
    counts = Counter(classify_answer_type(a) for a in answers)
    best = max(counts.values())
    for atype in _TIE_PRIORITY:
        if counts.get(atype, 0) == best:
            return atype
    raise AssertionError("unreachable")


def extract_features(
    record: VisualQuestionRecord, image_features: ImageFeatures | None = None
) -> np.ndarray:
    """The 20-slot feature vector for one record.

    Missing image features impute as all-zero counts (nothing detected).
    """
    vec = np.zeros(N_FEATURES, dtype=np.float64)
    if image_features is not None:
        vec[0] = image_features.num_categories
        vec[1] = image_features.num_tags
        vec[2] = image_features.num_colors
        vec[3] = image_features.num_faces
    vec[4] = word_count(record.question)
    vec[5] = has_color_word(record.question)
    vec[_ATYPE_SLOT[most_common_answer_type(record.answers)]] = 1.0
    for i, answer in enumerate(record.answers[:10]):
        vec[10 + i] = word_count(answer)
    return vec


def resolve_mask(mask: str) -> tuple[int, ...]:
    try:
        return MASKS[mask.upper()]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown ablation mask {mask!r}; expected one of {sorted(MASKS)}") from None


def mask_feature_names(mask: str) -> tuple[str, ...]:
    return tuple(FEATURE_NAMES[i] for i in resolve_mask(mask))


def apply_mask(vector, mask: str) -> np.ndarray:
    """Retain exactly the mask's slots, in canonical order.

    Works on a single 20-vector or an (n, 20) matrix.
    """
    idx = list(resolve_mask(mask))
    arr = np.asarray(vector, dtype=np.float64)
    if arr.shape[-1] != N_FEATURES:
        raise ValueError(f"expected {N_FEATURES} slots on the last axis, got {arr.shape[-1]}")
    return arr[..., idx]


def feature_matrix(
    records: Sequence[VisualQuestionRecord],
    sidecar: Mapping[str, ImageFeatures] | None = None,
    mask: str = "QIA",
) -> np.ndarray:
    """Stack per-record feature vectors, applying an ablation mask."""
    sidecar = sidecar or {}
    X = np.array(
        [extract_features(r, sidecar.get(r.image_id)) for r in records], dtype=np.float64
    ).reshape(len(records), N_FEATURES)
    return apply_mask(X, mask)


def missing_image_ids(
    records: Sequence[VisualQuestionRecord], sidecar: Mapping[str, ImageFeatures]
) -> list[str]:
    """Image ids that will be zero-imputed, in first-appearance order."""
    seen: set[str] = set()
    missing = []
    for record in records:
        if record.image_id not in sidecar and record.image_id not in seen:
            seen.add(record.image_id)
            missing.append(record.image_id)
    return missing
