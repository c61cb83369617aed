"""Seeded synthetic fixture generator with planted label effects.

Records are drawn so that specific features carry specific reasons:

    long questions (11-16 words)            -> AMB
    low image tag counts (0-2 vs 6-12)      -> LQI
    low tags AND a long question            -> IVE
    a colo(u)r word in the question         -> SYN
    colour question OR a colourful image    -> GRN

The remaining reasons (INV, DFF, SBJ, SPM, OTH) are independent background
coins.  Five simulated workers then copy each record's true bits with
independent per-label flip noise; a worker whose noisy selection comes out
empty falls back to OTH, mirroring a confused annotator reaching for the
catch-all.  The truth manifest records the planted probabilities, the
realized frequency of the true bits, and the realized ground-truth
frequency at every validity threshold, all counted inline so the manifest
can verify the analysis pipeline independently.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .dataio import ImageFeatures
from .labels import (
    CANONICAL_ORDER,
    N_REASONS,
    REASON_CODES,
    Reason,
    VisualQuestionRecord,
    WorkerAnnotation,
)

_QUESTION_WORDS = (
    "what is the item object in picture can you tell me please brand of "
    "thing shown here on table kind type front name this holding near"
).split()

_NOUNS = "pillow cup bottle sign chair book phone box shirt plate dog car lamp".split()
_ADJECTIVES = "red blue small large round plastic wooden shiny soft striped".split()

_BACKGROUND_RATES = {
    Reason.INV: 0.10,
    Reason.DFF: 0.12,
    Reason.SBJ: 0.12,
    Reason.SPM: 0.04,
    Reason.OTH: 0.05,
}

_IDX = {r: i for i, r in enumerate(CANONICAL_ORDER)}


@dataclass(frozen=True)
class SynthSpec:
    """Planted-effect parameters for one fixture."""

    n: int = 2000
    seed: int = 7
    noise: float = 0.1
    n_workers: int = 25
    p_long_question: float = 0.65
    p_low_tags: float = 0.65
    p_color_question: float = 0.5
    p_many_colors: float = 0.2


def planted_probabilities(spec: SynthSpec) -> dict[str, float]:
    """Expected frequency of each true label bit under the spec."""
    probs = {
        Reason.AMB: spec.p_long_question,
        Reason.LQI: spec.p_low_tags,
        Reason.IVE: spec.p_long_question * spec.p_low_tags,
        Reason.SYN: spec.p_color_question,
        Reason.GRN: 1.0 - (1.0 - spec.p_color_question) * (1.0 - spec.p_many_colors),
    }
    probs.update(_BACKGROUND_RATES)
    return {r.value: probs[r] for r in CANONICAL_ORDER}


def _make_question(rng: np.random.Generator, long_q: bool, color_q: bool) -> str:
    count = int(rng.integers(11, 17)) if long_q else int(rng.integers(3, 7))
    words = [ _QUESTION_WORDS[int(i)] for i in rng.integers(0, len(_QUESTION_WORDS), count) ]
    if color_q:
        words[count // 2] = "color"
    return " ".join(words) + "?"


def _make_answers(rng: np.random.Generator) -> list[str]:
    mode = rng.choice(("word", "yesno", "numeric", "unanswerable"), p=(0.6, 0.2, 0.15, 0.05))
    answers = []
    for _ in range(10):
        if mode == "yesno":
            answers.append(str(rng.choice(("yes", "no"))))
        elif mode == "numeric":
            answers.append(str(int(rng.integers(0, 100))))
        elif mode == "unanswerable":
            answers.append("unanswerable")
        else:
            noun = str(rng.choice(_NOUNS))
            if rng.random() < 0.5:
                answers.append(f"{rng.choice(_ADJECTIVES)} {noun}")
            else:
                answers.append(noun)
    return answers


def generate_fixture(
    spec: SynthSpec = SynthSpec(),
) -> tuple[list[VisualQuestionRecord], list[ImageFeatures], dict]:
    """Build (records, image features, truth manifest) for the spec."""
    if spec.n < 20:
        raise ValueError(f"fixture needs n >= 20, got {spec.n}")
    if not 0.0 <= spec.noise < 1.0:
        raise ValueError(f"noise must be in [0, 1), got {spec.noise}")
    if spec.n_workers < 5:
        raise ValueError("worker pool must hold at least 5 workers")

    rng = np.random.default_rng(spec.seed)
    worker_pool = [f"w{j:03d}" for j in range(spec.n_workers)]

    records: list[VisualQuestionRecord] = []
    image_features: list[ImageFeatures] = []
    true_counts = np.zeros(N_REASONS, dtype=np.int64)
    selection_counts = np.zeros((spec.n, N_REASONS), dtype=np.int64)
    oth_fallbacks = 0

    for i in range(spec.n):
        long_q = rng.random() < spec.p_long_question
        low_tags = rng.random() < spec.p_low_tags
        color_q = rng.random() < spec.p_color_question
        many_colors = rng.random() < spec.p_many_colors

        true_bits = np.zeros(N_REASONS, dtype=np.int64)
        true_bits[_IDX[Reason.AMB]] = int(long_q)
        true_bits[_IDX[Reason.LQI]] = int(low_tags)
        true_bits[_IDX[Reason.IVE]] = int(long_q and low_tags)
        true_bits[_IDX[Reason.SYN]] = int(color_q)
        true_bits[_IDX[Reason.GRN]] = int(color_q or many_colors)
        for reason, rate in _BACKGROUND_RATES.items():
            true_bits[_IDX[reason]] = int(rng.random() < rate)
        true_counts += true_bits

        question = _make_question(rng, long_q, color_q)
        answers = _make_answers(rng)
        image_id = f"img{i:05d}"
        image_features.append(
            ImageFeatures(
                image_id=image_id,
                num_categories=int(rng.integers(0, 6)),
                num_tags=int(rng.integers(0, 3)) if low_tags else int(rng.integers(6, 13)),
                num_colors=int(rng.integers(6, 10)) if many_colors else int(rng.integers(0, 4)),
                num_faces=int(rng.integers(0, 3)),
            )
        )

        chosen = rng.choice(spec.n_workers, size=5, replace=False)
        annotations = []
        for w in chosen:
            flips = rng.random(N_REASONS) < spec.noise
            selected = true_bits.astype(bool) ^ flips
            if not selected.any():
                selected[_IDX[Reason.OTH]] = True
                oth_fallbacks += 1
            selection_counts[i] += selected
            annotations.append(
                WorkerAnnotation(
                    worker_id=worker_pool[int(w)],
                    labels=frozenset(
                        r for r, bit in zip(CANONICAL_ORDER, selected) if bit
                    ),
                )
            )
        records.append(
            VisualQuestionRecord(
                id=f"q{i:05d}",
                dataset="synth",
                question=question,
                image_id=image_id,
                answers=tuple(answers),
                annotations=tuple(annotations),
            )
        )

    planted = planted_probabilities(spec)
    realized_true = true_counts / spec.n
    realized_gt = {
        str(k): {
            code: float((selection_counts[:, j] >= k).sum() / spec.n)
            for j, code in enumerate(REASON_CODES)
        }
        for k in range(1, 6)
    }
    manifest = {
        "spec": asdict(spec),
        "planted": {
            code: {
                "probability": planted[code],
                "realized_true_frequency": float(realized_true[j]),
            }
            for j, code in enumerate(REASON_CODES)
        },
        "realized_gt_frequency": realized_gt,
        "oth_empty_fallbacks": oth_fallbacks,
        "planted_feature_labels": ["AMB", "LQI", "IVE", "SYN", "GRN"],
    }
    return records, image_features, manifest
