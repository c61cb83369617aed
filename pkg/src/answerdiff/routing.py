"""Static routing from detected disagreement reasons to mitigation steps.

The pipeline runs image steps first, then question steps, then user
interaction, then answer post-processing; ``route_resolutions`` returns the
deduplicated union of the steps for the active reasons, in pipeline order.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .aggregate import GroundTruthVector
from .labels import CANONICAL_ORDER, N_REASONS, Reason

SCORE_THRESHOLD = 0.5


@dataclass(frozen=True)
class ResolutionStep:
    step_id: str
    description: str


PIPELINE_STEPS: tuple[ResolutionStep, ...] = (
    ResolutionStep("I1", "image specificity selection"),
    ResolutionStep("I2", "image enhancement"),
    ResolutionStep("Q1", "grammar correction"),
    ResolutionStep("Q2", "question disambiguation"),
    ResolutionStep("user-warning", "warn the asker that answers may differ"),
    ResolutionStep("retake-prompt", "ask the user to retake the visual question"),
    ResolutionStep("A1", "spam filtering"),
    ResolutionStep("A2", "synonym normalization"),
    ResolutionStep("A3", "granularity comparison"),
)

STEP_ORDER: dict[str, int] = {step.step_id: i for i, step in enumerate(PIPELINE_STEPS)}
STEPS_BY_ID: dict[str, ResolutionStep] = {step.step_id: step for step in PIPELINE_STEPS}

ROUTES: dict[Reason, tuple[str, ...]] = {
    Reason.LQI: ("I2",),
    Reason.IVE: ("retake-prompt",),
    Reason.INV: ("Q1",),
    Reason.DFF: ("user-warning",),
    Reason.AMB: ("I1", "Q2"),
    Reason.SBJ: ("user-warning",),
    Reason.SYN: ("A2",),
    Reason.GRN: ("A3",),
    Reason.SPM: ("A1",),
    Reason.OTH: (),
}


def _active_reasons(labels) -> list[Reason]:
    if isinstance(labels, GroundTruthVector):
        bits = labels.bits
        return [r for r, bit in zip(CANONICAL_ORDER, bits) if bit]
    if isinstance(labels, np.ndarray) or (
        isinstance(labels, Sequence)
        and labels
        and all(isinstance(v, (int, float, np.integer, np.floating)) for v in labels)
    ):
        values = np.asarray(labels, dtype=np.float64).ravel()
        if values.shape[0] != N_REASONS:
            raise ValueError(f"expected {N_REASONS} values, got {values.shape[0]}")
        return [r for r, v in zip(CANONICAL_ORDER, values) if v >= SCORE_THRESHOLD]
    out = []
    for item in labels:
        out.append(item if isinstance(item, Reason) else Reason.parse(item))
    return out


def route_resolutions(labels) -> list[str]:
    """Resolution step ids for the active reasons, deduplicated, in
    pipeline order.

    ``labels`` may be a ground-truth vector, a 10-vector of bits or scores
    (scores activate at >= 0.5), or an iterable of reasons/codes.
    """
    steps: set[str] = set()
    for reason in _active_reasons(labels):
        steps.update(ROUTES[reason])
    return sorted(steps, key=STEP_ORDER.__getitem__)
