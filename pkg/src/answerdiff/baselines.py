"""Baseline scorers: seeded random guessing and the relevance-rule mapping.

The random baseline emits continuous uniform scores rather than literal
binary guesses so average precision is well defined under ranking; its
expected per-label AP still equals the label prevalence.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from .labels import N_REASONS, Reason

# labels a question-image relevance signal speaks to
RELEVANCE_RULE_REASONS = (Reason.LQI, Reason.IVE, Reason.AMB)
_RULE_INDICES = (0, 1, 4)


def random_scores(n_records: int, seed: int, n_labels: int = N_REASONS) -> np.ndarray:
    """(n_records, n_labels) iid uniform [0, 1) scores from the seed."""
    if n_records < 0:
        raise ValueError(f"n_records must be >= 0, got {n_records}")
    rng = np.random.default_rng(seed)
    return rng.random((n_records, n_labels))


def relevance_rule_scores(
    record_ids: Sequence[str], relevance: Mapping[str, float], seed: int
) -> np.ndarray:
    """Map relevance probabilities onto reason scores.

    A record predicted relevant (relevance >= 0.5) scores 0 for LQI, IVE and
    AMB, and 1 otherwise; the remaining seven labels get uniform random
    scores drawn exactly as in :func:`random_scores`.
    """
    scores = random_scores(len(record_ids), seed)
    for i, rid in enumerate(record_ids):
        if rid not in relevance:
            raise ValueError(f"missing relevance score for record '{rid}'")
        rel = relevance[rid]
        if not 0.0 <= rel <= 1.0:
            raise ValueError(f"relevance for record '{rid}' outside [0, 1]: {rel}")
        value = 0.0 if rel >= 0.5 else 1.0
        for j in _RULE_INDICES:
            scores[i, j] = value
    return scores
