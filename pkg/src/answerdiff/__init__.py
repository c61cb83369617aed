"""answerdiff: why do crowd answers to visual questions differ?

Aggregates crowd reason labels into ground truth, computes disagreement and
inter-annotator statistics, extracts handcrafted features, trains per-label
forests or sigmoid linear scorers, and evaluates everything with average
precision against seeded baselines.
"""

from .aggregate import (
    GroundTruthVector,
    SourceType,
    aggregate_ground_truth,
    ground_truth_matrix,
    label_frequency,
    source_type,
    source_type_distribution,
    unique_reason_count,
    unique_reason_histogram,
)
from .agreement import (
    CoOccurrenceMatrix,
    WorkerPairStats,
    WorkerSummary,
    clarity,
    co_occurrence,
    co_occurrence_matrix,
    pooled_kappa,
    worker_summary,
    wws_common_labels,
    wws_cosine,
    wws_kappa,
)
from .baselines import random_scores, relevance_rule_scores
from .dataio import (
    ImageFeatures,
    Split,
    dump_records,
    generate_split,
    load_image_features,
    load_records,
    load_relevance_scores,
    load_split_manifest,
)
from .features import (
    FEATURE_NAMES,
    MASKS,
    AnswerType,
    apply_mask,
    classify_answer_type,
    extract_features,
    feature_matrix,
    has_color_word,
    most_common_answer_type,
    word_count,
)
from .forest import ReasonForestClassifier
from .labels import (
    CANONICAL_ORDER,
    N_REASONS,
    REASON_CODES,
    Reason,
    Side,
    VisualQuestionRecord,
    WorkerAnnotation,
    parse_record,
    task_vector,
    validate_record,
)
from .linear import ReasonLinearClassifier, bce_gradient, bce_loss, bce_objective
from .metrics import EvaluationReport, PRCurve, average_precision, compare, evaluate, pr_curve
from .persistence import load_model, save_model
from .routing import PIPELINE_STEPS, ROUTES, ResolutionStep, route_resolutions
from .synth import SynthSpec, generate_fixture, planted_probabilities
from .tree import Tree, class_weights, gini

__version__ = "0.1.0"

__all__ = [
    "AnswerType",
    "CANONICAL_ORDER",
    "CoOccurrenceMatrix",
    "EvaluationReport",
    "FEATURE_NAMES",
    "GroundTruthVector",
    "ImageFeatures",
    "MASKS",
    "N_REASONS",
    "PIPELINE_STEPS",
    "PRCurve",
    "REASON_CODES",
    "ROUTES",
    "Reason",
    "ReasonForestClassifier",
    "ReasonLinearClassifier",
    "ResolutionStep",
    "Side",
    "SourceType",
    "Split",
    "SynthSpec",
    "Tree",
    "VisualQuestionRecord",
    "WorkerAnnotation",
    "WorkerPairStats",
    "WorkerSummary",
    "aggregate_ground_truth",
    "apply_mask",
    "average_precision",
    "bce_gradient",
    "bce_loss",
    "bce_objective",
    "clarity",
    "class_weights",
    "classify_answer_type",
    "co_occurrence",
    "co_occurrence_matrix",
    "compare",
    "dump_records",
    "evaluate",
    "extract_features",
    "feature_matrix",
    "generate_fixture",
    "generate_split",
    "gini",
    "ground_truth_matrix",
    "has_color_word",
    "label_frequency",
    "load_image_features",
    "load_model",
    "load_records",
    "load_relevance_scores",
    "load_split_manifest",
    "most_common_answer_type",
    "parse_record",
    "planted_probabilities",
    "pooled_kappa",
    "pr_curve",
    "random_scores",
    "relevance_rule_scores",
    "route_resolutions",
    "save_model",
    "source_type",
    "source_type_distribution",
    "task_vector",
    "unique_reason_count",
    "unique_reason_histogram",
    "validate_record",
    "word_count",
    "worker_summary",
    "wws_common_labels",
    "wws_cosine",
    "wws_kappa",
]
