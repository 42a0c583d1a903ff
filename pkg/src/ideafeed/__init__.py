"""Interpretable scoring and feedback for short ideation messages.

Quality is a small trained classifier; diversity is the growth of the
minimum-spanning-tree dispersion of a message corpus. Both scores come
with word-level explanations: ablation attributions, edit-level contrast
between revisions, and knowledge-graph replacement suggestions.
"""

from .config import EngineConfig
from .corpus import CONDITIONS, CorpusSnapshot, CorpusStore
from .embedding import Embedder, EmbedderConfig, EmbeddingVector, angular_distance
from .engine import CONDITION_TABLE, FeedbackCondition, FeedbackEngine
from .errors import IdeafeedError
from .explain import (
    AttributionSet,
    ContrastResult,
    EditAttribution,
    HighlightSpan,
    Suggestion,
    SuggestionSet,
    TokenAttribution,
    attribute,
    contrast,
    suggest,
)
from .kg import DEFAULT_EXCLUDED_RELATIONS, KnowledgeEdge, KnowledgeGraph, RelationFilter
from .metrics import METRICS, MetricReport, bootstrap_metric, compute_metric, dispersion, disparity, mst_sum
from .quality import QualityModel, TrainingExample, load_training_file, predict_quality, train_quality
from .runtime import build_embedder, build_engine, data_path
from .scoring import SCORE_KINDS, DiversityScore, ScorePair, Scorer, diversity_score, score
from .session import IdeationRecord, Prompt, PromptSet, Session

__version__ = "0.1.0"

__all__ = [
    "CONDITIONS",
    "CONDITION_TABLE",
    "DEFAULT_EXCLUDED_RELATIONS",
    "METRICS",
    "SCORE_KINDS",
    "AttributionSet",
    "ContrastResult",
    "CorpusSnapshot",
    "CorpusStore",
    "DiversityScore",
    "EditAttribution",
    "Embedder",
    "EmbedderConfig",
    "EmbeddingVector",
    "EngineConfig",
    "FeedbackCondition",
    "FeedbackEngine",
    "HighlightSpan",
    "IdeafeedError",
    "IdeationRecord",
    "KnowledgeEdge",
    "KnowledgeGraph",
    "MetricReport",
    "Prompt",
    "PromptSet",
    "QualityModel",
    "RelationFilter",
    "ScorePair",
    "Scorer",
    "Session",
    "Suggestion",
    "SuggestionSet",
    "TokenAttribution",
    "TrainingExample",
    "angular_distance",
    "attribute",
    "bootstrap_metric",
    "build_embedder",
    "build_engine",
    "compute_metric",
    "contrast",
    "data_path",
    "dispersion",
    "disparity",
    "diversity_score",
    "load_training_file",
    "mst_sum",
    "predict_quality",
    "score",
    "suggest",
    "train_quality",
]
