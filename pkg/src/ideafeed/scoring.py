"""Combined message scoring: quality (classifier) + diversity (dispersion).

The diversity score of a message is the increase it causes in the corpus
MST dispersion sum, in radians, normalized so that the maximum possible
angular distance (pi on the unit hypersphere) maps to 100%. The raw delta
can be negative — a new point can shortcut the spanning tree — so the
percentage is kept signed internally and only clamped for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import math

from .corpus import CorpusSnapshot
from .embedding import Embedder
from .errors import EmptyCorpus
from .quality import QualityModel, predict_quality


@dataclass(frozen=True)
class DiversityScore:
    raw: float  # MST-sum delta, radians
    pct: float  # 100 * raw / pi, may be negative
    degenerate_embedding: bool = False

    @property
    def display_pct(self) -> float:
        return min(100.0, max(0.0, self.pct))


@dataclass(frozen=True)
class ScorePair:
    quality_pct: float
    diversity_pct: float
    diversity_raw: float
    degenerate_embedding: bool = False

    @property
    def display_diversity_pct(self) -> float:
        return min(100.0, max(0.0, self.diversity_pct))


def diversity_pct_from_raw(raw: float) -> float:
    return 100.0 * raw / math.pi


def diversity_score(text: str, corpus: CorpusSnapshot, embedder: Embedder) -> DiversityScore:
    """Dispersion increase caused by adding ``text`` to the prior corpus."""
    if len(corpus) < 2:
        raise EmptyCorpus(f"diversity needs >= 2 prior ideations, corpus has {len(corpus)}")
    emb = embedder.embed(text)
    raw = corpus.mst_index.sum_with(emb.values) - corpus.mst_index.base_sum
    return DiversityScore(raw=raw, pct=diversity_pct_from_raw(raw), degenerate_embedding=emb.degenerate)


def score(text: str, model: QualityModel, corpus: CorpusSnapshot, embedder: Embedder) -> ScorePair:
    """The score vector passed to all explainers: (quality, diversity)."""
    div = diversity_score(text, corpus, embedder)
    quality = predict_quality(model, text, embedder)
    return ScorePair(
        quality_pct=quality,
        diversity_pct=div.pct,
        diversity_raw=div.raw,
        degenerate_embedding=div.degenerate_embedding,
    )


SCORE_KINDS = ("quality", "diversity")


class Scorer:
    """Bundles (model, corpus snapshot, embedder) into score callables.

    The snapshot is immutable, so a Scorer is safe to share across threads
    and is unaffected by corpus appends that happen after it was built.
    """

    def __init__(self, model: QualityModel, corpus: CorpusSnapshot, embedder: Embedder):
        self.model = model
        self.corpus = corpus
        self.embedder = embedder

    def quality(self, text: str) -> float:
        return predict_quality(self.model, text, self.embedder)

    def diversity(self, text: str) -> float:
        return diversity_score(text, self.corpus, self.embedder).pct

    def pair(self, text: str) -> ScorePair:
        return score(text, self.model, self.corpus, self.embedder)

    def fn(self, kind: str) -> Callable[[str], float]:
        if kind == "quality":
            return self.quality
        if kind == "diversity":
            return self.diversity
        raise ValueError(f"unknown score kind {kind!r}")

    def fns(self) -> dict[str, Callable[[str], float]]:
        return {kind: self.fn(kind) for kind in SCORE_KINDS}
