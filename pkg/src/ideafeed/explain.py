"""Explanations for message scores.

Three complementary explanation types:

* :func:`attribute` scores each word by how much deleting it would change
  the message score (leave-one-word-out ablation).
* :func:`contrast` splits the score change between two message revisions
  across the word-level edits that separate them.
* :func:`suggest` proposes replacement words, pulled from a knowledge
  graph and filtered for topicality, that would raise the score.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .corpus import CorpusSnapshot
from .embedding import Embedder, angular_distance
from .errors import NoContentTokens
from .kg import KnowledgeGraph, RelationFilter
from .textproc import byte_span, lemmatize, tokenize

ScoreFn = Callable[[str], float]

TOP_HIGHLIGHTS = 3


@dataclass(frozen=True)
class TokenAttribution:
    token: str
    spans: tuple[tuple[int, int], ...]  # byte offsets of every occurrence
    raw_weight: float
    change_priority: float

    @property
    def sub_score(self) -> float:
        # shown as <= 0: the most promising word to change sits at 0
        return -self.change_priority


@dataclass(frozen=True)
class HighlightSpan:
    token: str
    start_byte: int
    end_byte: int
    change_priority: float

    @property
    def sub_score(self) -> float:
        return -self.change_priority


@dataclass(frozen=True)
class AttributionSet:
    score_kind: str
    base_score: float
    entries: tuple[TokenAttribution, ...]
    highlights: tuple[HighlightSpan, ...]

    def top_tokens(self, k: int = TOP_HIGHLIGHTS) -> list[str]:
        return [e.token for e in self.entries[:k]]


def _ablate(tokens: Sequence[str], drop: str) -> str:
    """Rebuild the message without any occurrence of ``drop``."""
    return " ".join(t for t in tokens if t != drop)


def attribute(text: str, score_fn: ScoreFn, score_kind: str) -> AttributionSet:
    """Ablation attribution over the distinct content words of ``text``.

    For word r, ``raw_weight = score(text without r) - score(text)``: a
    large value means the word is holding the score back. Priorities are
    shifted so the minimum is 0. Highlights cover every occurrence of the
    top three words.
    """
    toks = tokenize(text)
    distinct = sorted(set(toks.content_tokens))
    if not distinct:
        raise NoContentTokens("attribution needs at least one content word")
    base = score_fn(text)
    raw: dict[str, float] = {}
    occurrences: dict[str, list[tuple[int, int]]] = {tok: [] for tok in distinct}
    for tok, is_content, span in zip(toks.tokens, toks.content_mask, toks.spans):
        if is_content:
            occurrences[tok].append(byte_span(text, span))
    for tok in distinct:
        raw[tok] = score_fn(_ablate(toks.tokens, tok)) - base
    floor = min(raw.values())
    entries = [
        TokenAttribution(tok, tuple(occurrences[tok]), raw[tok], raw[tok] - floor)
        for tok in distinct
    ]
    entries.sort(key=lambda e: (-e.change_priority, e.token))
    top = {e.token: e.change_priority for e in entries[:TOP_HIGHLIGHTS]}
    highlights = []
    for tok, is_content, span in zip(toks.tokens, toks.content_mask, toks.spans):
        if is_content and tok in top:
            b0, b1 = byte_span(text, span)
            highlights.append(HighlightSpan(tok, b0, b1, top[tok]))
    return AttributionSet(score_kind, base, tuple(entries), tuple(highlights))


@dataclass(frozen=True)
class EditAttribution:
    kind: str  # "insertion" | "deletion"
    token: str
    raw_benefit: float
    benefit: float


@dataclass(frozen=True)
class ContrastResult:
    score_kind: str
    old_score: float
    new_score: float
    delta: float
    edits: tuple[EditAttribution, ...]
    iteration_from: int = 0
    iteration_to: int = 0


def _without_one(tokens: Sequence[str], drop: str) -> list[str]:
    out = list(tokens)
    out.remove(drop)
    return out


def _edit_diff(old_content: Sequence[str], new_content: Sequence[str]) -> list[tuple[str, str]]:
    """Multiset difference as (kind, token) pairs, insertions first."""
    old_c, new_c = Counter(old_content), Counter(new_content)
    edits: list[tuple[str, str]] = []
    for tok in sorted(new_c):
        for _ in range((new_c - old_c)[tok], 0, -1):
            edits.append(("insertion", tok))
    for tok in sorted(old_c):
        for _ in range((old_c - new_c)[tok], 0, -1):
            edits.append(("deletion", tok))
    return edits


def contrast(
    old_text: str,
    new_text: str,
    score_fn: ScoreFn,
    score_kind: str,
    iteration_from: int = 0,
    iteration_to: int = 0,
) -> ContrastResult:
    """Split the score change from ``old_text`` to ``new_text`` across the
    content-word edits between them.

    Raw benefit of an insertion is the score drop from removing the word
    again; of a deletion, the score drop from putting the word back. The
    raw values are min-max normalized to [0, 1] and shifted by a shared
    constant so they sum exactly to the score delta.
    """
    old_toks, new_toks = tokenize(old_text), tokenize(new_text)
    old_score, new_score = score_fn(old_text), score_fn(new_text)
    delta = new_score - old_score
    edits = _edit_diff(old_toks.content_tokens, new_toks.content_tokens)
    if not edits:
        return ContrastResult(
            score_kind, old_score, new_score, delta, (), iteration_from, iteration_to
        )
    raw: list[float] = []
    for kind, tok in edits:
        if kind == "insertion":
            variant = " ".join(_without_one(new_toks.tokens, tok))
        else:
            variant = " ".join(list(new_toks.tokens) + [tok])
        raw.append(new_score - score_fn(variant))
    lo, hi = min(raw), max(raw)
    if hi > lo:
        normed = [(b - lo) / (hi - lo) for b in raw]
    else:
        normed = [0.5] * len(raw)
    shift = (delta - sum(normed)) / len(normed)
    attributions = tuple(
        EditAttribution(kind, tok, r, n + shift)
        for (kind, tok), r, n in zip(edits, raw, normed)
    )
    return ContrastResult(
        score_kind, old_score, new_score, delta, attributions, iteration_from, iteration_to
    )


@dataclass(frozen=True)
class Suggestion:
    source_token: str
    term: str
    relation: str
    weight: float
    delta_quality_pct: float
    delta_diversity_pct: float
    anchor_distance: float
    gain: float

    @property
    def max_delta(self) -> float:
        return max(self.delta_quality_pct, self.delta_diversity_pct)


@dataclass(frozen=True)
class SuggestionSet:
    score_kind: str
    source_tokens: tuple[str, ...]
    suggestions: tuple[Suggestion, ...]
    skipped_tokens: tuple[str, ...] = ()

    def for_token(self, token: str) -> list[Suggestion]:
        return [s for s in self.suggestions if s.source_token == token]

    def by_token(self) -> dict[str, list[Suggestion]]:
        """One entry per probed token; tokens with nothing kept map to []."""
        return {tok: self.for_token(tok) for tok in self.source_tokens}


def _substitute(tokens: Sequence[str], source: str, replacement: str) -> str:
    out: list[str] = []
    for t in tokens:
        if t == source:
            out.extend(replacement.split())
        else:
            out.append(t)
    return " ".join(out)


def suggest(
    text: str,
    attribution: AttributionSet,
    graph: KnowledgeGraph,
    corpus: CorpusSnapshot,
    embedder: Embedder,
    score_fns: dict[str, ScoreFn],
    *,
    anchors: Sequence[str],
    corpus_radius: float | None = None,
    anchor_radius: float = 1.2,
    min_gain: float = 0.0,
    min_neighbors: int = 10,
    top_k: int = 3,
    relation_filter: RelationFilter | None = None,
) -> SuggestionSet:
    """Replacement-word suggestions for the highlighted tokens of ``text``.

    For each highlighted word, knowledge-graph neighbors of its lemma are
    screened: words with fewer than ``min_neighbors`` neighbors are skipped
    outright; a candidate is dropped when its mean angular distance to the
    corpus exceeds ``corpus_radius`` (default: 75th percentile of corpus
    pairwise distances) or when it is farther than ``anchor_radius`` from
    every anchor phrase. Survivors are substituted into the message and
    kept when the ``attribution.score_kind`` score improves by more than
    ``min_gain`` and at least one score delta is positive. The ``top_k``
    best per word are returned, ranked by the larger of the two deltas.
    """
    if corpus_radius is None:
        corpus_radius = corpus.pairwise_percentile(75.0)
    toks = tokenize(text)
    anchor_vecs = [embedder.embed(a).values for a in anchors]
    base_scores = {kind: fn(text) for kind, fn in score_fns.items()}
    sources = attribution.top_tokens()
    suggestions: list[Suggestion] = []
    skipped: list[str] = []
    for source in sources:
        lemma = lemmatize(source)
        neighbors = graph.related_words(lemma, relation_filter)
        if len(neighbors) < min_neighbors:
            skipped.append(source)
            continue
        kept: list[Suggestion] = []
        for term, relation, weight in neighbors:
            if term == source or term == lemma or lemmatize(term) == lemma:
                continue
            cand = embedder.embed(term).values
            mean_d = float(np.mean([angular_distance(cand, row) for row in corpus.matrix]))
            if mean_d > corpus_radius:
                continue
            anchor_d = (
                min(angular_distance(cand, a) for a in anchor_vecs)
                if anchor_vecs
                else 0.0
            )
            if anchor_d > anchor_radius:
                continue
            variant = _substitute(toks.tokens, source, term)
            deltas = {kind: fn(variant) - base_scores[kind] for kind, fn in score_fns.items()}
            gain = deltas[attribution.score_kind]
            if gain <= min_gain:
                continue
            if not any(d > 0 for d in deltas.values()):
                continue
            kept.append(
                Suggestion(
                    source,
                    term,
                    relation,
                    weight,
                    deltas.get("quality", 0.0),
                    deltas.get("diversity", 0.0),
                    anchor_d,
                    gain,
                )
            )
        kept.sort(key=lambda s: (-s.max_delta, s.term))
        suggestions.extend(kept[:top_k])
    return SuggestionSet(attribution.score_kind, tuple(sources), tuple(suggestions), tuple(skipped))
