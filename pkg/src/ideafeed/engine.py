"""Feedback orchestration: sessions, submissions, and condition-gated payloads.

A feedback condition controls which payload fields a participant sees.
Scores and explanations are always computed and recorded internally; the
condition only gates what goes over the wire:

============  ======  ===========  ===========  ==========
condition     scores  attribution  contrastive  suggestions
============  ======  ===========  ===========  ==========
N             no      no           no           no
S             yes     no           no           no
SA            yes     yes          no           no
SAX           yes     yes          yes          no
SAC           yes     yes          no           yes
SAXC          yes     yes          yes          yes
============  ======  ===========  ===========  ==========
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .config import EngineConfig
from .corpus import CONDITIONS, CorpusSnapshot, CorpusStore
from .embedding import Embedder
from .errors import (
    CompareUnavailable,
    EmptyCorpus,
    InvalidCondition,
    IterationOutOfOrder,
    NoContentTokens,
    PromptsExhausted,
    TextTooLong,
)
from .explain import AttributionSet, ContrastResult, SuggestionSet, attribute, contrast, suggest
from .kg import KnowledgeGraph
from .metrics import METRICS, MetricReport, bootstrap_metric
from .quality import QualityModel
from .scoring import SCORE_KINDS, ScorePair, Scorer
from .session import MAX_ITERATIONS, IdeationRecord, PromptSet, Session


@dataclass(frozen=True)
class FeedbackCondition:
    name: str
    show_scores: bool
    show_attribution: bool
    show_contrastive: bool
    show_counterfactual: bool


CONDITION_TABLE: dict[str, FeedbackCondition] = {
    "N": FeedbackCondition("N", False, False, False, False),
    "S": FeedbackCondition("S", True, False, False, False),
    "SA": FeedbackCondition("SA", True, True, False, False),
    "SAX": FeedbackCondition("SAX", True, True, True, False),
    "SAC": FeedbackCondition("SAC", True, True, False, True),
    "SAXC": FeedbackCondition("SAXC", True, True, True, True),
}

assert tuple(CONDITION_TABLE) == CONDITIONS


def condition_for(name: str) -> FeedbackCondition:
    try:
        return CONDITION_TABLE[name]
    except KeyError:
        raise InvalidCondition(f"unknown condition {name!r}; expected one of {CONDITIONS}") from None


class FeedbackEngine:
    """Ties the scorer, explainers, corpora, and prompt draws together."""

    def __init__(
        self,
        config: EngineConfig,
        model: QualityModel,
        store: CorpusStore,
        graph: KnowledgeGraph,
        embedder: Embedder,
        prompts: PromptSet,
    ):
        self.config = config
        self.model = model
        self.store = store
        self.graph = graph
        self.embedder = embedder
        self.prompts = prompts
        self._sessions: dict[str, Session] = {}
        self._scored_against: dict[str, CorpusSnapshot] = {}
        self._lock = threading.Lock()
        self._session_seq = 0

    # -- sessions ---------------------------------------------------------

    def create_session(self, condition: str, seed: int | None = None) -> Session:
        condition_for(condition)
        cursor = self.prompts.cursor(seed)
        first = cursor.next_prompt()
        with self._lock:
            self._session_seq += 1
            session = Session(
                id=f"s{self._session_seq:04d}",
                condition=condition,
                cursor=cursor,
                current_prompt=first,
            )
            self._sessions[session.id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        return self._sessions[session_id]

    # -- submissions ------------------------------------------------------

    def submit_ideation(
        self,
        session_id: str,
        text: str,
        prompt_id: str | None = None,
        iteration: int | None = None,
    ) -> IdeationRecord:
        """Score and record one iteration of the session's current prompt.

        ``prompt_id`` and ``iteration``, when given, must match the
        session's current prompt and next expected iteration. The third
        iteration is final: it is appended to the condition's corpus and
        the session advances to a fresh prompt.
        """
        session = self.get_session(session_id)
        if len(text) > self.config.max_text_chars:
            raise TextTooLong(f"text is {len(text)} chars, limit {self.config.max_text_chars}")
        prompt = session.current_prompt
        if prompt is None:
            raise PromptsExhausted("session has no prompts left")
        if prompt_id is not None and prompt_id != prompt.id:
            raise IterationOutOfOrder(
                f"session {session_id} is on prompt {prompt.id}, not {prompt_id}"
            )
        expected = session.expect_iteration(prompt.id)
        if iteration is not None and iteration != expected:
            raise IterationOutOfOrder(
                f"expected iteration {expected} for prompt {prompt.id}, got {iteration}"
            )
        iteration = expected
        snapshot = self.store.snapshot(session.condition)
        scorer = Scorer(self.model, snapshot, self.embedder)
        scores = scorer.pair(text)
        parent = None
        if iteration > 1:
            parent = session.record_at(prompt.id, iteration - 1).id
        record = IdeationRecord(
            id=f"{session_id}-{prompt.id}-i{iteration}",
            session_id=session_id,
            prompt_id=prompt.id,
            condition=session.condition,
            iteration=iteration,
            text=text,
            scores=scores,
            parent=parent,
        )
        session.add_record(record)
        self._scored_against[record.id] = snapshot
        if iteration == MAX_ITERATIONS:
            self.store.append_ideation(session.condition, record)
            try:
                session.current_prompt = session.cursor.next_prompt()
            except PromptsExhausted:
                session.current_prompt = None
        return record

    # -- explanations -----------------------------------------------------

    def _scorer_for(self, record: IdeationRecord) -> Scorer:
        snapshot = self._scored_against.get(record.id) or self.store.snapshot(record.condition)
        return Scorer(self.model, snapshot, self.embedder)

    def attribution(self, record: IdeationRecord, score_kind: str) -> AttributionSet:
        scorer = self._scorer_for(record)
        try:
            return attribute(record.text, scorer.fn(score_kind), score_kind)
        except NoContentTokens:
            return AttributionSet(score_kind, 0.0, (), ())

    def contrast_against(
        self, session: Session, record: IdeationRecord, score_kind: str, compare: int | None
    ) -> ContrastResult | None:
        """Edit attribution against an earlier iteration of the same prompt.

        ``compare=None`` means the direct parent; the first iteration has
        none and yields no edits. An explicit ``compare`` is an iteration
        number and must be strictly earlier than the record's own.
        """
        if compare is None:
            if record.parent is None:
                return None
            other = session.records[record.parent]
        else:
            if not 1 <= compare < record.iteration:
                raise CompareUnavailable(
                    f"compare={compare} is not an earlier iteration than {record.iteration}"
                )
            try:
                other = session.record_at(record.prompt_id, compare)
            except KeyError:
                raise CompareUnavailable(
                    f"no iteration {compare} recorded for prompt {record.prompt_id}"
                ) from None
        scorer = self._scorer_for(record)
        return contrast(
            other.text,
            record.text,
            scorer.fn(score_kind),
            score_kind,
            iteration_from=other.iteration,
            iteration_to=record.iteration,
        )

    def suggestions(self, record: IdeationRecord, attribution: AttributionSet) -> SuggestionSet:
        scorer = self._scorer_for(record)
        cfg = self.config
        return suggest(
            record.text,
            attribution,
            self.graph,
            scorer.corpus,
            self.embedder,
            scorer.fns(),
            anchors=cfg.anchors,
            corpus_radius=cfg.corpus_radius,
            anchor_radius=cfg.anchor_radius,
            min_gain=cfg.min_gain,
            min_neighbors=cfg.min_neighbors,
            top_k=cfg.suggestion_top_k,
        )

    # -- payloads ---------------------------------------------------------

    def feedback_payload(
        self,
        session_id: str,
        record_id: str,
        score_kind: str = "diversity",
        compare: int | None = None,
    ) -> dict:
        """Explanation payload for one recorded iteration, gated by condition.

        Field presence is exact: ``scores`` only under score conditions,
        ``score_kind`` and ``highlights`` only under attribution conditions,
        ``edits`` only under contrastive conditions (empty on the first
        iteration), ``suggestions`` only under counterfactual conditions.
        Under condition N the payload is empty.
        """
        if score_kind not in SCORE_KINDS:
            raise ValueError(f"unknown score kind {score_kind!r}; expected one of {SCORE_KINDS}")
        session = self.get_session(session_id)
        record = session.records[record_id]
        cond = CONDITION_TABLE[session.condition]
        if compare is not None and not cond.show_contrastive:
            raise CompareUnavailable(
                f"condition {cond.name} does not expose revision comparisons"
            )

        payload: dict = {}
        if cond.show_scores:
            payload["scores"] = _scores_dict(record.scores)
        attribution = None
        if cond.show_attribution:
            attribution = self.attribution(record, score_kind)
            payload["score_kind"] = score_kind
            payload["highlights"] = [
                {"token": h.token, "span": [h.start_byte, h.end_byte], "sub_score": h.sub_score}
                for h in attribution.highlights
            ]
        if cond.show_contrastive:
            result = self.contrast_against(session, record, score_kind, compare)
            payload["edits"] = [] if result is None else [
                {"kind": e.kind, "token": e.token, "benefit": e.benefit}
                for e in result.edits
            ]
        if cond.show_counterfactual:
            if attribution is None:
                attribution = self.attribution(record, score_kind)
            sugg = self.suggestions(record, attribution)
            payload["suggestions"] = {
                token: [
                    {
                        "term": s.term,
                        "relation": s.relation,
                        "dq": s.delta_quality_pct,
                        "dd": s.delta_diversity_pct,
                    }
                    for s in items
                ]
                for token, items in sugg.by_token().items()
            }
        return payload

    def feedback(
        self,
        session_id: str,
        record_id: str,
        score_kind: str = "diversity",
        compare: int | None = None,
    ) -> dict:
        """Full feedback response: the record, its gated payload, and the
        view a client should open first."""
        session = self.get_session(session_id)
        record = session.records[record_id]
        cond = CONDITION_TABLE[session.condition]
        payload = self.feedback_payload(session_id, record_id, score_kind, compare)
        nxt = session.current_prompt
        return {
            "record": {
                "id": record.id,
                "session_id": record.session_id,
                "prompt_id": record.prompt_id,
                "condition": record.condition,
                "iteration": record.iteration,
                "text": record.text,
                "parent": record.parent,
            },
            "payload": payload,
            "default_view": _default_view(cond, record.iteration),
            "next_prompt": None if nxt is None else {"id": nxt.id, "text": nxt.text},
        }

    # -- corpus metrics ---------------------------------------------------

    def corpus_metrics(
        self,
        condition: str,
        metrics: tuple[str, ...] = ("dispersion_sum", "dispersion_mean", "disparity"),
        n_samples: int | None = None,
        seed: int = 0,
    ) -> list[MetricReport]:
        snap = self.store.snapshot(condition)
        if len(snap) == 0:
            raise EmptyCorpus(f"corpus for condition {condition!r} is empty")
        for m in metrics:
            if m not in METRICS:
                raise ValueError(f"unknown metric {m!r}; expected one of {METRICS}")
        n = n_samples if n_samples is not None else self.config.bootstrap_samples
        return [
            bootstrap_metric(m, list(snap.texts), self.embedder, n_samples=n, seed=seed)
            for m in metrics
        ]


def _default_view(cond: FeedbackCondition, iteration: int) -> str:
    if cond.show_contrastive and iteration >= 2:
        return "contrastive"
    if cond.show_attribution:
        return "attribution"
    return "scores"


def _scores_dict(scores: ScorePair) -> dict:
    return {
        "quality_pct": scores.quality_pct,
        "diversity_pct": scores.display_diversity_pct,
        "diversity_raw": scores.diversity_raw,
        "degenerate_embedding": scores.degenerate_embedding,
    }
