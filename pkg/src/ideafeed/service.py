"""HTTP service exposing the feedback engine.

Routes:

* ``POST /sessions`` - open a session under a feedback condition
* ``POST /sessions/{sid}/ideations`` - submit one iteration, get feedback
* ``GET /sessions/{sid}/ideations/{iid}/feedback`` - re-fetch feedback with
  a different score kind or comparison iteration
* ``GET /health`` - liveness plus corpus versions and model hash

Responses drop fields that are ``None``: a first-iteration record has no
``parent`` key and an exhausted session has no ``next_prompt`` key. The
``payload`` object carries only the fields the session's condition allows;
under condition N it is ``{}``.

Error mapping: bad condition or score kind 400, unavailable comparison 403,
unknown session or ideation 404, out-of-order iteration or exhausted
prompts 409, oversized text 413.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .engine import FeedbackEngine
from .errors import (
    CompareUnavailable,
    InvalidCondition,
    IterationOutOfOrder,
    PromptsExhausted,
    TextTooLong,
)


class CreateSessionRequest(BaseModel):
    condition: str
    seed: int | None = None


class PromptOut(BaseModel):
    id: str
    text: str


class SessionOut(BaseModel):
    session_id: str
    condition: str
    first_prompt: PromptOut


class SubmitRequest(BaseModel):
    prompt_id: str
    text: str = Field(min_length=1)
    iteration: int = Field(ge=1, le=3)


class RecordOut(BaseModel):
    id: str
    session_id: str
    prompt_id: str
    condition: str
    iteration: int
    text: str
    parent: str | None = None


class ScoresOut(BaseModel):
    quality_pct: float
    diversity_pct: float
    diversity_raw: float
    degenerate_embedding: bool


class HighlightOut(BaseModel):
    token: str
    span: tuple[int, int]  # byte offsets [start, end) into the message
    sub_score: float


class EditOut(BaseModel):
    kind: str  # "insertion" | "deletion"
    token: str
    benefit: float


class SuggestionOut(BaseModel):
    term: str
    relation: str
    dq: float
    dd: float


class PayloadOut(BaseModel):
    scores: ScoresOut | None = None
    score_kind: str | None = None
    highlights: list[HighlightOut] | None = None
    edits: list[EditOut] | None = None
    suggestions: dict[str, list[SuggestionOut]] | None = None


class FeedbackResponse(BaseModel):
    record: RecordOut
    payload: PayloadOut
    default_view: str
    next_prompt: PromptOut | None = None


class HealthResponse(BaseModel):
    status: str
    corpus_versions: dict[str, int]
    model_hash: str


_ERROR_STATUS: list[tuple[type[Exception], int]] = [
    (InvalidCondition, 400),
    (ValueError, 400),
    (CompareUnavailable, 403),
    (KeyError, 404),
    (IterationOutOfOrder, 409),
    (PromptsExhausted, 409),
    (TextTooLong, 413),
]


def create_app(engine: FeedbackEngine) -> FastAPI:
    app = FastAPI(title="ideafeed", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.engine = engine

    for exc_type, status in _ERROR_STATUS:
        app.add_exception_handler(exc_type, _handler(status))

    @app.post("/sessions", response_model=SessionOut)
    def create_session(req: CreateSessionRequest) -> SessionOut:
        session = engine.create_session(req.condition, req.seed)
        prompt = session.current_prompt
        return SessionOut(
            session_id=session.id,
            condition=session.condition,
            first_prompt=PromptOut(id=prompt.id, text=prompt.text),
        )

    @app.post(
        "/sessions/{sid}/ideations",
        response_model=FeedbackResponse,
        response_model_exclude_none=True,
    )
    def submit(sid: str, req: SubmitRequest) -> FeedbackResponse:
        record = engine.submit_ideation(
            sid, req.text, prompt_id=req.prompt_id, iteration=req.iteration
        )
        return FeedbackResponse(**engine.feedback(sid, record.id))

    @app.get(
        "/sessions/{sid}/ideations/{iid}/feedback",
        response_model=FeedbackResponse,
        response_model_exclude_none=True,
    )
    def feedback(
        sid: str,
        iid: str,
        score: str = Query(default="diversity"),
        compare: int | None = Query(default=None),
    ) -> FeedbackResponse:
        return FeedbackResponse(**engine.feedback(sid, iid, score_kind=score, compare=compare))

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(
            status="ok",
            corpus_versions=engine.store.versions(),
            model_hash=engine.model.train_hash,
        )

    return app


def _handler(status: int):
    def handle(request: Request, exc: Exception) -> JSONResponse:
        detail = str(exc) or exc.__class__.__name__
        return JSONResponse(status_code=status, content={"detail": detail})

    return handle
