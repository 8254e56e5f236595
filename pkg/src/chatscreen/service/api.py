"""HTTP/JSON API over the session manager.

Routes (documented in docs/api.md):
    POST /v1/sessions
    POST /v1/sessions/{id}/messages
    GET  /v1/sessions/{id}/report
    GET  /v1/health

All /v1 routes require `Authorization: Bearer <token>` when the service is
configured with a token (placeholder auth).
"""

from fastapi import APIRouter, Depends, FastAPI, HTTPException, Request
from pydantic import BaseModel, Field

from .sessions import (ModelNotLoadedError, SessionClosedError,
                       SessionNotFoundError)

__all__ = ["create_app"]


class QuestionOut(BaseModel):
    id: str
    text: str


class CreateSessionResponse(BaseModel):
    session_id: str
    question: QuestionOut


class MessageRequest(BaseModel):
    text: str = Field(min_length=1)


class AggregateOut(BaseModel):
    max_prob: float
    ewma_prob: float
    flagged_count: int
    level: str


class MessageResponse(BaseModel):
    score: float
    next_question: QuestionOut
    aggregate: AggregateOut


class TranscriptEntryOut(BaseModel):
    role: str
    text: str
    timestamp: str


class FlaggedMessageOut(BaseModel):
    transcript_index: int
    text: str
    probability: float


class ReportResponse(BaseModel):
    session_id: str
    generated_at: str
    state: str
    transcript: list[TranscriptEntryOut]
    scores: list[float]
    flagged: list[FlaggedMessageOut]
    aggregate: AggregateOut
    recommended_action: str
    model_checksum: str
    other_findings: list


class HealthResponse(BaseModel):
    status: str
    model_checksum: str


def create_app(manager, token: str | None = None) -> FastAPI:
    """Build the FastAPI application around a SessionManager."""
    app = FastAPI(title="chatscreen", version="0.1.0")

    def require_token(request: Request) -> None:
        if token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="invalid or missing bearer token")

    router = APIRouter(prefix="/v1", dependencies=[Depends(require_token)])

    @router.post("/sessions", response_model=CreateSessionResponse)
    def create_session():
        session_id, question = manager.create_session()
        return CreateSessionResponse(
            session_id=session_id,
            question=QuestionOut(id=question.id, text=question.text),
        )

    @router.post("/sessions/{session_id}/messages", response_model=MessageResponse)
    def post_message(session_id: str, message: MessageRequest):
        try:
            result = manager.post_message(session_id, message.text)
        except SessionNotFoundError:
            raise HTTPException(status_code=404, detail="session not found")
        except SessionClosedError:
            raise HTTPException(status_code=409, detail="session is closed")
        except ModelNotLoadedError:
            raise HTTPException(status_code=503, detail="detector model not loaded")
        question = result["next_question"]
        return MessageResponse(
            score=result["score"],
            next_question=QuestionOut(id=question.id, text=question.text),
            aggregate=AggregateOut(**result["aggregate"].to_dict()),
        )

    @router.get("/sessions/{session_id}/report", response_model=ReportResponse)
    def get_report(session_id: str):
        try:
            report = manager.generate_report(session_id)
        except SessionNotFoundError:
            raise HTTPException(status_code=404, detail="session not found")
        return ReportResponse(**report)

    @router.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", model_checksum=manager.model_checksum)

    app.include_router(router)
    return app
