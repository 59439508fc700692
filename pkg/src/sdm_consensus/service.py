"""Session-scoped HTTP/JSON facade over the session protocol.

Participants join with per-participant bearer tokens issued at session
creation; clients poll round state rather than receiving pushes. Handlers
are stateless over a directory of session documents: every request loads
the document, mutates under a per-session lock, and saves atomically.

Run with ``python -m sdm_consensus.service --store DIR [--host H] [--port P]``.
"""

from __future__ import annotations

import argparse
import json
import secrets
import threading
import uuid
from pathlib import Path

from fastapi import Depends, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import core
from . import session as protocol
from .errors import (
    ConflictError,
    ConsensusError,
    ForbiddenError,
    NotFoundError,
    PrematureFinalizeError,
    UnknownSessionError,
    ValidationError,
)
from .model import (
    Alternative,
    ConsensusConfig,
    Criterion,
    DecisionMaker,
    ScoreScale,
    SocialWeightMode,
)
from .session import SessionState

#: Protocol error family -> (API error code, HTTP status). The five codes
#: map one-to-one onto the five direct ConsensusError subclasses.
ERROR_MAP: tuple[tuple[type, str, int], ...] = (
    (ValidationError, "VALIDATION", 422),
    (NotFoundError, "NOT_FOUND", 404),
    (ForbiddenError, "FORBIDDEN", 403),
    (ConflictError, "CONFLICT", 409),
    (PrematureFinalizeError, "PREMATURE", 409),
)


def error_payload(exc: ConsensusError) -> tuple[int, dict]:
    for family, code, status in ERROR_MAP:
        if isinstance(exc, family):
            body = {"code": code, "message": str(exc)}
            if exc.detail is not None:
                body["detail"] = exc.detail
            return status, body
    return 500, {"code": "INTERNAL", "message": str(exc)}


class SessionStore:
    """Directory-backed session store with per-session write serialization.

    ``<id>.json`` holds the session document; ``<id>.tokens.json`` the
    participant bearer tokens (service-level state, not part of the
    protocol document).
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def _tokens_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.tokens.json"

    def create(self, session: SessionState, tokens: dict[str, str]) -> None:
        protocol.write_session_file(session, self._path(session.session_id))
        self._tokens_path(session.session_id).write_text(
            json.dumps(tokens, indent=2), encoding="utf-8"
        )

    def load(self, session_id: str) -> SessionState:
        path = self._path(session_id)
        if not path.exists():
            raise UnknownSessionError(f"unknown session {session_id!r}", detail=session_id)
        return protocol.read_session_file(path)

    def save(self, session: SessionState) -> None:
        protocol.write_session_file(session, self._path(session.session_id))

    def tokens(self, session_id: str) -> dict[str, str]:
        path = self._tokens_path(session_id)
        if not path.exists():
            raise UnknownSessionError(f"unknown session {session_id!r}", detail=session_id)
        return json.loads(path.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Request schemas
# ---------------------------------------------------------------------------


class ConfigIn(BaseModel):
    consensus_level: float
    social_mode: str = "worked"
    max_rounds: int = 10
    epsilon: float = 1e-9


class CriterionIn(BaseModel):
    id: str
    name: str = ""
    description: str = ""


class AlternativeIn(BaseModel):
    id: str
    name: str = ""


class ParticipantIn(BaseModel):
    id: str
    name: str = ""
    reputation: float = 0.0


class CreateSessionIn(BaseModel):
    config: ConfigIn
    criteria: list[CriterionIn]
    alternatives: list[AlternativeIn]
    participants: list[ParticipantIn]
    scale: list[tuple[str, float]] | None = None


class PreferencesIn(BaseModel):
    criterion_weights: dict[str, float]
    scores: dict[str, dict[str, float]]


class SessionResourceOut(BaseModel):
    session_id: str
    sdm_id: str
    participants: list[dict]


def create_app(store_dir: str | Path) -> FastAPI:
    """Service over a session-document directory."""
    app = FastAPI(title="sdm-consensus", version="0.1.0")
    store = SessionStore(store_dir)
    app.state.store = store

    @app.exception_handler(ConsensusError)
    async def consensus_error_handler(request: Request, exc: ConsensusError):
        status, body = error_payload(exc)
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "VALIDATION", "message": "malformed request body",
                     "detail": json.dumps(exc.errors(), default=str)},
        )

    def bearer_token(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise ForbiddenError("missing bearer token")
        return authorization.removeprefix("Bearer ")

    def authenticated_dm(session_id: str, token: str) -> str:
        for dm_id, expected in store.tokens(session_id).items():
            if secrets.compare_digest(expected, token):
                return dm_id
        raise ForbiddenError("invalid participant token")

    @app.post("/sessions", status_code=201, response_model=SessionResourceOut)
    def create_session_endpoint(body: CreateSessionIn):
        try:
            mode = SocialWeightMode(body.config.social_mode)
        except ValueError as exc:
            raise ValidationError(
                f"unknown social mode {body.config.social_mode!r}"
            ) from exc
        config = ConsensusConfig(
            consensus_level=body.config.consensus_level,
            social_mode=mode,
            max_rounds=body.config.max_rounds,
            epsilon=body.config.epsilon,
        )
        if not body.participants:
            raise ValidationError("a session needs at least two participants")
        scale = (
            ScoreScale(levels=tuple((label, value) for label, value in body.scale))
            if body.scale
            else ScoreScale()
        )
        session = protocol.create_session(
            config,
            [Criterion(c.id, c.name, c.description) for c in body.criteria],
            [Alternative(a.id, a.name) for a in body.alternatives],
            [DecisionMaker(p.id, p.name, reputation=p.reputation) for p in body.participants],
            scale=scale,
            session_id=uuid.uuid4().hex[:12],
        )
        tokens = {p.id: secrets.token_urlsafe(16) for p in session.participants}
        store.create(session, tokens)
        return SessionResourceOut(
            session_id=session.session_id,
            sdm_id=session.sdm_id,
            participants=[
                {
                    "id": p.id,
                    "name": p.name,
                    "role": p.role.value,
                    "reputation": p.reputation,
                    "token": tokens[p.id],
                }
                for p in session.participants
            ],
        )

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str, token: str = Depends(bearer_token)):
        authenticated_dm(session_id, token)
        return protocol.session_to_document(store.load(session_id))

    @app.put("/sessions/{session_id}/participants/{dm_id}/preferences")
    def submit_preferences_endpoint(
        session_id: str, dm_id: str, body: PreferencesIn, token: str = Depends(bearer_token)
    ):
        actor = authenticated_dm(session_id, token)
        if actor != dm_id:
            raise ForbiddenError(
                f"token of {actor!r} cannot submit preferences for {dm_id!r}"
            )
        with store.lock(session_id):
            session = store.load(session_id)
            profile = protocol.profile_from_document(
                {"dm_id": dm_id, **body.model_dump()}, location="request"
            )
            protocol.submit_preferences(session, dm_id, profile)
            store.save(session)
            vector = core.evaluate(profile, session.criteria, session.alternatives)
        return {"dm_id": dm_id, "evaluation": dict(vector.values)}

    @app.post("/sessions/{session_id}/rounds")
    def compute_round_endpoint(session_id: str, token: str = Depends(bearer_token)):
        authenticated_dm(session_id, token)
        with store.lock(session_id):
            session = store.load(session_id)
            report = protocol.compute_round(session)
            store.save(session)
        return protocol.round_report_to_document(report)

    @app.get("/sessions/{session_id}/rounds/latest")
    def latest_round_endpoint(session_id: str, token: str = Depends(bearer_token)):
        authenticated_dm(session_id, token)
        session = store.load(session_id)
        if not session.history:
            raise NotFoundError("no rounds computed yet", detail=session_id)
        return protocol.round_report_to_document(session.history[-1])

    @app.post("/sessions/{session_id}/finalize")
    def finalize_endpoint(session_id: str, token: str = Depends(bearer_token)):
        authenticated_dm(session_id, token)
        with store.lock(session_id):
            session = store.load(session_id)
            result = protocol.finalize(session)
            store.save(session)
        return protocol.aggregation_to_document(result)

    @app.get("/sessions/{session_id}/result")
    def result_endpoint(session_id: str, token: str = Depends(bearer_token)):
        authenticated_dm(session_id, token)
        session = store.load(session_id)
        if session.result is None:
            raise PrematureFinalizeError("session is not finalized yet")
        return protocol.aggregation_to_document(session.result)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    return app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m sdm_consensus.service",
        description="Run the consensus session service",
    )
    parser.add_argument("--store", default="./sessions", help="session document directory")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8400)
    args = parser.parse_args(argv)

    import uvicorn

    uvicorn.run(create_app(args.store), host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
