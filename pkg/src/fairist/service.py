"""HTTP facade: token-addressed sessions with immediately retrievable reports.

Error contract: 404 for unknown tokens (identical body whether the session
never existed or was deleted), 409 for mutations of a complete session,
422 for validation failures with a machine-readable body of
``{code, question_id?, detail}``, 400 for malformed request bodies.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from . import session as session_ops
from .answers import AnswerDecodeError, answer_from_json, answer_to_json
from .content_pack import builtin_document, builtin_schema
from .recommend import SessionNotCompleteError, apply_rules
from .render import FORMATS, media_type, render as render_report
from .schema import SurveySchema
from .session import Session, SessionError, SessionCompleteError
from .store import SessionStore, UnknownTokenError
from .tokens import mint_token

SCHEMA_MEDIA_TYPE = "application/yaml"


def _error(status: int, code: str, detail: str, question_id: str | None = None) -> JSONResponse:
    body: dict[str, Any] = {"code": code, "detail": detail}
    if question_id is not None:
        body["question_id"] = question_id
    return JSONResponse(body, status_code=status)


def _unknown_token() -> JSONResponse:
    # Constant body: no oracle for distinguishing deleted from never-created.
    return _error(404, "unknown-token", "unknown token")


def _session_error(exc: SessionError) -> JSONResponse:
    status = 409 if isinstance(exc, (SessionCompleteError, SessionNotCompleteError)) else 422
    question_id = getattr(exc, "question_id", None)
    return _error(status, exc.code, str(exc), question_id)


async def _json_body(request: Request, allow_empty: bool = False) -> Any:
    raw = await request.body()
    if not raw:
        if allow_empty:
            return {}
        raise ValueError("empty body")
    return json.loads(raw)


def _question_payload(question, answered_count: int) -> dict[str, Any]:
    return {
        "complete": False,
        "id": question.id,
        "prompt": question.prompt,
        "kind": question.kind.value,
        "options": [
            {"id": o.id, "label": o.label, "allows_free_text": o.allows_free_text}
            for o in question.options
        ],
        "answered_count": answered_count,
    }


def _next_payload(schema: SurveySchema, session: Session) -> dict[str, Any]:
    question = session_ops.next_question(schema, session)
    if question is None:
        return {"complete": True, "answered_count": len(session.answers)}
    return _question_payload(question, len(session.answers))


def _session_state(schema: SurveySchema, session: Session) -> dict[str, Any]:
    answers = {
        q.id: answer_to_json(session.answers[q.id])
        for q in schema.questions
        if q.id in session.answers
    }
    return {
        "token": session.token,
        "schema_id": session.schema_id,
        "schema_version": session.schema_version,
        "status": session.status.value,
        "answers": answers,
        "answered_count": len(answers),
    }


def create_app(data_dir: Path | str, static_dir: Path | str | None = None) -> FastAPI:
    """Build the application around a data directory and optional static assets."""
    store = SessionStore(data_dir)
    schemas: dict[str, tuple[SurveySchema, str]] = {
        builtin_schema().id: (builtin_schema(), builtin_document()),
    }
    app = FastAPI(title="FAIRIST", docs_url=None, redoc_url=None, openapi_url=None)

    def schema_for(session: Session) -> SurveySchema:
        return schemas[session.schema_id][0]

    @app.post("/api/v1/sessions")
    async def create_session(request: Request) -> Response:
        try:
            body = await _json_body(request, allow_empty=True)
        except (ValueError, json.JSONDecodeError):
            return _error(400, "malformed-body", "request body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "malformed-body", "request body must be a JSON object")
        schema_id = body.get("schema_id") or builtin_schema().id
        if schema_id not in schemas:
            return _error(422, "unknown-schema", f"no schema '{schema_id}' is published")
        schema, _ = schemas[schema_id]
        new_session = session_ops.start_session(schema, token=mint_token())
        store.save(new_session)
        return JSONResponse(
            {
                "token": new_session.token,
                "schema_id": new_session.schema_id,
                "schema_version": new_session.schema_version,
            },
            status_code=201,
        )

    @app.get("/api/v1/sessions/{token}")
    def get_session(token: str) -> Response:
        try:
            stored = store.load(token)
        except UnknownTokenError:
            return _unknown_token()
        return JSONResponse(_session_state(schema_for(stored), stored))

    @app.delete("/api/v1/sessions/{token}")
    def delete_session(token: str) -> Response:
        with store.lock_for(token):
            try:
                store.delete(token)
            except UnknownTokenError:
                return _unknown_token()
        return Response(status_code=204)

    @app.get("/api/v1/sessions/{token}/next")
    def get_next(token: str) -> Response:
        try:
            stored = store.load(token)
        except UnknownTokenError:
            return _unknown_token()
        return JSONResponse(_next_payload(schema_for(stored), stored))

    @app.post("/api/v1/sessions/{token}/answers")
    async def post_answer(token: str, request: Request) -> Response:
        try:
            body = await _json_body(request)
        except (ValueError, json.JSONDecodeError):
            return _error(400, "malformed-body", "request body must be a JSON object")
        if not isinstance(body, dict) or "question_id" not in body or "value" not in body:
            return _error(400, "malformed-body", "body must contain question_id and value")
        question_id = body["question_id"]
        if not isinstance(question_id, str):
            return _error(400, "malformed-body", "question_id must be a string")
        try:
            value = answer_from_json(body["value"])
        except AnswerDecodeError as exc:
            return _error(422, "bad-answer-shape", str(exc), question_id)
        with store.lock_for(token):
            try:
                stored = store.load(token)
            except UnknownTokenError:
                return _unknown_token()
            schema = schema_for(stored)
            try:
                updated = session_ops.submit_answer(schema, stored, question_id, value)
            except SessionError as exc:
                return _session_error(exc)
            store.save(updated)
        return JSONResponse(
            {"session": _session_state(schema, updated), "next": _next_payload(schema, updated)}
        )

    @app.delete("/api/v1/sessions/{token}/answers/{question_id}")
    def delete_answer(token: str, question_id: str) -> Response:
        with store.lock_for(token):
            try:
                stored = store.load(token)
            except UnknownTokenError:
                return _unknown_token()
            schema = schema_for(stored)
            try:
                updated = session_ops.retract_answer(schema, stored, question_id)
            except SessionError as exc:
                return _session_error(exc)
            store.save(updated)
        return JSONResponse(_session_state(schema, updated))

    @app.post("/api/v1/sessions/{token}/complete")
    def post_complete(token: str) -> Response:
        with store.lock_for(token):
            try:
                stored = store.load(token)
            except UnknownTokenError:
                return _unknown_token()
            schema = schema_for(stored)
            try:
                updated = session_ops.complete_session(schema, stored)
            except SessionError as exc:
                return _session_error(exc)
            store.save(updated)
        return JSONResponse({"report": f"/api/v1/reports/{token}"})

    @app.get("/api/v1/reports/{token}")
    def get_report(token: str, format: str = "md") -> Response:
        if format not in FORMATS:
            return _error(422, "bad-format", f"format must be one of {', '.join(FORMATS)}")
        try:
            stored = store.load(token)
        except UnknownTokenError:
            return _unknown_token()
        schema = schema_for(stored)
        try:
            report = apply_rules(schema, stored)
        except SessionError as exc:
            return _session_error(exc)
        return Response(render_report(report, format), media_type=media_type(format))

    @app.get("/api/v1/schemas")
    def list_schemas() -> Response:
        return JSONResponse(
            {"schemas": [{"id": s.id, "version": s.version} for s, _ in schemas.values()]}
        )

    @app.get("/api/v1/schemas/{schema_id}")
    def get_schema(schema_id: str) -> Response:
        entry = schemas.get(schema_id)
        if entry is None:
            return _error(404, "unknown-schema", f"no schema '{schema_id}' is published")
        return Response(entry[1], media_type=SCHEMA_MEDIA_TYPE)

    if static_dir is not None:
        static_path = Path(static_dir)
        index = static_path / "index.html"

        @app.get("/s/{token}")
        def session_page(token: str) -> Response:
            # The single-page app resumes from the token in the URL.
            return FileResponse(index)

        app.mount("/", StaticFiles(directory=static_path, html=True), name="static")

    return app
