"""FastAPI application exposing the three workflows over sessions."""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .schemas import (
    AskRequest,
    AskResponse,
    CreateSessionRequest,
    CreateSessionResponse,
    ErrorBody,
    ErrorDetail,
    HealthResponse,
    QueryRequest,
    QueryResponse,
    SceneGraphResponse,
)
from .sessions import ServiceError, SessionManager

STATUS_BY_CODE = {
    "not_found": 404,
    "bad_request": 400,
    "budget_exceeded": 429,
    "backend_unavailable": 502,
    "conflict": 409,
}

CONSOLE_DIR_ENV = "SCENEAGENT_CONSOLE_DIR"
SERVER_TOKEN_ENV = "SCENEAGENT_SERVER_TOKEN"

_OPEN_PATHS = ("/v1/health", "/console")


def create_app(manager: SessionManager) -> FastAPI:
    app = FastAPI(title="sceneagent", version="0.1.0")
    app.state.manager = manager

    @app.middleware("http")
    async def static_bearer_auth(request: Request, call_next):
        token = os.environ.get(SERVER_TOKEN_ENV)
        if token and not request.url.path.startswith(_OPEN_PATHS):
            if request.headers.get("Authorization") != f"Bearer {token}":
                body = ErrorBody(
                    error=ErrorDetail(
                        code="bad_request", message="missing or invalid bearer token"
                    )
                )
                return JSONResponse(status_code=401, content=body.model_dump())
        return await call_next(request)

    @app.exception_handler(ServiceError)
    async def service_error_handler(_request: Request, exc: ServiceError):
        body = ErrorBody(
            error=ErrorDetail(code=exc.code, message=str(exc), detail=exc.detail)
        )
        return JSONResponse(status_code=STATUS_BY_CODE[exc.code], content=body.model_dump())

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/v1/sessions", response_model=CreateSessionResponse, status_code=201)
    def create_session(body: CreateSessionRequest) -> CreateSessionResponse:
        session = manager.create_session(
            manifest_path=body.manifest_path,
            manifest_doc=body.manifest,
            base_dir=body.base_dir,
        )
        return CreateSessionResponse(
            session_id=session.session_id,
            video_id=session.context.manifest.video_id,
            keyframe_count=len(session.context.keyframes),
            duration_s=session.context.manifest.duration_s,
            call_budget=session.budget.remaining,
        )

    @app.post("/v1/sessions/{session_id}/ask", response_model=AskResponse)
    def ask(session_id: str, body: AskRequest) -> AskResponse:
        _session, trace, trace_ref = manager.ask(session_id, body.question)
        return AskResponse(
            answer=trace.answer,
            confidence=trace.confidence,
            abstained=trace.abstained,
            trace_ref=trace_ref,
        )

    @app.post("/v1/sessions/{session_id}/scenegraph", response_model=SceneGraphResponse)
    def scenegraph(session_id: str) -> SceneGraphResponse:
        graph, warnings = manager.generate_scene_graph(session_id)
        from ..scenegraph.serialize import graph_to_doc

        return SceneGraphResponse(graph=graph_to_doc(graph), warnings=warnings)

    @app.post("/v1/sessions/{session_id}/graphql-query", response_model=QueryResponse)
    def graphql_query(session_id: str, body: QueryRequest) -> QueryResponse:
        result = manager.graph_query(session_id, body.query)
        doc = result.to_doc()
        return QueryResponse(rows=doc["rows"], value=doc["value"], trace=doc["trace"])

    @app.get("/v1/sessions/{session_id}/graph")
    def get_graph(session_id: str) -> dict:
        return manager.get_graph_doc(session_id)

    @app.get("/v1/traces/{trace_ref}")
    def get_trace(trace_ref: str) -> dict:
        return manager.get_trace(trace_ref)

    console_dir = os.environ.get(CONSOLE_DIR_ENV)
    if console_dir and Path(console_dir).is_dir():
        app.mount("/console", StaticFiles(directory=console_dir, html=True), name="console")

    return app
