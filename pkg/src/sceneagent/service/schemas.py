"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    manifest_path: str | None = None
    manifest: dict[str, Any] | None = None
    base_dir: str | None = None


class CreateSessionResponse(BaseModel):
    session_id: str
    video_id: str
    keyframe_count: int
    duration_s: float
    call_budget: int


class AskRequest(BaseModel):
    question: str = Field(min_length=1)


class AskResponse(BaseModel):
    answer: str
    confidence: float
    abstained: bool
    trace_ref: str


class SceneGraphResponse(BaseModel):
    graph: dict[str, Any]
    warnings: list[str]


class QueryRequest(BaseModel):
    query: str = Field(min_length=1)


class QueryResponse(BaseModel):
    rows: list[dict[str, str]]
    value: int | bool | None
    trace: dict[str, Any]


class ErrorDetail(BaseModel):
    code: str
    message: str
    detail: dict[str, Any] | None = None


class ErrorBody(BaseModel):
    error: ErrorDetail


class HealthResponse(BaseModel):
    status: str
