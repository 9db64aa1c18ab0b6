"""HTTP transport: POSTs the chat JSON body to a profile's endpoint URL."""

from __future__ import annotations

import os

import httpx

from .protocol import (
    BackendProfile,
    BackendTimeout,
    ChatRequest,
    ChatResponse,
    MalformedResponse,
    TransientStatus,
    wire_body,
)

TOKEN_ENV = "SCENEAGENT_API_TOKEN"


class HttpTransport:
    def __init__(self, client: httpx.Client | None = None):
        self._client = client or httpx.Client()

    def send(self, profile: BackendProfile, req: ChatRequest) -> ChatResponse:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(TOKEN_ENV)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        try:
            resp = self._client.post(
                profile.base_url,
                json=wire_body(profile, req),
                headers=headers,
                timeout=profile.timeout_ms / 1000.0,
            )
        except httpx.TimeoutException as exc:
            raise BackendTimeout(f"{profile.base_url}: {exc}") from exc
        except httpx.HTTPError as exc:
            raise MalformedResponse(f"{profile.base_url}: {exc}") from exc
        if resp.status_code >= 500:
            raise TransientStatus(f"{profile.base_url}: status {resp.status_code}")
        if resp.status_code != 200:
            raise MalformedResponse(f"{profile.base_url}: status {resp.status_code}")
        try:
            doc = resp.json()
        except ValueError as exc:
            raise MalformedResponse(f"{profile.base_url}: non-JSON body") from exc
        if not isinstance(doc, dict) or not isinstance(doc.get("text"), str):
            raise MalformedResponse(f"{profile.base_url}: missing text field")
        finish = doc.get("finish_reason", "stop")
        try:
            return ChatResponse(text=doc["text"], finish_reason=finish, usage=doc.get("usage"))
        except ValueError as exc:
            raise MalformedResponse(str(exc)) from exc

    def close(self) -> None:
        self._client.close()
