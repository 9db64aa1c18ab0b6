"""Caching chat client: retry with backoff, response cache, in-flight dedup, budget."""

from __future__ import annotations

import threading
import time
from concurrent.futures import Future
from typing import Callable, Protocol

from .protocol import (
    RETRYABLE,
    BackendProfile,
    BudgetExceeded,
    ChatRequest,
    ChatResponse,
    request_digest,
)

BACKOFF_BASE_S = 0.25


class Transport(Protocol):
    def send(self, profile: BackendProfile, req: ChatRequest) -> ChatResponse: ...


class CallBudget:
    """Thread-safe countdown of backend invocations allowed for one session."""

    def __init__(self, limit: int):
        if limit < 0:
            raise ValueError("budget limit must be >= 0")
        self._lock = threading.Lock()
        self.limit = limit
        self.spent = 0

    @property
    def remaining(self) -> int:
        return self.limit - self.spent

    def spend(self, n: int = 1) -> None:
        with self._lock:
            if self.spent + n > self.limit:
                raise BudgetExceeded(f"call budget of {self.limit} exhausted")
            self.spent += n


class CachingClient:
    """Wraps a transport with caching; identical concurrent requests share one call."""

    def __init__(
        self,
        profile: BackendProfile,
        transport: Transport,
        budget: CallBudget | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.profile = profile
        self.transport = transport
        self.budget = budget
        self._sleep = sleep
        self._lock = threading.Lock()
        self._cache: dict[str, ChatResponse] = {}
        self._inflight: dict[str, Future] = {}
        self.call_log: list[str] = []  # digests of actual backend invocations

    def digest(self, req: ChatRequest) -> str:
        return request_digest(self.profile, req)

    def complete(self, req: ChatRequest) -> ChatResponse:
        digest = self.digest(req)
        while True:
            with self._lock:
                if digest in self._cache:
                    return self._cache[digest]
                waiter = self._inflight.get(digest)
                if waiter is None:
                    future: Future = Future()
                    self._inflight[digest] = future
                    break
            # another thread owns this digest; wait for it, then re-check
            waiter.result()
        try:
            if self.budget is not None:
                self.budget.spend()
            with self._lock:
                self.call_log.append(digest)
            response = self._send_with_retry(req)
        except BaseException as exc:
            with self._lock:
                self._inflight.pop(digest, None)
            future.set_exception(exc)
            raise
        with self._lock:
            self._cache[digest] = response
            self._inflight.pop(digest, None)
        future.set_result(response)
        return response

    def _send_with_retry(self, req: ChatRequest) -> ChatResponse:
        attempt = 0
        while True:
            try:
                return self.transport.send(self.profile, req)
            except RETRYABLE:
                if attempt >= self.profile.max_retries:
                    raise
                self._sleep(BACKOFF_BASE_S * (2**attempt))
                attempt += 1
