"""Uniform access to chat-completion backends.

Every model call in the engine (caller, reasoner, judge, agent stages) flows
through a Backend. Two implementations ship:

- HttpBackend speaks the OpenAI-compatible chat-completions schema, with
  bounded retries and exponential backoff on transient transport failures.
- ScriptedBackend replays canned responses for deterministic offline tests:
  entries match by substring of the last user message or are consumed in
  sequence position order.

Environment: LLM_API_BASE, LLM_API_KEY, CALLER_MODEL, REASONER_MODEL,
JUDGE_MODEL. A config file may override any of these per role.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field

import httpx

from .errors import (
    BackendTimeoutError,
    BackendUnavailableError,
    ConfigurationError,
    ProtocolError,
)

ROLES = ("system", "user", "assistant", "tool")

DEFAULT_RETRIES = 2
DEFAULT_BACKOFF_S = 0.25  # doubles per attempt
DEFAULT_TIMEOUT_S = 60.0
DEFAULT_CONCURRENCY = 8


@dataclass(frozen=True)
class Message:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class CompletionRequest:
    """One chat completion. mode=greedy ignores temperature/top_p."""

    model_id: str
    messages: tuple[Message, ...]
    mode: str = "greedy"  # greedy | stochastic
    temperature: float = 0.7
    top_p: float = 0.8
    max_tokens: int = 2048
    timeout_s: float = DEFAULT_TIMEOUT_S

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be non-empty")
        if self.messages[0].role not in ("system", "user"):
            raise ValueError("first message must be system or user")
        if self.mode not in ("greedy", "stochastic"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.mode == "stochastic":
            if not (0.0 < self.temperature <= 2.0):
                raise ValueError("temperature must be in (0, 2]")
            if not (0.0 < self.top_p <= 1.0):
                raise ValueError("top_p must be in (0, 1]")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    def last_user_content(self) -> str:
        for m in reversed(self.messages):
            if m.role == "user":
                return m.content
        return ""


@dataclass(frozen=True)
class CompletionResult:
    text: str
    finish_reason: str  # stop | length | error
    latency_s: float = 0.0


class Backend:
    """A chat-completion source. Implementations must be thread-safe."""

    def complete(self, request: CompletionRequest) -> CompletionResult:
        raise NotImplementedError


@dataclass
class ScriptEntry:
    """One canned response. ``match`` restricts it to requests whose last user
    message contains the substring; None means position-matched."""

    text: str
    match: str | None = None
    finish_reason: str = "stop"


class ScriptedBackend(Backend):
    """Deterministic scripted backend for offline tests.

    Entries are consumed at most once, scanned in order; the first unconsumed
    entry whose match rule accepts the request wins. Replaying the same script
    against the same request sequence yields byte-identical results. A lock
    serializes calls so sequence-position matching survives concurrency.
    """

    def __init__(self, script, exhausted_policy: str = "error"):
        if exhausted_policy not in ("error", "repeat_last"):
            raise ConfigurationError(f"unknown exhausted_policy {exhausted_policy!r}")
        self._entries = [
            e if isinstance(e, ScriptEntry) else ScriptEntry(text=str(e)) for e in script
        ]
        self._consumed = [False] * len(self._entries)
        self._exhausted_policy = exhausted_policy
        self._last: CompletionResult | None = None
        self._lock = threading.Lock()

    def complete(self, request: CompletionRequest) -> CompletionResult:
        last_user = request.last_user_content()
        with self._lock:
            for i, entry in enumerate(self._entries):
                if self._consumed[i]:
                    continue
                if entry.match is not None and entry.match not in last_user:
                    continue
                self._consumed[i] = True
                result = CompletionResult(text=entry.text, finish_reason=entry.finish_reason)
                self._last = result
                return result
            if self._exhausted_policy == "repeat_last" and self._last is not None:
                return self._last
            raise BackendUnavailableError("scripted backend exhausted")

    def reset(self) -> None:
        with self._lock:
            self._consumed = [False] * len(self._entries)
            self._last = None


class HttpBackend(Backend):
    """OpenAI-compatible chat-completions endpoint.

    Retries transient transport failures (connection errors, 5xx, 429) up to
    ``retries`` times with exponential backoff before surfacing
    BackendUnavailableError. Deadline overruns raise BackendTimeoutError;
    payloads that do not match the wire schema raise ProtocolError.
    """

    def __init__(
        self,
        endpoint: str,
        api_key: str = "",
        retries: int = DEFAULT_RETRIES,
        backoff_s: float = DEFAULT_BACKOFF_S,
        max_concurrency: int = DEFAULT_CONCURRENCY,
        transport: httpx.BaseTransport | None = None,
    ):
        if not endpoint:
            raise ConfigurationError("http backend requires an endpoint")
        self._url = endpoint.rstrip("/") + "/chat/completions"
        self._headers = {"Content-Type": "application/json"}
        if api_key:
            self._headers["Authorization"] = f"Bearer {api_key}"
        self._retries = retries
        self._backoff_s = backoff_s
        self._semaphore = threading.Semaphore(max_concurrency)
        self._client = httpx.Client(transport=transport) if transport else httpx.Client()

    def complete(self, request: CompletionRequest) -> CompletionResult:
        payload = {
            "model": request.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "max_tokens": request.max_tokens,
        }
        if request.mode == "greedy":
            payload["temperature"] = 0.0
        else:
            payload["temperature"] = request.temperature
            payload["top_p"] = request.top_p

        start = time.monotonic()
        attempts = 1 + self._retries
        last_exc: Exception | None = None
        with self._semaphore:
            for attempt in range(attempts):
                try:
                    response = self._client.post(
                        self._url,
                        json=payload,
                        headers=self._headers,
                        timeout=request.timeout_s,
                    )
                except httpx.TimeoutException as exc:
                    raise BackendTimeoutError(f"deadline exceeded: {exc}") from exc
                except httpx.TransportError as exc:
                    last_exc = exc
                else:
                    if response.status_code in (429,) or response.status_code >= 500:
                        last_exc = BackendUnavailableError(
                            f"backend returned {response.status_code}"
                        )
                    elif response.status_code >= 400:
                        raise ProtocolError(
                            f"backend rejected request: {response.status_code} {response.text[:200]}"
                        )
                    else:
                        return self._parse(response, time.monotonic() - start)
                if attempt < attempts - 1:
                    time.sleep(self._backoff_s * (2**attempt))
        raise BackendUnavailableError(f"transport failed after {attempts} attempts: {last_exc}")

    def _parse(self, response: httpx.Response, latency_s: float) -> CompletionResult:
        try:
            body = response.json()
            choice = body["choices"][0]
            text = choice["message"]["content"]
            finish = choice.get("finish_reason") or "stop"
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"malformed backend payload: {exc}") from exc
        if text is None:
            raise ProtocolError("backend payload has null content")
        # length is propagated as-is: no silent rewrite to stop.
        if finish not in ("stop", "length"):
            finish = "stop"
        return CompletionResult(text=text, finish_reason=finish, latency_s=latency_s)


def complete(request: CompletionRequest, backend: Backend) -> CompletionResult:
    """Convenience wrapper; retry/backoff behavior lives in the backend."""
    return backend.complete(request)


@dataclass(frozen=True)
class RoleModels:
    """Model ids per role, from env or a config override."""

    caller: str = field(default_factory=lambda: os.environ.get("CALLER_MODEL", "caller"))
    reasoner: str = field(default_factory=lambda: os.environ.get("REASONER_MODEL", "reasoner"))
    judge: str = field(default_factory=lambda: os.environ.get("JUDGE_MODEL", "judge"))


def make_backend(config: dict) -> Backend:
    """Build a backend handle from a descriptor.

    kinds:
      {"kind": "scripted", "script": [...], "exhausted_policy": "error"}
      {"kind": "http", "endpoint": ..., "api_key": ...}  — endpoint/api_key
        fall back to LLM_API_BASE / LLM_API_KEY.
    """
    kind = config.get("kind")
    if kind == "scripted":
        entries = []
        for item in config.get("script", []):
            if isinstance(item, dict):
                entries.append(
                    ScriptEntry(
                        text=item.get("text", ""),
                        match=item.get("match"),
                        finish_reason=item.get("finish_reason", "stop"),
                    )
                )
            else:
                entries.append(ScriptEntry(text=str(item)))
        return ScriptedBackend(entries, exhausted_policy=config.get("exhausted_policy", "error"))
    if kind == "http":
        endpoint = config.get("endpoint") or os.environ.get("LLM_API_BASE", "")
        if not endpoint:
            raise ConfigurationError("http backend needs 'endpoint' or LLM_API_BASE")
        api_key = config.get("api_key")
        if api_key is None:
            api_key = os.environ.get("LLM_API_KEY", "")
        return HttpBackend(
            endpoint=endpoint,
            api_key=api_key,
            retries=int(config.get("retries", DEFAULT_RETRIES)),
            backoff_s=float(config.get("backoff_s", DEFAULT_BACKOFF_S)),
            max_concurrency=int(config.get("max_concurrency", DEFAULT_CONCURRENCY)),
        )
    raise ConfigurationError(f"unknown backend kind {kind!r}")
