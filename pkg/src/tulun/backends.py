"""MT and LLM backend clients, plus deterministic mocks.

The HTTP contracts are deliberately minimal:

    MT:  POST endpoint_url  {"text", "source", "target"} -> {"translated_text"}
    LLM: POST endpoint_url  {"model", "messages", "temperature", "max_tokens"}
         -> {"choices": [{"message": {"content": ...}}]}

Credentials are read from the environment variable named in the config and
are never persisted. Timeouts and 5xx responses are retried at most twice
with exponential backoff (0.5 s then 2 s); request bodies are identical
across attempts so retries are idempotent.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import httpx

from .errors import BackendError, ValidationError
from .store import LlmBackendConfig, MtBackendConfig

DEFAULT_TIMEOUT = 30.0
_BACKOFF = [0.5, 2.0]

# Test hook: monkeypatched to avoid real sleeps in retry tests.
_sleep = time.sleep


@dataclass(frozen=True)
class MtRequest:
    source_text: str
    source_lang_name: str
    target_lang_name: str


@dataclass(frozen=True)
class MtResponse:
    translated_text: str
    provider_latency_ms: int = 0


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str

    def to_dict(self) -> dict:
        return {"role": self.role, "content": self.content}


def _bearer_headers(env_name: str) -> dict:
    headers = {"Content-Type": "application/json"}
    token = os.environ.get(env_name or "", "")
    if token:
        headers["Authorization"] = f"Bearer {token}"
    return headers


def _post_json(kind: str, url: str, body: dict, headers: dict,
               timeout: float = DEFAULT_TIMEOUT) -> dict:
    last_error: BackendError | None = None
    for attempt in range(len(_BACKOFF) + 1):
        if attempt > 0:
            _sleep(_BACKOFF[attempt - 1])
        try:
            response = httpx.post(url, json=body, headers=headers, timeout=timeout)
        except httpx.TimeoutException as exc:
            last_error = BackendError(kind, f"{kind} backend timed out: {exc}")
            continue
        except httpx.HTTPError as exc:
            raise BackendError(kind, f"{kind} backend network error: {exc}") from exc
        if 500 <= response.status_code < 600:
            last_error = BackendError(
                kind, f"{kind} backend returned {response.status_code}",
                detail=response.text[:500])
            continue
        if response.status_code < 200 or response.status_code >= 300:
            raise BackendError(
                kind, f"{kind} backend returned {response.status_code}",
                detail=response.text[:500])
        try:
            return response.json()
        except ValueError as exc:
            raise BackendError(kind, f"{kind} backend returned malformed JSON",
                               detail=response.text[:500]) from exc
    raise last_error


def mt_translate(config: MtBackendConfig, request: MtRequest) -> MtResponse:
    config.validate()
    if config.kind == "passthrough":
        return MtResponse(translated_text=request.source_text)
    if config.kind == "mock":
        mapping = config.extra_params or {}
        if request.source_text in mapping:
            return MtResponse(translated_text=mapping[request.source_text])
        return MtResponse(translated_text=f"MT: {request.source_text}")
    started = time.monotonic()
    payload = _post_json(
        "mt",
        config.endpoint_url,
        {
            "text": request.source_text,
            "source": request.source_lang_name,
            "target": request.target_lang_name,
        },
        _bearer_headers(config.auth_token_env),
    )
    latency_ms = int((time.monotonic() - started) * 1000)
    translated = payload.get("translated_text")
    if not isinstance(translated, str):
        raise BackendError("mt", "mt backend response missing translated_text",
                           detail=payload)
    return MtResponse(translated_text=translated, provider_latency_ms=latency_ms)


def extract_draft(user_message: str) -> str:
    """Text after the final "MT: " line of a prompt; the whole message if absent."""
    draft = None
    for line in user_message.splitlines():
        if line.startswith("MT: "):
            draft = line[len("MT: "):]
        elif line == "MT:":
            draft = ""
    return user_message if draft is None else draft


def llm_chat(config: LlmBackendConfig, messages: list[ChatMessage]) -> str:
    config.validate()
    if not messages:
        raise ValidationError("llm_chat requires at least one message")
    if config.kind == "mock":
        last_user = next((m for m in reversed(messages) if m.role == "user"), None)
        if last_user is None:
            raise ValidationError("mock llm requires a user message")
        text = extract_draft(last_user.content)
        for old, new in (config.mock_replacements or {}).items():
            text = text.replace(old, new)
        return text.strip()
    payload = _post_json(
        "llm",
        config.endpoint_url,
        {
            "model": config.model_id,
            "messages": [m.to_dict() for m in messages],
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
        },
        _bearer_headers(config.auth_token_env),
    )
    try:
        content = payload["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise BackendError("llm", "llm backend response missing choices[0].message.content",
                           detail=payload) from None
    if not isinstance(content, str) or not content.strip():
        raise BackendError("llm", "llm backend returned an empty completion", detail=payload)
    return content.strip()
