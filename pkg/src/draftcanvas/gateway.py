"""Streaming chat-completions client for any OpenAI-compatible endpoint.

Requests retry with exponential backoff only while nothing has been
emitted; once a chunk reaches the consumer a failure is surfaced rather
than retried, so users never see duplicated text.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from time import sleep as _sleep
from typing import Callable, Iterator

import httpx

from draftcanvas.prompts import PromptBundle

BACKOFF_BASE_SECONDS = 1.0
BACKOFF_FACTOR = 2.0


class GatewayError(Exception):
    retryable = False


class AuthError(GatewayError):
    retryable = False


class RateLimited(GatewayError):
    retryable = True


class NetworkError(GatewayError):
    retryable = True


class Timeout(GatewayError):
    retryable = True


class ProviderError(GatewayError):
    retryable = False

    def __init__(self, status: int, body: str):
        super().__init__(f"provider returned {status}: {body[:200]}")
        self.status = status
        self.body = body


@dataclass(frozen=True)
class ProviderConfig:
    base_url: str = "https://api.openai.com/v1"
    model_id: str = "gpt-4o-2024-08-06"
    api_key_env: str = "OPENAI_API_KEY"
    timeout_seconds: float = 60.0
    max_retries: int = 2

    def __post_init__(self) -> None:
        if not 0 <= self.max_retries <= 5:
            raise ValueError("max_retries must be between 0 and 5")
        if self.timeout_seconds <= 0:
            raise ValueError("timeout_seconds must be positive")


class CompletionStream:
    """Single-consumer stream of text chunks.

    Iterating yields fragments as they arrive; after a successful drain,
    final_text equals the concatenation of every yielded chunk. Transport
    failures raise GatewayError subclasses from the iterator.
    """

    def __init__(self, chunks: Iterator[str]):
        self._chunks = chunks
        self._parts: list[str] = []
        self._final: str | None = None
        self._started = False

    def __iter__(self) -> Iterator[str]:
        if self._started:
            raise RuntimeError("completion streams are single-consumer")
        self._started = True
        for chunk in self._chunks:
            self._parts.append(chunk)
            yield chunk
        self._final = "".join(self._parts)

    @property
    def final_text(self) -> str:
        if self._final is None:
            raise RuntimeError("stream has not finished")
        return self._final

    def drain(self) -> str:
        for _ in self:
            pass
        return self.final_text

    def close(self) -> None:
        close = getattr(self._chunks, "close", None)
        if close is not None:
            close()


def _request_chunks(
    bundle: PromptBundle,
    config: ProviderConfig,
    transport: httpx.BaseTransport | None,
) -> Iterator[str]:
    payload = {
        "model": config.model_id,
        "messages": [
            {"role": role.value, "content": content}
            for role, content in bundle.messages
        ],
        "temperature": bundle.decoding.temperature,
        "max_tokens": bundle.decoding.max_tokens,
        "stream": True,
    }
    headers = {}
    api_key = os.environ.get(config.api_key_env, "")
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    url = config.base_url.rstrip("/") + "/chat/completions"
    try:
        with httpx.Client(
            timeout=config.timeout_seconds, transport=transport
        ) as client:
            with client.stream("POST", url, json=payload, headers=headers) as resp:
                if resp.status_code != 200:
                    body = resp.read().decode("utf-8", errors="replace")
                    raise _status_error(resp.status_code, body)
                for line in resp.iter_lines():
                    if not line.startswith("data:"):
                        continue
                    data = line[len("data:"):].strip()
                    if data == "[DONE]":
                        return
                    try:
                        event = json.loads(data)
                    except json.JSONDecodeError:
                        continue
                    choices = event.get("choices") or []
                    if not choices:
                        continue
                    delta = (choices[0].get("delta") or {}).get("content")
                    if delta:
                        yield delta
    except httpx.TimeoutException as exc:
        raise Timeout(str(exc)) from exc
    except httpx.HTTPError as exc:
        raise NetworkError(str(exc)) from exc


def _status_error(status: int, body: str) -> GatewayError:
    if status in (401, 403):
        return AuthError(f"provider rejected credentials ({status})")
    if status == 429:
        return RateLimited("provider rate limit hit (429)")
    return ProviderError(status, body)


def _attempts(
    bundle: PromptBundle,
    config: ProviderConfig,
    transport: httpx.BaseTransport | None,
    sleep: Callable[[float], None],
) -> Iterator[str]:
    attempt = 0
    while True:
        emitted = False
        try:
            for chunk in _request_chunks(bundle, config, transport):
                emitted = True
                yield chunk
            return
        except GatewayError as err:
            if emitted or not err.retryable or attempt >= config.max_retries:
                raise
            sleep(BACKOFF_BASE_SECONDS * BACKOFF_FACTOR**attempt)
            attempt += 1


def complete_streaming(
    bundle: PromptBundle,
    config: ProviderConfig,
    *,
    transport: httpx.BaseTransport | None = None,
    sleep: Callable[[float], None] = _sleep,
) -> CompletionStream:
    """Open a streaming completion, retrying pre-emission transient failures."""
    return CompletionStream(_attempts(bundle, config, transport, sleep))


def complete_blocking(
    bundle: PromptBundle,
    config: ProviderConfig,
    *,
    transport: httpx.BaseTransport | None = None,
    sleep: Callable[[float], None] = _sleep,
) -> str:
    """Drain a streaming completion and return the final text."""
    return complete_streaming(bundle, config, transport=transport, sleep=sleep).drain()
