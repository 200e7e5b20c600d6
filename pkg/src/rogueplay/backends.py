"""Completion backends: a live HTTP client, a scripted stand-in and a record/replay cassette."""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

import httpx

ENV_URL = "ROGUEPLAY_LLM_URL"
ENV_KEY = "ROGUEPLAY_LLM_KEY"
ENV_MODEL = "ROGUEPLAY_LLM_MODEL"
DEFAULT_MODEL = "gpt-4-1106-preview"

FINISH = json.dumps({"thoughts": "Nothing left to do.", "skill": "finish_task", "params": {}})


@dataclass(frozen=True)
class CompletionOptions:
    temperature: float = 0.0
    structured_output: bool = True
    max_tokens: int = 512


class BackendError(Exception):
    pass


class Unavailable(BackendError):
    def __init__(self, status: int | None, detail: str = ""):
        super().__init__(f"endpoint unavailable (status {status}){': ' + detail if detail else ''}")
        self.status = status


class RateLimited(BackendError):
    def __init__(self, retry_after: float | None):
        super().__init__(f"rate limited (retry after {retry_after})")
        self.retry_after = retry_after


class Malformed(BackendError):
    def __init__(self, body: str):
        super().__init__(f"malformed response body: {body[:200]!r}")
        self.body = body


class BackendUnavailable(BackendError):
    """Raised to the agent loop once retries are exhausted."""


class ReplayMismatch(BackendError):
    def __init__(self, expected: str | None, got: str):
        super().__init__(f"cassette mismatch: expected request {expected}, got {got}")
        self.expected = expected
        self.got = got


class Backend(Protocol):
    name: str

    def complete(self, messages: list[dict], options: CompletionOptions) -> str: ...


def request_digest(messages: list[dict]) -> str:
    """Stable hash of the role/text sequence; runs of whitespace count as one space."""
    h = hashlib.sha256()
    for m in messages:
        text = re.sub(r"\s+", " ", m["content"]).strip()
        h.update(m["role"].encode())
        h.update(b"\x00")
        h.update(text.encode())
        h.update(b"\x01")
    return h.hexdigest()[:16]


# ---------------------------------------------------------------- http


@dataclass
class HttpBackend:
    """OpenAI-compatible chat completions endpoint."""

    url: str
    key: str | None = None
    model: str = DEFAULT_MODEL
    retries: int = 3
    backoff: float = 1.0
    timeout: float = 60.0
    client: httpx.Client | None = None
    sleep: Callable[[float], None] = time.sleep
    name: str = "http"

    @classmethod
    def from_env(cls, **kw) -> "HttpBackend":
        url = os.environ.get(ENV_URL)
        if not url:
            raise BackendUnavailable(f"set {ENV_URL} to an OpenAI-compatible base URL")
        return cls(url=url, key=os.environ.get(ENV_KEY), model=os.environ.get(ENV_MODEL, DEFAULT_MODEL), **kw)

    def _endpoint(self) -> str:
        url = self.url.rstrip("/")
        return url if url.endswith("/chat/completions") else url + "/chat/completions"

    def _once(self, messages: list[dict], options: CompletionOptions) -> str:
        body = {
            "model": self.model,
            "messages": [{"role": m["role"], "content": m["content"]} for m in messages],
            "temperature": options.temperature,
            "max_tokens": options.max_tokens,
        }
        if options.structured_output:
            body["response_format"] = {"type": "json_object"}
        headers = {"Authorization": f"Bearer {self.key}"} if self.key else {}
        client = self.client or httpx.Client(timeout=self.timeout)
        try:
            resp = client.post(self._endpoint(), json=body, headers=headers)
        except httpx.HTTPError as exc:
            raise Unavailable(None, str(exc)) from exc
        finally:
            if self.client is None:
                client.close()
        if resp.status_code == 429:
            after = resp.headers.get("retry-after")
            raise RateLimited(float(after) if after and after.replace(".", "", 1).isdigit() else None)
        if resp.status_code >= 400:
            raise Unavailable(resp.status_code, resp.text[:200])
        try:
            content = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError):
            raise Malformed(resp.text) from None
        if not isinstance(content, str):
            raise Malformed(resp.text)
        return content

    def complete(self, messages: list[dict], options: CompletionOptions) -> str:
        last: BackendError | None = None
        for attempt in range(self.retries + 1):
            try:
                return self._once(messages, options)
            except Malformed:
                raise
            except Unavailable as exc:
                if exc.status is not None and exc.status < 500:
                    raise BackendUnavailable(str(exc)) from exc
                last = exc
            except RateLimited as exc:
                last = exc
            if attempt < self.retries:
                wait = self.backoff * 2**attempt
                if isinstance(last, RateLimited) and last.retry_after is not None:
                    wait = max(wait, last.retry_after)
                self.sleep(wait)
        raise BackendUnavailable(f"giving up after {self.retries} retries: {last}")


# ---------------------------------------------------------------- scripted


Matcher = Callable[[str, int], bool]


def always() -> Matcher:
    return lambda prompt, index: True


def at_step(i: int) -> Matcher:
    return lambda prompt, index: index == i


def prompt_matches(pattern: str) -> Matcher:
    rx = re.compile(pattern)
    return lambda prompt, index: rx.search(prompt) is not None


def respond(skill: str, thoughts: str = "", **params) -> str:
    return json.dumps({"thoughts": thoughts, "skill": skill, "params": params})


@dataclass
class ScriptedBackend:
    """Deterministic backend: first matching rule wins, else the default response.

    A response may be a string or a callable ``(prompt_text, call_index) -> str``.
    """

    rules: list[tuple[Matcher, str | Callable[[str, int], str]]] = field(default_factory=list)
    default: str = FINISH
    name: str = "scripted"
    calls: int = 0

    @classmethod
    def sequence(cls, responses: list[str], default: str = FINISH) -> "ScriptedBackend":
        return cls([(at_step(i), r) for i, r in enumerate(responses)], default)

    def complete(self, messages: list[dict], options: CompletionOptions) -> str:
        prompt = "\n".join(m["content"] for m in messages)
        index = self.calls
        self.calls += 1
        for matcher, response in self.rules:
            if matcher(prompt, index):
                return response(prompt, index) if callable(response) else response
        return self.default


# ---------------------------------------------------------------- cassette


@dataclass
class Cassette:
    entries: list[dict] = field(default_factory=list)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for e in self.entries:
                fh.write(json.dumps(e, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Cassette":
        with open(path, encoding="utf-8") as fh:
            return cls([json.loads(line) for line in fh if line.strip()])


@dataclass
class CassetteBackend:
    """Record wraps ``inner`` and logs each exchange; replay serves them back in order."""

    cassette: Cassette
    mode: str = "replay"  # "record" | "replay"
    inner: Backend | None = None
    position: int = 0
    inner_calls: int = 0
    name: str = "cassette"
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.mode not in ("record", "replay"):
            raise ValueError(f"unknown cassette mode {self.mode!r}")
        if self.mode == "record" and self.inner is None:
            raise ValueError("record mode needs an inner backend")

    def complete(self, messages: list[dict], options: CompletionOptions) -> str:
        digest = request_digest(messages)
        with self._lock:
            if self.mode == "record":
                self.inner_calls += 1
                text = self.inner.complete(messages, options)
                self.cassette.entries.append({"request_digest": digest, "response_text": text})
                return text
            if self.position >= len(self.cassette.entries):
                raise ReplayMismatch(None, digest)
            entry = self.cassette.entries[self.position]
            if entry["request_digest"] != digest:
                raise ReplayMismatch(entry["request_digest"], digest)
            self.position += 1
            return entry["response_text"]
