import json

import httpx
import pytest

from rogueplay.backends import (
    FINISH,
    BackendUnavailable,
    Cassette,
    CassetteBackend,
    CompletionOptions,
    HttpBackend,
    Malformed,
    ReplayMismatch,
    ScriptedBackend,
    at_step,
    prompt_matches,
    request_digest,
    respond,
)

MESSAGES = [{"role": "system", "content": "You are at (1,1)."}, {"role": "user", "content": "Do it."}]
OPTIONS = CompletionOptions()


def reply(text: str) -> dict:
    return {"choices": [{"message": {"role": "assistant", "content": text}}]}


def backend(handler, **kw) -> tuple[HttpBackend, list[float]]:
    sleeps: list[float] = []
    client = httpx.Client(transport=httpx.MockTransport(handler))
    return HttpBackend("http://stub/v1", key="k", client=client, sleep=sleeps.append, **kw), sleeps


def test_http_echo_and_request_shape():
    seen = []

    def handler(request: httpx.Request):
        body = json.loads(request.content)
        seen.append((request, body))
        return httpx.Response(200, json=reply(body["messages"][-1]["content"]))

    b, _ = backend(handler)
    assert b.complete(MESSAGES, OPTIONS) == "Do it."
    request, body = seen[0]
    assert request.url.path == "/v1/chat/completions"
    assert request.headers["authorization"] == "Bearer k"
    assert body["temperature"] == 0.0
    assert body["response_format"] == {"type": "json_object"}


def test_http_retries_rate_limits_with_backoff():
    answers = iter([httpx.Response(429), httpx.Response(429), httpx.Response(200, json=reply("ok"))])
    b, sleeps = backend(lambda request: next(answers))
    assert b.complete(MESSAGES, OPTIONS) == "ok"
    assert sleeps == [1.0, 2.0]


def test_http_honours_retry_after():
    answers = iter([httpx.Response(429, headers={"retry-after": "7"}), httpx.Response(200, json=reply("ok"))])
    b, sleeps = backend(lambda request: next(answers))
    assert b.complete(MESSAGES, OPTIONS) == "ok"
    assert sleeps == [7.0]


def test_http_gives_up_after_three_retries():
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(503)

    b, sleeps = backend(handler)
    with pytest.raises(BackendUnavailable):
        b.complete(MESSAGES, OPTIONS)
    assert len(calls) == 4
    assert sleeps == [1.0, 2.0, 4.0]


def test_http_invalid_body_is_malformed():
    b, _ = backend(lambda request: httpx.Response(200, text="<html>oops</html>"))
    with pytest.raises(Malformed):
        b.complete(MESSAGES, OPTIONS)


def test_http_client_error_is_not_retried():
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(401, text="bad key")

    b, _ = backend(handler)
    with pytest.raises(BackendUnavailable):
        b.complete(MESSAGES, OPTIONS)
    assert len(calls) == 1


def test_from_env_needs_url(monkeypatch):
    monkeypatch.delenv("ROGUEPLAY_LLM_URL", raising=False)
    with pytest.raises(BackendUnavailable):
        HttpBackend.from_env()
    monkeypatch.setenv("ROGUEPLAY_LLM_URL", "http://x")
    monkeypatch.setenv("ROGUEPLAY_LLM_MODEL", "m")
    b = HttpBackend.from_env()
    assert b.url == "http://x" and b.model == "m"


def test_digest_ignores_whitespace_runs():
    other = [{"role": "system", "content": "You are  at\n(1,1). "}, MESSAGES[1]]
    assert request_digest(MESSAGES) == request_digest(other)
    assert request_digest(MESSAGES) != request_digest(MESSAGES[:1])


def test_scripted_rules_and_default():
    b = ScriptedBackend([(at_step(0), respond("wait")), (prompt_matches(r"\(1,1\)"), respond("search"))])
    assert json.loads(b.complete(MESSAGES, OPTIONS))["skill"] == "wait"
    assert json.loads(b.complete(MESSAGES, OPTIONS))["skill"] == "search"
    assert b.complete([{"role": "user", "content": "x"}], OPTIONS) == FINISH
    assert b.calls == 3


def test_cassette_record_then_replay(tmp_path):
    inner = ScriptedBackend.sequence([respond("wait"), respond("search")])
    cassette = Cassette()
    rec = CassetteBackend(cassette, "record", inner)
    first = [rec.complete(MESSAGES, OPTIONS), rec.complete(MESSAGES[:1], OPTIONS)]
    path = tmp_path / "run.cassette.jsonl"
    cassette.save(path)

    replay = CassetteBackend(Cassette.load(path), "replay", inner)
    assert [replay.complete(MESSAGES, OPTIONS), replay.complete(MESSAGES[:1], OPTIONS)] == first
    assert replay.inner_calls == 0 and inner.calls == 2


def test_cassette_detects_prompt_drift():
    cassette = Cassette([{"request_digest": request_digest(MESSAGES), "response_text": "x"}])
    replay = CassetteBackend(cassette, "replay")
    with pytest.raises(ReplayMismatch) as err:
        replay.complete(MESSAGES[:1], OPTIONS)
    assert err.value.expected == request_digest(MESSAGES)
    replay.position = 0
    assert replay.complete(MESSAGES, OPTIONS) == "x"
    with pytest.raises(ReplayMismatch):
        replay.complete(MESSAGES, OPTIONS)
