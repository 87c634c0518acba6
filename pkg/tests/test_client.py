# MIT License
#
# Copyright (c) 2024 Dinesh
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

import httpx
import pytest
from langchain_core.messages import AIMessage, HumanMessage, SystemMessage

from langchain_logic_prover.client import (
    GenerationParams,
    HttpChatClient,
    LangChainChatClient,
    ReplayChatClient,
    create_chat_client,
)
from langchain_logic_prover.config import ProverSettings
from langchain_logic_prover.exceptions import ChatTransportError, ProverConfigurationError

MESSAGES = [SystemMessage(content="system"), HumanMessage(content="question"), AIMessage(content="draft")]


def _client(handler: Any, **kwargs: Any) -> HttpChatClient:
    transport = httpx.MockTransport(handler)
    return HttpChatClient(
        "https://llm.example/v1/chat/completions",
        "model-x",
        client=httpx.Client(transport=transport),
        **kwargs,
    )


def test_http_client_sends_chat_payload() -> None:
    seen: dict[str, Any] = {}

    def handler(request: httpx.Request) -> httpx.Response:
        seen["body"] = json.loads(request.content)
        seen["auth"] = request.headers.get("Authorization")
        return httpx.Response(200, json={"choices": [{"message": {"content": "theory"}}]})

    client = _client(handler, api_key="secret-key")
    reply = client.complete(MESSAGES, GenerationParams(temperature=0.5, max_tokens=32))
    assert reply == "theory"
    assert seen["auth"] == "Bearer secret-key"
    assert seen["body"]["model"] == "model-x"
    assert seen["body"]["temperature"] == 0.5
    assert seen["body"]["max_tokens"] == 32
    assert [message["role"] for message in seen["body"]["messages"]] == ["system", "user", "assistant"]


def test_http_client_omits_authorization_without_key() -> None:
    def handler(request: httpx.Request) -> httpx.Response:
        assert "Authorization" not in request.headers
        return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

    assert _client(handler).complete(MESSAGES, GenerationParams()) == "ok"


def test_http_error_status_is_reported() -> None:
    client = _client(lambda request: httpx.Response(503, text="busy"))
    with pytest.raises(ChatTransportError) as info:
        client.complete(MESSAGES, GenerationParams())
    assert info.value.status == 503


@pytest.mark.parametrize(
    "body",
    [b"not json", b"{}", b'{"choices": []}', b'{"choices": [{"message": {"content": 3}}]}'],
)
def test_malformed_reply_is_reported(body: bytes) -> None:
    client = _client(lambda request: httpx.Response(200, content=body))
    with pytest.raises(ChatTransportError):
        client.complete(MESSAGES, GenerationParams())


def test_network_failure_is_reported() -> None:
    def handler(request: httpx.Request) -> httpx.Response:
        raise httpx.ConnectError("refused", request=request)

    with pytest.raises(ChatTransportError, match="refused"):
        _client(handler).complete(MESSAGES, GenerationParams())


def test_generation_tag() -> None:
    assert GenerationParams(problem_id="p-1", attempt=2).tag == "p-1.2"
    assert GenerationParams().tag == "problem.1"


def test_replay_prefers_attempt_specific_fixture(tmp_path: Path) -> None:
    (tmp_path / "p-1.2.txt").write_text("second", encoding="utf-8")
    (tmp_path / "p-1.txt").write_text("shared", encoding="utf-8")
    client = ReplayChatClient(str(tmp_path))
    assert client.complete(MESSAGES, GenerationParams(problem_id="p-1", attempt=1)) == "shared"
    assert client.complete(MESSAGES, GenerationParams(problem_id="p-1", attempt=2)) == "second"
    assert client.calls == ["p-1.1", "p-1.2"]


def test_replay_errors(tmp_path: Path) -> None:
    client = ReplayChatClient(tmp_path)
    with pytest.raises(ChatTransportError, match="No replay fixture"):
        client.complete(MESSAGES, GenerationParams(problem_id="missing"))
    with pytest.raises(ChatTransportError, match="problem identifier"):
        client.complete(MESSAGES, GenerationParams())


def test_bundled_replay_fixtures_are_readable() -> None:
    client = ReplayChatClient(resources.files("langchain_logic_prover") / "data" / "replay")
    completion = client.complete(MESSAGES, GenerationParams(problem_id="golden-02-cow"))
    assert "theorem not_cow_chases_cow" in completion


def test_langchain_adapter_passes_params() -> None:
    class DummyModel:
        def __init__(self) -> None:
            self.calls: list[dict[str, Any]] = []

        def invoke(self, messages: list[Any], **kwargs: Any) -> AIMessage:
            self.calls.append({"messages": messages, **kwargs})
            return AIMessage(content="axiom A1 : p a")

    model = DummyModel()
    reply = LangChainChatClient(model).complete(MESSAGES, GenerationParams(temperature=0.2, max_tokens=5))
    assert reply == "axiom A1 : p a"
    assert model.calls[0]["temperature"] == 0.2
    assert model.calls[0]["max_tokens"] == 5
    assert len(model.calls[0]["messages"]) == 3


def test_create_chat_client(tmp_path: Path) -> None:
    assert isinstance(create_chat_client(replay_dir=tmp_path), ReplayChatClient)
    settings = ProverSettings(llm_api_url="https://llm.example", llm_model="model-x", llm_api_key="k")
    client = create_chat_client(settings)
    assert isinstance(client, HttpChatClient)
    assert client.model == "model-x"
    client.close()
    with pytest.raises(ProverConfigurationError):
        create_chat_client(ProverSettings())
