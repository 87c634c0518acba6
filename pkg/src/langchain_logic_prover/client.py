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

"""Chat-completion clients used by the formalizer."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path
from typing import TYPE_CHECKING, Any, Optional, Protocol, Union

import httpx
from langchain_core.messages import BaseMessage
from pydantic import BaseModel, ConfigDict, Field

from .config import ProverSettings, redact_secret
from .exceptions import ChatTransportError

if TYPE_CHECKING:  # pragma: no cover - import for static analysis only
    from importlib.resources.abc import Traversable

__all__ = [
    "GenerationParams",
    "ChatClient",
    "HttpChatClient",
    "ReplayChatClient",
    "LangChainChatClient",
    "create_chat_client",
]

logger = logging.getLogger(__name__)

_ROLES = {"system": "system", "human": "user", "ai": "assistant"}


class GenerationParams(BaseModel):
    """Sampling parameters plus the key identifying one formalization attempt."""

    model_config = ConfigDict(frozen=True)

    temperature: float = Field(default=0.0, ge=0.0)
    max_tokens: int = Field(default=2048, ge=1)
    problem_id: Optional[str] = None
    attempt: int = Field(default=1, ge=1)

    @property
    def tag(self) -> str:
        return f"{self.problem_id or 'problem'}.{self.attempt}"


class ChatClient(Protocol):
    def complete(self, messages: Sequence[BaseMessage], params: GenerationParams) -> str: ...


def _message_payload(message: BaseMessage) -> dict[str, str]:
    role = _ROLES.get(message.type)
    if role is None:
        raise ChatTransportError(f"Unsupported message type {message.type!r}")
    content = message.content if isinstance(message.content, str) else str(message.content)
    return {"role": role, "content": content}


class HttpChatClient:
    """Client for endpoints speaking the chat-completions wire shape."""

    def __init__(
        self,
        url: str,
        model: str,
        *,
        api_key: Optional[str] = None,
        timeout: float = 60.0,
        client: Optional[httpx.Client] = None,
    ) -> None:
        self.url = url
        self.model = model
        self._api_key = api_key
        self._client = client or httpx.Client(timeout=timeout)

    def close(self) -> None:
        self._client.close()

    def complete(self, messages: Sequence[BaseMessage], params: GenerationParams) -> str:
        payload = {
            "model": self.model,
            "messages": [_message_payload(message) for message in messages],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        logger.debug(
            "Requesting chat completion",
            extra={"tag": params.tag, "model": self.model, "api_key": redact_secret(self._api_key)},
        )
        try:
            response = self._client.post(self.url, json=payload, headers=headers)
        except httpx.HTTPError as exc:
            raise ChatTransportError(f"Chat request failed: {exc}") from exc
        if not response.is_success:
            raise ChatTransportError(
                f"Chat endpoint answered HTTP {response.status_code}",
                status=response.status_code,
            )
        try:
            data: Any = response.json()
            content = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ChatTransportError("Malformed chat completion reply", status=response.status_code) from exc
        if not isinstance(content, str):
            raise ChatTransportError("Chat completion content is not text", status=response.status_code)
        return content


class ReplayChatClient:
    """Serves canned completions from ``<id>.<attempt>.txt`` (or ``<id>.txt``) files."""

    def __init__(self, directory: Union[str, Path, Traversable]) -> None:
        self.directory = Path(directory) if isinstance(directory, str) else directory
        self.calls: list[str] = []

    def complete(self, messages: Sequence[BaseMessage], params: GenerationParams) -> str:
        if params.problem_id is None:
            raise ChatTransportError("Replay requires a problem identifier")
        self.calls.append(params.tag)
        for name in (f"{params.tag}.txt", f"{params.problem_id}.txt"):
            fixture = self.directory.joinpath(name)
            if fixture.is_file():
                logger.debug("Replaying completion", extra={"tag": params.tag, "fixture": name})
                return fixture.read_text(encoding="utf-8")
        raise ChatTransportError(f"No replay fixture for {params.tag}")


class LangChainChatClient:
    """Adapter for any langchain-core chat model."""

    def __init__(self, model: Any) -> None:
        self.model = model

    def complete(self, messages: Sequence[BaseMessage], params: GenerationParams) -> str:
        try:
            reply = self.model.invoke(
                list(messages),
                temperature=params.temperature,
                max_tokens=params.max_tokens,
            )
        except Exception as exc:  # pragma: no cover - depends on the wrapped model
            raise ChatTransportError(f"Chat model failed: {exc}") from exc
        content = getattr(reply, "content", reply)
        if not isinstance(content, str):
            raise ChatTransportError("Chat model returned non-text content")
        return content


def create_chat_client(
    settings: Optional[ProverSettings] = None,
    *,
    replay_dir: Union[str, Path, Traversable, None] = None,
    client: Optional[httpx.Client] = None,
) -> ChatClient:
    """Replay client when a fixture directory is given, HTTP client otherwise."""

    if replay_dir is not None:
        return ReplayChatClient(replay_dir)
    resolved = settings or ProverSettings.from_env()
    url, model = resolved.require_endpoint()
    return HttpChatClient(
        url,
        model,
        api_key=resolved.llm_api_key,
        timeout=resolved.http_timeout,
        client=client,
    )
