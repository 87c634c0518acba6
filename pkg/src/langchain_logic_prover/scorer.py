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

"""Newline-delimited JSON protocol spoken with an external scorer process.

Requests and replies are single JSON objects, one per line::

    {"kind": "generate", "state": "...", "goals": "...", "premises": [...], "k": 64}
    {"candidates": [{"tactic": "apply A3 Hudson", "logprob": -0.3}, ...]}

    {"kind": "embed", "text": "..."}
    {"embedding": [0.1, ...]}
"""

from __future__ import annotations

import json
import logging
import math
import queue
import shlex
import subprocess
import threading
from collections.abc import Mapping, Sequence
from typing import Any, Optional, Union

import numpy as np

from .exceptions import GeneratorError, ProverConfigurationError, ScorerProtocolError

__all__ = ["SUBPROCESS_PREFIX", "ScorerProcess", "ExternalEmbedder", "parse_scorer_spec"]

logger = logging.getLogger(__name__)

SUBPROCESS_PREFIX = "subprocess:"

_EOF = object()


def parse_scorer_spec(spec: str) -> Optional[list[str]]:
    """Return the command of a ``subprocess:<cmd>`` spec, or None for ``builtin``."""

    value = spec.strip()
    if value == "builtin":
        return None
    if not value.startswith(SUBPROCESS_PREFIX):
        raise ProverConfigurationError(
            f"Unknown scorer {spec!r}; expected 'builtin' or '{SUBPROCESS_PREFIX}<command>'."
        )
    command = shlex.split(value[len(SUBPROCESS_PREFIX) :])
    if not command:
        raise ProverConfigurationError("The subprocess scorer needs a command.")
    return command


class ScorerProcess:
    """A long-lived child process answering one JSON request per line."""

    def __init__(
        self,
        command: Union[str, Sequence[str]],
        *,
        timeout: float = 30.0,
        env: Optional[Mapping[str, str]] = None,
    ) -> None:
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout
        self._env = dict(env) if env is not None else None
        self._process: Optional[subprocess.Popen[str]] = None
        self._replies: queue.Queue[Any] = queue.Queue()
        self._lock = threading.Lock()
        self._broken = False

    def __enter__(self) -> ScorerProcess:
        self.start()
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def start(self) -> None:
        if self._process is not None:
            return
        try:
            self._process = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
                env=self._env,
            )
        except OSError as exc:
            raise GeneratorError(f"Could not start scorer {self.command!r}: {exc}") from exc
        reader = threading.Thread(target=self._read_replies, name="scorer-reader", daemon=True)
        reader.start()
        logger.debug("Started scorer process", extra={"command": self.command})

    def _read_replies(self) -> None:
        process = self._process
        assert process is not None and process.stdout is not None
        for line in process.stdout:
            self._replies.put(line)
        self._replies.put(_EOF)

    def close(self) -> None:
        process, self._process = self._process, None
        if process is None:
            return
        try:
            if process.stdin is not None:
                process.stdin.close()
            process.wait(timeout=5)
        except (OSError, subprocess.TimeoutExpired):
            process.kill()
            process.wait()
        logger.debug("Stopped scorer process", extra={"returncode": process.returncode})

    def request(self, payload: Mapping[str, Any]) -> dict[str, Any]:
        """Send one request and wait (up to ``timeout`` seconds) for its reply."""

        with self._lock:
            if self._broken:
                raise GeneratorError("The scorer process is no longer usable.")
            self.start()
            process = self._process
            assert process is not None and process.stdin is not None
            try:
                process.stdin.write(json.dumps(payload, ensure_ascii=False) + "\n")
                process.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                self._broken = True
                raise GeneratorError("The scorer process closed its input.") from exc
            try:
                line = self._replies.get(timeout=self.timeout)
            except queue.Empty as exc:
                self._broken = True
                raise GeneratorError(f"The scorer did not reply within {self.timeout} seconds.") from exc
            if line is _EOF:
                self._broken = True
                raise GeneratorError("The scorer process exited.")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScorerProtocolError(f"Malformed scorer reply: {line.strip()[:200]!r}") from exc
        if not isinstance(reply, dict):
            raise ScorerProtocolError("Scorer replies must be JSON objects.")
        return reply

    def generate(
        self, state: str, goals: str, premises: Sequence[str], k: int
    ) -> list[dict[str, Any]]:
        reply = self.request(
            {"kind": "generate", "state": state, "goals": goals, "premises": list(premises), "k": k}
        )
        candidates = reply.get("candidates")
        if not isinstance(candidates, list):
            raise ScorerProtocolError("A generate reply needs a 'candidates' list.")
        return [item for item in candidates if isinstance(item, dict)]

    def embed(self, text: str) -> np.ndarray:
        reply = self.request({"kind": "embed", "text": text})
        vector = reply.get("embedding")
        if not isinstance(vector, list) or not vector:
            raise ScorerProtocolError("An embed reply needs a non-empty 'embedding' list.")
        try:
            array = np.asarray(vector, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ScorerProtocolError("Embedding vectors must be numeric.") from exc
        if array.ndim != 1 or not np.all(np.isfinite(array)):
            raise ScorerProtocolError("Embedding vectors must be flat and finite.")
        return array


class ExternalEmbedder:
    """Embedder backed by a :class:`ScorerProcess`; vectors are L2-normalised."""

    def __init__(self, process: ScorerProcess) -> None:
        self.process = process

    def embed(self, text: str) -> np.ndarray:
        vector = self.process.embed(text)
        norm = float(np.linalg.norm(vector))
        return vector / norm if norm > 0.0 and math.isfinite(norm) else vector
