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

import sys
import textwrap
from collections.abc import Iterator
from pathlib import Path

import numpy as np
import pytest

from langchain_logic_prover.exceptions import (
    GeneratorError,
    ProverConfigurationError,
    ScorerProtocolError,
)
from langchain_logic_prover.scorer import ExternalEmbedder, ScorerProcess, parse_scorer_spec

STUB = textwrap.dedent(
    """
    import json
    import sys
    import time

    for line in sys.stdin:
        request = json.loads(line)
        kind = request["kind"]
        if kind == "generate":
            reply = {"candidates": [{"tactic": "exact A1", "logprob": -0.5}, "junk"], "echo": request}
        elif kind == "embed":
            reply = {"embedding": [3.0, 4.0]}
        elif kind == "garbage":
            print("not json", flush=True)
            continue
        elif kind == "list":
            reply = [1, 2]
        elif kind == "sleep":
            time.sleep(5)
            continue
        else:
            sys.exit(0)
        print(json.dumps(reply), flush=True)
    """
)


@pytest.fixture
def stub_command(tmp_path: Path) -> list[str]:
    script = tmp_path / "stub_scorer.py"
    script.write_text(STUB, encoding="utf-8")
    return [sys.executable, str(script)]


@pytest.fixture
def scorer(stub_command: list[str]) -> Iterator[ScorerProcess]:
    with ScorerProcess(stub_command, timeout=10.0) as process:
        yield process


def test_parse_scorer_spec() -> None:
    assert parse_scorer_spec("builtin") is None
    assert parse_scorer_spec(" builtin ") is None
    assert parse_scorer_spec("subprocess:python -m my_scorer --k 'a b'") == [
        "python",
        "-m",
        "my_scorer",
        "--k",
        "a b",
    ]


@pytest.mark.parametrize("spec", ["", "openai", "subprocess:", "subprocess:   "])
def test_parse_scorer_spec_rejects_unknown_values(spec: str) -> None:
    with pytest.raises(ProverConfigurationError):
        parse_scorer_spec(spec)


def test_generate_round_trip(scorer: ScorerProcess) -> None:
    candidates = scorer.generate("state", "⊢ p a", ["A1 : p a"], 8)
    assert candidates == [{"tactic": "exact A1", "logprob": -0.5}]
    reply = scorer.request({"kind": "generate", "state": "s", "goals": "g", "premises": [], "k": 1})
    assert reply["echo"]["k"] == 1


def test_embed_returns_vectors(scorer: ScorerProcess) -> None:
    assert scorer.embed("p a").tolist() == [3.0, 4.0]
    normalised = ExternalEmbedder(scorer).embed("p a")
    assert np.allclose(normalised, [0.6, 0.8])


@pytest.mark.parametrize("kind", ["garbage", "list"])
def test_malformed_reply_is_a_protocol_error(scorer: ScorerProcess, kind: str) -> None:
    with pytest.raises(ScorerProtocolError):
        scorer.request({"kind": kind})
    assert scorer.embed("still usable").shape == (2,)


def test_exited_process_is_a_generator_error(scorer: ScorerProcess) -> None:
    with pytest.raises(GeneratorError) as info:
        scorer.request({"kind": "quit"})
    assert not isinstance(info.value, ScorerProtocolError)
    with pytest.raises(GeneratorError):
        scorer.embed("p a")


def test_timeout_is_a_generator_error(stub_command: list[str]) -> None:
    with ScorerProcess(stub_command, timeout=0.2) as process:
        with pytest.raises(GeneratorError, match="did not reply"):
            process.request({"kind": "sleep"})


def test_missing_executable_is_a_generator_error(tmp_path: Path) -> None:
    process = ScorerProcess([str(tmp_path / "does-not-exist")])
    with pytest.raises(GeneratorError, match="Could not start"):
        process.start()
