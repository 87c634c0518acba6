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

from langchain_logic_prover.config import ProverSettings
from langchain_logic_prover.toolkit import ProverToolkit, create_toolkit
from langchain_logic_prover.tools import LogicSolveTool, PremiseRetrieveTool


def test_create_toolkit_builds_tools() -> None:
    toolkit = create_toolkit()
    assert isinstance(toolkit.solve, LogicSolveTool)
    assert isinstance(toolkit.retrieve, PremiseRetrieveTool)
    assert toolkit.tools[0] is toolkit.solve
    assert toolkit.tools[1] is toolkit.retrieve
    assert [tool.name for tool in toolkit.tools] == ["logic_solve", "premise_retrieve"]


def test_toolkit_reuses_settings() -> None:
    settings = ProverSettings(timeout_secs=5.0, retrieval_size=2)
    toolkit = create_toolkit(settings=settings)
    assert isinstance(toolkit, ProverToolkit)
    assert toolkit.settings is settings
    assert toolkit.solve.settings is settings
    assert toolkit.retrieve.settings is settings


def test_toolkit_reads_env() -> None:
    toolkit = create_toolkit(env={"LOGIC_PROVER_RETRIEVAL_SIZE": "3"})
    assert toolkit.settings.retrieval_size == 3
    assert toolkit.solve.settings is toolkit.settings


def test_toolkit_tools_answer_questions(hudson_source: str) -> None:
    toolkit = create_toolkit(settings=ProverSettings(max_expansions=200))
    solved = toolkit.solve.invoke({"theory": hudson_source, "question": "is_animal Hudson"})
    assert solved["verdict"] == "True"
    ranked = toolkit.retrieve.invoke({"theory": hudson_source, "goal": "is_animal Hudson", "k": 1})
    assert len(ranked) == 1
    assert ranked[0]["name"] in {"A1", "A2", "A3"}
