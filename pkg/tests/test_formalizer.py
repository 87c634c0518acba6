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

from collections.abc import Sequence
from importlib import resources

import pytest
from langchain_core.messages import AIMessage, BaseMessage, HumanMessage, SystemMessage

from langchain_logic_prover.client import GenerationParams, ReplayChatClient
from langchain_logic_prover.corpus import ProblemRecord
from langchain_logic_prover.exceptions import ChatTransportError, FormalizationError
from langchain_logic_prover.formalizer import (
    PromptTemplate,
    extract_code,
    formalize_with_retry,
    question_formulas,
    render_prompt,
)
from langchain_logic_prover.parser import parse_formula

BROKEN = "```lean\nconstant obj : Type\naxiom A1 : p obj\n```\n-- The answer is True"


class RecordingClient:
    def __init__(self, completions: Sequence[str]) -> None:
        self.completions = list(completions)
        self.requests: list[tuple[list[BaseMessage], GenerationParams]] = []

    def complete(self, messages: Sequence[BaseMessage], params: GenerationParams) -> str:
        self.requests.append((list(messages), params))
        return self.completions[len(self.requests) - 1]


class FailingClient:
    def complete(self, messages: Sequence[BaseMessage], params: GenerationParams) -> str:
        raise ChatTransportError("endpoint down", status=502)


@pytest.fixture(scope="module")
def template() -> PromptTemplate:
    return PromptTemplate.load()


def _bundled_replay() -> ReplayChatClient:
    return ReplayChatClient(resources.files("langchain_logic_prover") / "data" / "replay")


def test_prompt_has_system_and_user_messages(template: PromptTemplate, golden: dict[str, ProblemRecord]) -> None:
    messages = render_prompt(template, golden["golden-01-hudson"])
    assert [type(message) for message in messages] == [SystemMessage, HumanMessage]
    user = messages[1].content
    assert isinstance(user, str)
    assert "Textual context: Hudson is a cat. All cats are animals. Cats often meow." in user
    assert user.rstrip().endswith(
        "Question: Based on the above information, is the following statement true, false, or unknown?"
        " Hudson often meows."
    )
    assert template.examples
    assert user.count("Example input:") == len(template.examples)


def test_prompt_numbers_sibling_questions(template: PromptTemplate, golden: dict[str, ProblemRecord]) -> None:
    user = render_prompt(template, golden["golden-04-turkey-q2"])[1].content
    assert isinstance(user, str)
    for number in (1, 2, 3):
        assert f"Question {number}: Based on the above information" in user
    assert "true, false, or uncertain?" in user


def test_prompt_slots_must_be_filled(template: PromptTemplate) -> None:
    record = ProblemRecord(id="p", context=[], question="Anne is round.", label="True")
    with pytest.raises(FormalizationError, match="context"):
        render_prompt(template, record)
    broken = PromptTemplate(system="s", user="{context} {missing}", question="{question}", example="", retry="")
    with pytest.raises(FormalizationError, match="missing"):
        render_prompt(broken, ProblemRecord(id="p", context=["Anne is round."], question="q", label="True"))


def test_extract_code_from_fenced_completion() -> None:
    extracted = extract_code(BROKEN)
    assert extracted.source == "constant obj : Type\naxiom A1 : p obj\n"
    assert extracted.answers == ("True",)
    assert extracted.answer == "True"


def test_extract_code_drops_prose_and_keeps_proofs() -> None:
    completion = (
        "Sure! Here is the code:\n"
        "constant obj : Type\n"
        "axiom A1 : ∀ x : obj,\n"
        "  p x\n"
        "That is all for the axioms.\n"
        "theorem t : p a :=\n"
        "begin\n"
        "  exact A1 a,\n"
        "end\n"
        "Hence the answer is: **false**."
    )
    extracted = extract_code(completion)
    assert extracted.source == (
        "constant obj : Type\naxiom A1 : ∀ x : obj,\n  p x\ntheorem t : p a :=\nbegin\n  exact A1 a,\nend\n"
    )
    assert extracted.answer == "False"


def test_extract_code_requires_declarations() -> None:
    with pytest.raises(FormalizationError):
        extract_code("I cannot formalize this.")


def test_bundled_replay_recovers_after_retry(template: PromptTemplate, golden: dict[str, ProblemRecord]) -> None:
    client = _bundled_replay()
    result = formalize_with_retry(client, template, golden["golden-01-hudson"])
    assert client.calls == ["golden-01-hudson.1", "golden-01-hudson.2"]
    assert result.ok
    assert result.attempts == 2
    assert len(result.completions) == 2
    assert result.answers == ("True",)
    assert result.theory is not None
    assert question_formulas(result.theory) == [parse_formula("often_meow Hudson")]


def test_first_attempt_success_needs_one_call(template: PromptTemplate, golden: dict[str, ProblemRecord]) -> None:
    client = _bundled_replay()
    result = formalize_with_retry(client, template, golden["golden-02-cow"])
    assert client.calls == ["golden-02-cow.1"]
    assert result.ok
    assert result.attempts == 1


def test_retry_sends_diagnostics_back(template: PromptTemplate, golden: dict[str, ProblemRecord]) -> None:
    client = RecordingClient([BROKEN, BROKEN])
    params = GenerationParams(temperature=0.3)
    result = formalize_with_retry(client, template, golden["golden-01-hudson"], params)
    assert not result.ok
    assert result.attempts == 2
    assert result.diagnostics
    assert all(diagnostic.startswith("A1: ") for diagnostic in result.diagnostics)
    first, second = client.requests
    assert len(first[0]) == 2
    assert first[1].attempt == 1 and second[1].attempt == 2
    assert second[1].temperature == 0.3
    retry_messages = second[0]
    assert len(retry_messages) == 4
    assert isinstance(retry_messages[2], AIMessage)
    assert retry_messages[2].content == BROKEN
    assert isinstance(retry_messages[3], HumanMessage)
    content = retry_messages[3].content
    assert isinstance(content, str)
    assert "Lean reported errors" in content
    assert result.diagnostics[0] in content
    assert "axiom A1 : p obj" in content


def test_unparseable_completion_reports_position(template: PromptTemplate, golden: dict[str, ProblemRecord]) -> None:
    client = RecordingClient(["constant obj : Type\naxiom A1 : ∀ ,\n"] * 2)
    result = formalize_with_retry(client, template, golden["golden-01-hudson"])
    assert not result.ok
    assert "expected one of" in result.diagnostics[0]


def test_transport_errors_propagate(template: PromptTemplate, golden: dict[str, ProblemRecord]) -> None:
    with pytest.raises(ChatTransportError):
        formalize_with_retry(FailingClient(), template, golden["golden-01-hudson"])


def test_question_formulas_fold_duals(golden: dict[str, ProblemRecord]) -> None:
    theory = golden["golden-03-turkey-q1"].parsed_theory()
    assert theory is not None
    assert question_formulas(theory) == [
        parse_formula("is_ocellated_wild_turkey Tom"),
        parse_formula("is_eastern_wild_turkey Tom"),
        parse_formula("is_wild_turkey Joey"),
    ]
