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

"""Formalization of natural-language problems through a chat model."""

from __future__ import annotations

import json
import logging
import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Optional, Union

from langchain_core.messages import AIMessage, BaseMessage, HumanMessage, SystemMessage

from .client import ChatClient, GenerationParams
from .corpus import ProblemRecord
from .exceptions import FormalizationError, TheoryCheckError, TheoryParseError
from .logic import DeclarationKind, Formula, Not, Theory
from .parser import parse_theory

if TYPE_CHECKING:  # pragma: no cover - import for static analysis only
    from importlib.resources.abc import Traversable

__all__ = [
    "FewShotExample",
    "PromptTemplate",
    "ExtractedCode",
    "FormalizationResult",
    "render_prompt",
    "extract_code",
    "formalize_with_retry",
    "question_formulas",
]

logger = logging.getLogger(__name__)

_FENCE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)
_ANSWER = re.compile(r"\banswer\s+is\s*:?\s*\**\s*([A-Za-z]+)", re.IGNORECASE)
_DECLARATION = re.compile(r"^\s*(universes?|constants?|axiom|theorem|lemma)\b")
_BEGIN = re.compile(r"^\s*begin\b")
_END = re.compile(r"^\s*end\s*,?\s*$")
_CONTINUATION_START = "∀∃¬(→↔∧∨:"


@dataclass(frozen=True)
class FewShotExample:
    context: tuple[str, ...]
    questions: tuple[str, ...]
    options: tuple[str, ...]
    completion: str


@dataclass(frozen=True)
class PromptTemplate:
    """Prompt texts with ``{named}`` slots, loaded from a directory of plain-text files."""

    system: str
    user: str
    question: str
    example: str
    retry: str
    examples: tuple[FewShotExample, ...] = ()

    @classmethod
    def load(cls, directory: Union[str, Path, Traversable, None] = None) -> PromptTemplate:
        base = (
            resources.files("langchain_logic_prover") / "data" / "prompts"
            if directory is None
            else (Path(directory) if isinstance(directory, str) else directory)
        )

        def read(name: str) -> str:
            return base.joinpath(name).read_text(encoding="utf-8")

        examples = []
        shots = base.joinpath("fewshot.jsonl")
        if shots.is_file():
            for line in shots.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                data = json.loads(line)
                examples.append(
                    FewShotExample(
                        context=tuple(data["context"]),
                        questions=tuple(data["questions"]),
                        options=tuple(data.get("options", ("True", "False", "Unknown"))),
                        completion=data["completion"],
                    )
                )
        return cls(
            system=read("system.txt").strip(),
            user=read("user.txt"),
            question=read("question.txt").strip(),
            example=read("example.txt"),
            retry=read("retry.txt"),
            examples=tuple(examples),
        )

    def render_questions(self, questions: Sequence[str], options: Sequence[str]) -> str:
        choices = [option.lower() for option in options]
        phrase = choices[0] if len(choices) == 1 else ", ".join(choices[:-1]) + ", or " + choices[-1]
        lines = []
        for number, question in enumerate(questions, start=1):
            label = "Question" if len(questions) == 1 else f"Question {number}"
            lines.append(_fill(self.question, label=label, options=phrase, question=question.strip()))
        return "\n".join(lines)

    def render_retry(self, source: str, diagnostics: Sequence[str]) -> str:
        return _fill(self.retry, diagnostics="\n".join(diagnostics), source=source.strip())


def _fill(template: str, *, optional: Sequence[str] = (), **slots: str) -> str:
    for name, value in slots.items():
        if name not in optional and not value.strip():
            raise FormalizationError(f"Prompt slot {name!r} is empty")
    try:
        return template.format(**slots)
    except KeyError as exc:
        raise FormalizationError(f"Prompt slot {exc.args[0]!r} has no value") from exc


def render_prompt(template: PromptTemplate, problem: ProblemRecord) -> list[BaseMessage]:
    """System and user messages asking for a formalization of ``problem``."""

    shots = "".join(
        _fill(
            template.example,
            context=" ".join(example.context),
            questions=template.render_questions(example.questions, example.options),
            completion=example.completion.strip(),
        )
        for example in template.examples
    )
    user = _fill(
        template.user,
        optional=("examples",),
        examples=shots,
        context=" ".join(sentence.strip() for sentence in problem.context),
        questions=template.render_questions(problem.all_questions, problem.options),
    )
    return [SystemMessage(content=template.system), HumanMessage(content=user)]


@dataclass(frozen=True)
class ExtractedCode:
    source: str
    answers: tuple[str, ...] = ()

    @property
    def answer(self) -> Optional[str]:
        return self.answers[-1] if self.answers else None


def extract_code(completion: str) -> ExtractedCode:
    """Keep declaration and proof lines of ``completion``; answer markers become metadata."""

    blocks = _FENCE.findall(completion)
    text = "\n".join(blocks) if blocks else completion
    kept: list[str] = []
    in_proof = False
    continuing = False
    found = False
    for line in text.splitlines():
        stripped = line.strip()
        if in_proof:
            kept.append(line.rstrip())
            in_proof = not _END.match(line)
            continue
        if not stripped:
            kept.append("")
            continuing = False
        elif stripped.startswith("--"):
            kept.append(line.rstrip())
        elif _DECLARATION.match(line):
            kept.append(line.rstrip())
            found = True
            continuing = True
        elif _BEGIN.match(line):
            kept.append(line.rstrip())
            in_proof = not re.search(r"\bend\s*,?\s*$", stripped)
        elif continuing and (line[0].isspace() or stripped[0] in _CONTINUATION_START):
            kept.append(line.rstrip())
        else:
            continuing = False
    if not found:
        raise FormalizationError("No Lean declarations found in the completion")
    source = re.sub(r"\n{3,}", "\n\n", "\n".join(kept)).strip() + "\n"
    answers = tuple(match.group(1).capitalize() for match in _ANSWER.finditer(completion))
    return ExtractedCode(source, answers)


@dataclass
class FormalizationResult:
    source: Optional[str] = None
    theory: Optional[Theory] = None
    diagnostics: list[str] = field(default_factory=list)
    attempts: int = 0
    completions: list[str] = field(default_factory=list)
    answers: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.theory is not None and not self.diagnostics


def _attempt(completion: str) -> tuple[Optional[str], Optional[Theory], list[str], tuple[str, ...]]:
    try:
        extracted = extract_code(completion)
    except FormalizationError as exc:
        return None, None, [str(exc)], ()
    try:
        theory = parse_theory(extracted.source)
    except TheoryParseError as exc:
        where = f" at {exc.span}" if exc.span is not None else ""
        expected = f" (expected one of: {', '.join(exc.expected)})" if exc.expected else ""
        return extracted.source, None, [f"{exc}{where}{expected}"], extracted.answers
    except TheoryCheckError as exc:
        return extracted.source, None, [str(item) for item in exc.diagnostics], extracted.answers
    return extracted.source, theory, [], extracted.answers


def formalize_with_retry(
    client: ChatClient,
    template: PromptTemplate,
    problem: ProblemRecord,
    params: Optional[GenerationParams] = None,
) -> FormalizationResult:
    """Formalize ``problem``, retrying once with the checker's diagnostics.

    Transport failures propagate as :class:`ChatTransportError`; a second
    failed attempt is returned with its diagnostics retained.
    """

    base = params or GenerationParams()
    messages = render_prompt(template, problem)
    result = FormalizationResult()
    for attempt in (1, 2):
        call = base.model_copy(update={"problem_id": problem.id, "attempt": attempt})
        completion = client.complete(messages, call)
        result.attempts = attempt
        result.completions.append(completion)
        source, theory, diagnostics, answers = _attempt(completion)
        result.source, result.theory, result.diagnostics, result.answers = source, theory, diagnostics, answers
        logger.debug(
            "Formalization attempt finished",
            extra={"problem": problem.id, "attempt": attempt, "diagnostics": len(diagnostics)},
        )
        if not diagnostics:
            break
        retry = template.render_retry(source or completion, diagnostics)
        messages = [*messages, AIMessage(content=completion), HumanMessage(content=retry)]
    if not result.ok:
        logger.warning("Formalization failed", extra={"problem": problem.id, "attempts": result.attempts})
    return result


def question_formulas(theory: Theory) -> list[Formula]:
    """Question formulas stated by a formalization's theorems, dual negations folded away."""

    found: list[Formula] = []
    for declaration in theory.of_kind(DeclarationKind.THEOREM):
        formula = declaration.formula
        if formula is None:
            continue
        if formula in found or Not(formula) in found or (isinstance(formula, Not) and formula.body in found):
            continue
        if isinstance(formula, Not) and declaration.name.startswith("not_"):
            found.append(formula.body)
        else:
            found.append(formula)
    return found
