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

"""Problem corpora stored as JSON lines."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .exceptions import CorpusError, LogicProverError
from .logic import Formula, SymbolTable, Theory, check_formula, is_closed
from .parser import parse_formula, parse_theory

__all__ = [
    "PROOF_STYLES",
    "ProblemRecord",
    "parse_corpus",
    "load_corpus",
    "load_golden_corpus",
    "dump_corpus",
]

logger = logging.getLogger(__name__)

PROOF_STYLES = ("intuitive", "concise")


class ProblemRecord(BaseModel):
    """One question over a textual context, optionally with its formalization."""

    model_config = ConfigDict(extra="forbid", str_strip_whitespace=True)

    id: str = Field(..., min_length=1)
    context: list[str] = Field(default_factory=list)
    question: str = Field(..., min_length=1)
    options: list[str] = Field(default_factory=lambda: ["True", "False", "Unknown"])
    label: str
    questions: list[str] = Field(
        default_factory=list, description="All questions sharing this context, in prompt order."
    )
    question_index: int = Field(default=0, ge=0, description="Position of this question among its siblings.")
    theory: Optional[str] = Field(default=None, description="Attached Lean-subset theory source.")
    formal_question: Optional[str] = Field(default=None, description="Question formula in the theory's vocabulary.")
    gold_premises: Optional[list[str]] = None
    proofs: Optional[dict[str, str]] = Field(
        default=None, description="Gold tactic scripts keyed by style (intuitive, concise)."
    )

    @field_validator("proofs")
    @classmethod
    def _known_styles(cls, value: Optional[dict[str, str]]) -> Optional[dict[str, str]]:
        if value is not None:
            unknown = sorted(set(value) - set(PROOF_STYLES))
            if unknown:
                raise ValueError(f"unknown proof style(s): {', '.join(unknown)}")
        return value

    @model_validator(mode="after")
    def _label_in_options(self) -> ProblemRecord:
        if self.label not in self.options:
            raise ValueError(f"label {self.label!r} is not one of {self.options}")
        if self.questions and self.question_index >= len(self.questions):
            raise ValueError("question_index is outside questions")
        return self

    @property
    def all_questions(self) -> list[str]:
        return self.questions or [self.question]

    def parsed_theory(self) -> Optional[Theory]:
        return parse_theory(self.theory) if self.theory is not None else None

    def question_formula(self, theory: Theory) -> Optional[Formula]:
        """The formal question checked against ``theory``, if one is attached."""

        if self.formal_question is None:
            return None
        formula = parse_formula(self.formal_question)
        if not is_closed(formula):
            raise CorpusError("formal question is not closed", record_id=self.id)
        check_formula(SymbolTable.from_theory(theory), formula, label="question")
        return formula


def _validate(record: ProblemRecord) -> None:
    try:
        theory = record.parsed_theory()
        if theory is not None:
            record.question_formula(theory)
    except CorpusError:
        raise
    except LogicProverError as exc:
        raise CorpusError(str(exc), record_id=record.id) from exc


def parse_corpus(text: str, *, source: str = "<corpus>") -> list[ProblemRecord]:
    """Parse JSON-lines corpus text; records come back sorted by identifier."""

    records: dict[str, ProblemRecord] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{source}:{number}: invalid JSON ({exc.msg})") from exc
        record_id = data.get("id") if isinstance(data, dict) else None
        try:
            record = ProblemRecord.model_validate(data)
        except ValidationError as exc:
            reasons = "; ".join(error["msg"] for error in exc.errors())
            raise CorpusError(f"{source}:{number}: {reasons}", record_id=record_id) from exc
        if record.id in records:
            raise CorpusError(f"{source}:{number}: duplicate identifier", record_id=record.id)
        _validate(record)
        records[record.id] = record
    logger.debug("Loaded corpus", extra={"source": source, "records": len(records)})
    return [records[key] for key in sorted(records)]


def load_corpus(path: Union[str, Path]) -> list[ProblemRecord]:
    location = Path(path)
    try:
        text = location.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"Cannot read corpus {location}: {exc}") from exc
    return parse_corpus(text, source=str(location))


def load_golden_corpus() -> list[ProblemRecord]:
    """The bundled worked examples."""

    text = (resources.files("langchain_logic_prover") / "data" / "golden.jsonl").read_text(encoding="utf-8")
    return parse_corpus(text, source="golden.jsonl")


def dump_corpus(records: Iterable[ProblemRecord], path: Union[str, Path]) -> None:
    lines = [
        json.dumps(record.model_dump(exclude_none=True), ensure_ascii=False, sort_keys=True)
        for record in records
    ]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
