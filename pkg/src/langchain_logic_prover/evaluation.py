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

"""End-to-end evaluation over a problem corpus."""

from __future__ import annotations

import json
import logging
import time
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Protocol

import anyio

from .client import ChatClient, GenerationParams
from .config import ProverSettings
from .corpus import ProblemRecord
from .exceptions import CorpusError, LogicProverError
from .formalizer import PromptTemplate, formalize_with_retry, question_formulas
from .interpreter import OptionMapping, Verdict, score
from .logic import Formula, Theory
from .retrieval import PremiseIndex, rank, recall_at_k
from .scorer import ScorerProcess
from .search import SearchStatus
from .solver import solve

__all__ = [
    "ProblemResult",
    "Pipeline",
    "ProverPipeline",
    "EvaluationReport",
    "evaluate",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemResult:
    """What a pipeline answered for one record."""

    id: str
    label: str
    verdict: Verdict
    positive_status: Optional[SearchStatus] = None
    negative_status: Optional[SearchStatus] = None
    proofs_found: int = 0
    proofs_valid: int = 0
    gold_side_valid: bool = False
    recall_at_1: Optional[float] = None
    recall_at_4: Optional[float] = None
    expansions: int = 0
    attempts: Optional[int] = None
    error: Optional[str] = None
    wall_time: float = 0.0
    correct: bool = False

    @property
    def unknown_by_failure(self) -> bool:
        failures = {SearchStatus.TIMEOUT, SearchStatus.GENERATOR_FAILURE}
        return self.verdict is Verdict.UNKNOWN and (
            self.error is not None
            or self.positive_status in failures
            or self.negative_status in failures
        )

    def to_dict(self, *, include_timing: bool = True) -> dict[str, Any]:
        data: dict[str, Any] = {
            "id": self.id,
            "label": self.label,
            "verdict": self.verdict.value,
            "correct": self.correct,
            "positive": self.positive_status.value if self.positive_status else None,
            "negative": self.negative_status.value if self.negative_status else None,
            "proofs_found": self.proofs_found,
            "proofs_valid": self.proofs_valid,
            "gold_side_valid": self.gold_side_valid,
            "recall_at_1": self.recall_at_1,
            "recall_at_4": self.recall_at_4,
            "expansions": self.expansions,
            "attempts": self.attempts,
            "error": self.error,
        }
        if include_timing:
            data["wall_time"] = self.wall_time
        return data


class Pipeline(Protocol):
    def solve(self, record: ProblemRecord) -> ProblemResult: ...


def _gold_side_valid(verdict: Verdict, gold: Verdict, valid: tuple[bool, bool]) -> bool:
    if gold is Verdict.TRUE:
        return valid[0]
    if gold is Verdict.FALSE:
        return valid[1]
    return verdict is Verdict.UNKNOWN


class ProverPipeline:
    """Attached or formalized theory, then dual search and interpretation."""

    def __init__(
        self,
        settings: Optional[ProverSettings] = None,
        *,
        chat_client: Optional[ChatClient] = None,
        template: Optional[PromptTemplate] = None,
        process: Optional[ScorerProcess] = None,
        formalize: bool = False,
    ) -> None:
        self.settings = settings or ProverSettings()
        self.chat_client = chat_client
        self.template = template
        self.process = process
        self.formalize = formalize

    def _formalize(self, record: ProblemRecord) -> tuple[Theory, Formula, int]:
        if self.chat_client is None:
            raise LogicProverError("Record has no theory and no formalizer is configured")
        template = self.template or PromptTemplate.load()
        params = GenerationParams(temperature=self.settings.temperature, max_tokens=self.settings.max_tokens)
        result = formalize_with_retry(self.chat_client, template, record, params)
        if result.theory is None:
            raise LogicProverError("Formalization failed: " + "; ".join(result.diagnostics))
        questions = question_formulas(result.theory)
        if record.question_index >= len(questions):
            raise LogicProverError("Formalization states no theorem for this question")
        return result.theory, questions[record.question_index], result.attempts

    def _theory(self, record: ProblemRecord) -> tuple[Theory, Formula, Optional[int]]:
        theory = None if self.formalize else record.parsed_theory()
        if theory is not None:
            question = record.question_formula(theory)
            if question is None:
                formulas = question_formulas(theory)
                if record.question_index >= len(formulas):
                    raise LogicProverError("Attached theory states no theorem for this question")
                question = formulas[record.question_index]
            return theory, question, None
        return self._formalize(record)

    def solve(self, record: ProblemRecord) -> ProblemResult:
        theory, question, attempts = self._theory(record)
        solution = solve(theory, question, self.settings, process=self.process)
        gold = OptionMapping.for_options(record.options).verdict_of(record.label)
        reports = (solution.positive_report, solution.negative_report)
        valid = (bool(reports[0] and reports[0].valid), bool(reports[1] and reports[1].valid))
        recall_1 = recall_4 = None
        if record.gold_premises:
            index = PremiseIndex.build(theory.without_theorems(), top_m=4)
            target = solution.negative.target if gold is Verdict.FALSE else question
            ranking = rank(target, index, top_m=4)
            recall_1 = recall_at_k(record.gold_premises, ranking, 1)
            recall_4 = recall_at_k(record.gold_premises, ranking, 4)
        return ProblemResult(
            id=record.id,
            label=record.label,
            verdict=solution.verdict,
            positive_status=solution.positive.status,
            negative_status=solution.negative.status,
            proofs_found=sum(outcome.proved for outcome in (solution.positive, solution.negative)),
            proofs_valid=sum(valid),
            gold_side_valid=_gold_side_valid(solution.verdict, gold, valid),
            recall_at_1=recall_1,
            recall_at_4=recall_4,
            expansions=solution.positive.stats.expansions + solution.negative.stats.expansions,
            attempts=attempts,
        )


def _mean(values: Sequence[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


@dataclass
class EvaluationReport:
    results: list[ProblemResult]
    wall_time: float = 0.0
    summary: dict[str, Any] = field(init=False)

    def __post_init__(self) -> None:
        total = len(self.results)
        correct = sum(result.correct for result in self.results)
        found = sum(result.proofs_found for result in self.results)
        valid = sum(result.proofs_valid for result in self.results)
        statuses: Counter[str] = Counter()
        for result in self.results:
            for status in (result.positive_status, result.negative_status):
                if status is not None:
                    statuses[status.value] += 1
        verdicts = Counter(result.verdict.value for result in self.results)
        self.summary = {
            "problems": total,
            "correct": correct,
            "accuracy": correct / total if total else 0.0,
            "proof_accuracy_valid_among_proved": valid / found if found else None,
            "proof_accuracy_gold_side": sum(r.gold_side_valid for r in self.results) / total if total else 0.0,
            "recall_at_1": _mean([r.recall_at_1 for r in self.results if r.recall_at_1 is not None]),
            "recall_at_4": _mean([r.recall_at_4 for r in self.results if r.recall_at_4 is not None]),
            "statuses": dict(sorted(statuses.items())),
            "verdicts": dict(sorted(verdicts.items())),
            "inconsistent": verdicts.get(Verdict.INCONSISTENT.value, 0),
            "unknown_by_failure": sum(result.unknown_by_failure for result in self.results),
            "errors": sum(result.error is not None for result in self.results),
        }

    @property
    def accuracy(self) -> float:
        return float(self.summary["accuracy"])

    def to_dict(self, *, include_timing: bool = True) -> dict[str, Any]:
        data: dict[str, Any] = {
            "summary": dict(self.summary),
            "results": [result.to_dict(include_timing=include_timing) for result in self.results],
        }
        if include_timing:
            data["wall_time"] = self.wall_time
        return data

    def to_json(self, *, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing=include_timing), indent=2, sort_keys=True, ensure_ascii=False)

    def format_table(self) -> str:
        rows = [("id", "label", "verdict", "ok", "positive", "negative")]
        for result in self.results:
            rows.append(
                (
                    result.id,
                    result.label,
                    result.verdict.value,
                    "yes" if result.correct else "no",
                    result.positive_status.value if result.positive_status else "-",
                    result.negative_status.value if result.negative_status else "-",
                )
            )
        widths = [max(len(row[column]) for row in rows) for column in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]

        def percent(value: Optional[float]) -> str:
            return "n/a" if value is None else f"{value:.1%}"

        summary = self.summary
        lines += [
            "",
            f"accuracy: {percent(summary['accuracy'])} ({summary['correct']}/{summary['problems']})",
            f"proof accuracy (valid among proved): {percent(summary['proof_accuracy_valid_among_proved'])}",
            f"proof accuracy (gold side proved): {percent(summary['proof_accuracy_gold_side'])}",
            f"recall@1: {percent(summary['recall_at_1'])}  recall@4: {percent(summary['recall_at_4'])}",
            f"inconsistent: {summary['inconsistent']}  unknown by failure: {summary['unknown_by_failure']}"
            f"  errors: {summary['errors']}",
        ]
        return "\n".join(lines)


def _score(record: ProblemRecord, result: ProblemResult) -> ProblemResult:
    try:
        mapping = OptionMapping.for_options(record.options)
        correct = result.error is None and score(result.verdict, record.label, mapping)
    except LogicProverError:
        correct = False
    return replace(result, correct=correct)


def _run_one(pipeline: Pipeline, record: ProblemRecord) -> ProblemResult:
    started = time.monotonic()
    try:
        result = pipeline.solve(record)
    except LogicProverError as exc:
        logger.warning("Problem failed", extra={"problem": record.id, "error": str(exc)})
        result = ProblemResult(id=record.id, label=record.label, verdict=Verdict.UNKNOWN, error=str(exc))
    except Exception as exc:
        logger.exception("Problem crashed", extra={"problem": record.id})
        message = f"{type(exc).__name__}: {exc}"
        result = ProblemResult(id=record.id, label=record.label, verdict=Verdict.UNKNOWN, error=message)
    return replace(_score(record, result), wall_time=time.monotonic() - started)


def evaluate(records: Sequence[ProblemRecord], pipeline: Pipeline, *, workers: int = 1) -> EvaluationReport:
    """Run ``pipeline`` over ``records`` with at most ``workers`` problems in flight.

    Results keep corpus order whatever order the workers finish in.
    """

    if not records:
        raise CorpusError("Cannot evaluate an empty corpus")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    results: list[Optional[ProblemResult]] = [None] * len(records)
    started = time.monotonic()

    async def run_all() -> None:
        limiter = anyio.CapacityLimiter(workers)

        async def one(position: int) -> None:
            results[position] = await anyio.to_thread.run_sync(
                _run_one, pipeline, records[position], limiter=limiter
            )

        async with anyio.create_task_group() as group:
            for position in range(len(records)):
                group.start_soon(one, position)

    anyio.run(run_all)
    finished = [result for result in results if result is not None]
    report = EvaluationReport(finished, wall_time=time.monotonic() - started)
    logger.debug("Evaluation finished", extra={"problems": len(finished), "accuracy": report.accuracy})
    return report
