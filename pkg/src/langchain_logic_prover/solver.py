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

"""Answer one question over a theory: dual searches, replay and verdict."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Optional

from .config import ProverSettings
from .generator import create_generator
from .interpreter import Verdict, build_duals, interpret
from .kernel import Kernel, ProofReport
from .logic import Formula, SymbolTable, Theory, check_formula, format_formula
from .scorer import ScorerProcess
from .search import SearchOutcome, SearchTrace, prove_both

__all__ = ["Solution", "solve"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Solution:
    question: Formula
    verdict: Verdict
    positive: SearchOutcome
    negative: SearchOutcome
    positive_report: Optional[ProofReport] = None
    negative_report: Optional[ProofReport] = None
    names: tuple[str, str] = ("positive", "negative")

    @property
    def proof(self) -> Optional[str]:
        """Script of the proved side when exactly one side was proved."""

        if self.verdict is Verdict.TRUE:
            return self.positive.script_text()
        if self.verdict is Verdict.FALSE:
            return self.negative.script_text()
        return None

    def reports(self) -> list[ProofReport]:
        return [report for report in (self.positive_report, self.negative_report) if report is not None]

    def to_dict(self) -> dict[str, Any]:
        return {
            "question": format_formula(self.question),
            "verdict": self.verdict.value,
            "theorems": list(self.names),
            "positive": self.positive.to_dict(),
            "negative": self.negative.to_dict(),
            "proof": self.proof,
        }


def _replay(kernel: Kernel, outcome: SearchOutcome, name: str) -> Optional[ProofReport]:
    if not outcome.proved:
        return None
    report = kernel.replay(outcome.target, outcome.tactics, name=name)
    if not report.valid:
        logger.warning("Search returned a proof that does not replay", extra={"theorem": name})
    return report


def solve(
    theory: Theory,
    question: Formula,
    settings: Optional[ProverSettings] = None,
    *,
    process: Optional[ScorerProcess] = None,
    trace: Optional[SearchTrace] = None,
) -> Solution:
    """Search both dual theorems of ``question`` and interpret the outcomes.

    Proofs found by the search are replayed through the kernel so that every
    reported proof carries its own validity check.
    """

    resolved = settings or ProverSettings()
    check_formula(SymbolTable.from_theory(theory), question, label="question")
    positive_decl, negative_decl = build_duals(question)
    premises = theory.without_theorems()
    generator = create_generator(premises, resolved.generator_config(), process=process)
    positive, negative = prove_both(
        premises,
        question,
        generator,
        resolved.search_config(),
        concurrent=resolved.concurrent_duals,
        trace=trace,
        names=(positive_decl.name, negative_decl.name),
    )
    kernel = Kernel(premises)
    verdict = interpret(positive, negative)
    logger.debug(
        "Solved question",
        extra={"theorem": positive_decl.name, "status": verdict.value},
    )
    return Solution(
        question=question,
        verdict=verdict,
        positive=positive,
        negative=negative,
        positive_report=_replay(kernel, positive, positive_decl.name),
        negative_report=_replay(kernel, negative, negative_decl.name),
        names=(positive_decl.name, negative_decl.name),
    )
