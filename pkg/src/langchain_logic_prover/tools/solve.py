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

"""Question-answering tool over a Lean-subset theory."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from contextlib import ExitStack
from typing import Any, NoReturn, Optional, cast

import anyio
from langchain_core.callbacks import AsyncCallbackManagerForToolRun, CallbackManagerForToolRun
from langchain_core.tools import BaseTool, ToolException
from pydantic import BaseModel, Field

from ..config import ProverSettings
from ..exceptions import LogicProverError
from ..parser import parse_formula, parse_theory
from ..scorer import ScorerProcess, parse_scorer_spec
from ..solver import solve

__all__ = [
    "LogicSolveInput",
    "LogicSolveResult",
    "LogicSolveTool",
]

logger = logging.getLogger(__name__)
tool_error_cls = cast(type[Exception], ToolException)


def _raise_tool_error(operation: str, error: Exception) -> NoReturn:
    message = f"{operation} failed: {error}"
    status = getattr(error, "status", None)
    if status:
        message += f" [status {status}]"
    raise tool_error_cls(message) from error


class LogicSolveInput(BaseModel):
    """Inputs accepted by the solve tool."""

    theory: str = Field(description="Lean-subset source declaring sorts, constants, predicates and axioms.")
    question: str = Field(description="Closed formula over the theory's vocabulary, e.g. 'often_meow Hudson'.")


class LogicSolveResult(BaseModel):
    verdict: str = Field(description="True, False, Unknown or Inconsistent.")
    question: str
    theorems: list[str] = Field(description="Names of the positive and negative theorems.")
    positive: str = Field(description="Search status of the positive theorem.")
    negative: str = Field(description="Search status of the negated theorem.")
    proof: Optional[str] = Field(default=None, description="Tactic script of the proved side.")


class LogicSolveTool(BaseTool):
    """LangChain tool that decides a question by searching both dual theorems."""

    name: str = "logic_solve"
    description: str = (
        "Decide whether a question follows from a Lean-subset theory."
        " Returns True when the question is provable, False when its negation is,"
        " and Unknown when neither is."
    )

    def __init__(
        self,
        *,
        settings: Optional[ProverSettings] = None,
        env: Optional[Mapping[str, str]] = None,
        **kwargs: Any,
    ) -> None:
        kwargs.setdefault("args_schema", LogicSolveInput)
        super().__init__(**kwargs)
        self._settings = ProverSettings.resolve(settings=settings, env=env)

    @property
    def settings(self) -> ProverSettings:
        return self._settings

    def _run(
        self,
        theory: str,
        question: str,
        run_manager: Optional[CallbackManagerForToolRun] = None,
    ) -> dict[str, Any]:
        payload = LogicSolveInput(theory=theory, question=question)
        return self._solve(payload).model_dump()

    async def _arun(
        self,
        theory: str,
        question: str,
        run_manager: Optional[AsyncCallbackManagerForToolRun] = None,
    ) -> dict[str, Any]:
        payload = LogicSolveInput(theory=theory, question=question)
        result = await anyio.to_thread.run_sync(self._solve, payload)
        return result.model_dump()

    def _solve(self, payload: LogicSolveInput) -> LogicSolveResult:
        try:
            parsed = parse_theory(payload.theory)
        except LogicProverError as exc:
            _raise_tool_error("Parse theory", exc)
        try:
            formula = parse_formula(payload.question)
        except LogicProverError as exc:
            _raise_tool_error("Parse question", exc)
        logger.debug("Running logic solve", extra={"question": payload.question})
        try:
            with ExitStack() as stack:
                command = parse_scorer_spec(self._settings.scorer)
                process = (
                    stack.enter_context(ScorerProcess(command, timeout=self._settings.scorer_timeout))
                    if command
                    else None
                )
                solution = solve(parsed, formula, self._settings, process=process)
        except LogicProverError as exc:
            _raise_tool_error("Solve", exc)
        data = solution.to_dict()
        return LogicSolveResult(
            verdict=data["verdict"],
            question=data["question"],
            theorems=data["theorems"],
            positive=data["positive"]["status"],
            negative=data["negative"]["status"],
            proof=data["proof"],
        )
